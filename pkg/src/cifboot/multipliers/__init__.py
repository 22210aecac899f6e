"""Data-dependent multiplier schemes."""

from .base import MultiplierScheme, SlotMoments
from .diagnostics import DiagnosticReport, diagnose_conditions
from .registry import SchemeRegistry, create_default_registry, get_scheme
from .schemes import CenteredPoisson, StandardNormal, WeirdBinomial
from .weights import SlotLayout, WeightDraw, conditional_moments, draw_weights, slot_layout

__all__ = [
    "MultiplierScheme",
    "SlotMoments",
    "StandardNormal",
    "CenteredPoisson",
    "WeirdBinomial",
    "SchemeRegistry",
    "create_default_registry",
    "get_scheme",
    "SlotLayout",
    "WeightDraw",
    "slot_layout",
    "draw_weights",
    "conditional_moments",
    "DiagnosticReport",
    "diagnose_conditions",
]
