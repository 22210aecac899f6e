"""Concrete multiplier schemes."""

import numpy as np

from ..types import SchemeKind
from .base import MultiplierScheme


class StandardNormal(MultiplierScheme):
    """i.i.d. standard normal weights."""

    kind = SchemeKind.NORMAL

    def sample(self, at_risk: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        return rng.standard_normal(at_risk.size)

    def moments(self, at_risk: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        m = at_risk.size
        return np.zeros(m), np.ones(m), np.full(m, 3.0)


class CenteredPoisson(MultiplierScheme):
    """i.i.d. Poisson(1) - 1 weights."""

    kind = SchemeKind.POISSON

    def sample(self, at_risk: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        return rng.poisson(1.0, at_risk.size).astype(float) - 1.0

    def moments(self, at_risk: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        # Central fourth moment of Poisson(lam) is lam + 3 lam^2.
        m = at_risk.size
        return np.zeros(m), np.ones(m), np.full(m, 4.0)


class WeirdBinomial(MultiplierScheme):
    """Binomial(Y, 1/Y) - 1 weights, Y the number at risk at the slot's jump.

    Draws are independent given the data but not identically distributed:
    the variance is 1 - 1/Y and a slot with Y = 1 always gets weight 0.
    """

    kind = SchemeKind.WEIRD

    def sample(self, at_risk: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        y = at_risk.astype(np.int64)
        # numpy's binomial sampler is exact (inversion for small n*p, BTPE otherwise).
        return rng.binomial(y, 1.0 / y).astype(float) - 1.0

    def moments(self, at_risk: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        y = at_risk.astype(float)
        p = 1.0 / y
        pq = p * (1.0 - p)
        variance = y * pq
        fourth = y * pq * (1.0 + 3.0 * (y - 2.0) * pq)
        return np.zeros(y.size), variance, fourth
