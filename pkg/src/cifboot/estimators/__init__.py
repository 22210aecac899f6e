"""Non-parametric estimators for competing risks."""

from .covariance import CovarianceGrid, covariance_grid, zeta_plugin
from .nonparametric import aalen_johansen, kaplan_meier, left_values, nelson_aalen
from .variance import sigma2_hat, sigma2_hat_mc

__all__ = [
    "kaplan_meier",
    "nelson_aalen",
    "aalen_johansen",
    "left_values",
    "zeta_plugin",
    "covariance_grid",
    "CovarianceGrid",
    "sigma2_hat",
    "sigma2_hat_mc",
]
