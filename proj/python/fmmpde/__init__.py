"""Swaption pricing on backward-looking rates.

Correlated Monte Carlo simulation and a directionally split finite-difference
solver over the same market description, cross-validating each other.
"""

from ._core import (
    CIEstimate,
    ConvergenceRow,
    ConvergenceStudy,
    GridConfig,
    MarketData,
    MCConfig,
    PdeConfig,
    PriceReport,
    SwaptionSpec,
    annuity,
    atm_strike,
    convergence_study,
    default_r_max,
    implied_vol,
    initial_discount,
    make_market,
    price_mc,
    price_pde,
)

__all__ = [
    "CIEstimate",
    "ConvergenceRow",
    "ConvergenceStudy",
    "GridConfig",
    "MarketData",
    "MCConfig",
    "PdeConfig",
    "PriceReport",
    "SwaptionSpec",
    "annuity",
    "atm_strike",
    "convergence_study",
    "default_r_max",
    "implied_vol",
    "initial_discount",
    "make_market",
    "price_mc",
    "price_pde",
]

__version__ = "0.1.0"
