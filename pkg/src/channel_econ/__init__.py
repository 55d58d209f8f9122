"""Economics of blockchain payment channels.

Analytic channel lifetimes and fees, venue-choice thresholds, market
equilibrium record prices, a Monte-Carlo channel simulator, and a star
(hub) topology extension, with a CLI that exports plot-ready CSV data.
"""

from .model import (
    Constant,
    Direction,
    MarketParams,
    PairParams,
    ParameterError,
    PowerLaw,
    Rng,
    TransferSizeDist,
    Uniform,
    Venue,
    World,
    default_dist,
    default_market,
    default_pair,
    default_pair_asymmetric,
)

__version__ = "0.1.0"

__all__ = [
    "Constant",
    "Direction",
    "MarketParams",
    "PairParams",
    "ParameterError",
    "PowerLaw",
    "Rng",
    "TransferSizeDist",
    "Uniform",
    "Venue",
    "World",
    "default_dist",
    "default_market",
    "default_pair",
    "default_pair_asymmetric",
    "__version__",
]
