"""Star (hub-and-spoke) network: every user holds one channel with a central
bank and routes all transfers through it.

Each user's hub channel sees the user's aggregated in/out flows, so its
lifetime and maintenance cost reduce to the single-channel analysis with
rates (lambda_plus_i, lambda_minus_i).  The bank bears none of the cost, so
the per-user lightning fee is exactly twice the pair-topology fee, and an
end-to-end transfer i -> j costs F_i + F_j.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channel_analytics as ca
from . import market_analytics as ma
from .model import MarketParams, PairParams, TransferSizeDist, World

__all__ = [
    "StarParams",
    "star_channel_lifetime",
    "star_optimal_initialization",
    "star_fee",
    "star_thresholds",
    "star_demand",
    "star_market",
    "hub_locked_capital",
]

STAR_FEE_MULTIPLIER = 2.0
STAR_RESET_CHANNELS = 2.0  # two hub channels serve each pair of users


@dataclass(frozen=True)
class StarParams:
    """Per-user aggregate flows through the hub.

    lambda_plus[i] is user i's total outflow rate, lambda_minus[i] the total
    inflow rate; ell[i] = lambda_plus[i] + lambda_minus[i] transfers/day cross
    user i's hub channel.  w (optional) holds per-user channel capacities in
    transfers.
    """

    lambda_plus: np.ndarray
    lambda_minus: np.ndarray
    w: np.ndarray | None = None

    def __post_init__(self) -> None:
        lp = np.asarray(self.lambda_plus, dtype=float)
        lm = np.asarray(self.lambda_minus, dtype=float)
        object.__setattr__(self, "lambda_plus", lp)
        object.__setattr__(self, "lambda_minus", lm)
        if lp.shape != lm.shape or lp.ndim != 1:
            raise ca.DomainError("lambda_plus and lambda_minus must be equal-length vectors")
        if np.any(lp < 0) or np.any(lm < 0):
            raise ca.DomainError("aggregate rates must be nonnegative")
        if self.w is not None:
            w = np.asarray(self.w, dtype=float)
            object.__setattr__(self, "w", w)
            if w.shape != lp.shape:
                raise ca.DomainError("w must match the number of users")

    @classmethod
    def from_matrix(cls, rates: np.ndarray, w: np.ndarray | None = None) -> "StarParams":
        """Build aggregates from a full transfer-rate matrix rates[i, j]."""
        rates = np.asarray(rates, dtype=float)
        if rates.ndim != 2 or rates.shape[0] != rates.shape[1]:
            raise ca.DomainError("rate matrix must be square")
        if np.any(rates < 0):
            raise ca.DomainError("rates must be nonnegative")
        return cls(lambda_plus=rates.sum(axis=1), lambda_minus=rates.sum(axis=0), w=w)

    @classmethod
    def uniform(cls, n_users: int, lam: float, w: float | None = None) -> "StarParams":
        """Symmetric-uniform shorthand: every user sends and receives lam
        transfers/day, so each hub channel carries ell_i = 2*lam."""
        if n_users < 2:
            raise ca.DomainError("need at least 2 users")
        lp = np.full(n_users, float(lam))
        caps = np.full(n_users, float(w)) if w is not None else None
        return cls(lambda_plus=lp, lambda_minus=lp.copy(), w=caps)

    @property
    def n_users(self) -> int:
        return self.lambda_plus.shape[0]

    def ell(self, i: int) -> float:
        return float(self.lambda_plus[i] + self.lambda_minus[i])

    def pair_equivalent(self, i: int) -> PairParams:
        """The two-party channel whose dynamics match user i's hub channel."""
        return PairParams(
            lambda_a=float(self.lambda_plus[i]), lambda_b=float(self.lambda_minus[i])
        )

    def is_uniform_symmetric(self) -> bool:
        return bool(
            np.all(self.lambda_plus == self.lambda_plus[0])
            and np.all(self.lambda_minus == self.lambda_plus[0])
        )


def star_channel_lifetime(
    star: StarParams,
    i: int,
    w: float,
    m: float,
    model: ca.LifetimeModel | None = None,
) -> float:
    """Expected lifetime (days) of user i's hub channel from the state where
    the user holds m of the w transfers.  Defaults to the exact model matching
    the user's flow balance; pass LINEAR_ASYMMETRIC for the drift approximation.
    """
    pair = star.pair_equivalent(i)
    if model is None:
        model = (
            ca.LifetimeModel.EXACT_SYMMETRIC
            if pair.symmetric()
            else ca.LifetimeModel.EXACT_ASYMMETRIC
        )
    spec = ca.ChannelSpec(w=w, m=m, z=1.0, pair=pair)
    return ca.lifetime_days(spec, model)


def star_optimal_initialization(star: StarParams, i: int, w: float) -> tuple[float, float]:
    """Best split of user i's hub channel and its lifetime: balanced users
    split w/2 each; net senders hold all w, net receivers none."""
    return ca.optimal_initialization(star.pair_equivalent(i), w)


def star_fee(
    star: StarParams,
    i: int,
    market: MarketParams,
    z: float,
    w_i: float,
    phi: float,
) -> float:
    """Per-transfer fee user i pays on their hub channel: twice the pair fee
    at identical (ell_i, z, w_i, phi), because the bank bears no cost."""
    return STAR_FEE_MULTIPLIER * ca.fee_exact(market, star.pair_equivalent(i), z, w_i, phi)


def star_end_to_end_fee(
    star: StarParams,
    i: int,
    j: int,
    market: MarketParams,
    z: float,
    w_i: float,
    w_j: float,
    phi: float,
) -> float:
    """Cost of one transfer i -> j through the hub: both channels bill."""
    return ca.fee_exact(market, star.pair_equivalent(i), z, w_i, phi) + ca.fee_exact(
        market, star.pair_equivalent(j), z, w_j, phi
    )


def _uniform_pair(star: StarParams) -> PairParams:
    if not star.is_uniform_symmetric():
        raise ca.DomainError("star market analysis needs the symmetric-uniform shorthand")
    return star.pair_equivalent(0)


def star_thresholds(
    market: MarketParams, star: StarParams, phi: float
) -> ma.Thresholds:
    """Venue thresholds with the doubled lightning cost."""
    return ma.thresholds(market, _uniform_pair(star), phi, STAR_FEE_MULTIPLIER)


def star_demand(
    market: MarketParams,
    star: StarParams,
    dist: TransferSizeDist,
    phi: float,
    method: str = "auto",
) -> ma.DemandPoint:
    """Record demand per pair of users: two hub channels' resets plus the
    shared on-chain transfers, with venue choice at the doubled fee."""
    return ma.demand_with_lightning(
        market,
        _uniform_pair(star),
        dist,
        phi,
        fee_multiplier=STAR_FEE_MULTIPLIER,
        reset_channels=STAR_RESET_CHANNELS,
        method=method,
    )


def star_market(
    market: MarketParams,
    star: StarParams,
    dist: TransferSizeDist,
    n: float,
    phi_grid,
    world: World = World.WITH_LIGHTNING,
) -> tuple[list[ma.DemandPoint], ma.EquilibriumResult]:
    """Demand curve over phi_grid plus the market equilibrium for n users in
    the star topology (pairs pipeline with doubled lightning cost and two
    resetting channels per user pair)."""
    pair = _uniform_pair(star)
    if world is World.NO_LIGHTNING:
        curve = [ma.demand_no_lightning(market, pair, dist, phi) for phi in phi_grid]
        eq = ma.equilibrium_fee(market, pair, dist, n, world)
        return curve, eq
    curve = [star_demand(market, star, dist, phi) for phi in phi_grid]
    eq = ma.equilibrium_fee(
        market,
        pair,
        dist,
        n,
        world,
        fee_multiplier=STAR_FEE_MULTIPLIER,
        reset_channels=STAR_RESET_CHANNELS,
        method="root",
    )
    return curve, eq


def hub_locked_capital(star: StarParams, z: float) -> float:
    """Diagnostic: bitcoins the bank must lock across all hub channels under
    optimal initialization, sum over users of (w_i - m_i*) * z."""
    if star.w is None:
        raise ca.DomainError("star has no channel capacities set")
    total = 0.0
    for i in range(star.n_users):
        m_star, _ = star_optimal_initialization(star, i, float(star.w[i]))
        total += (float(star.w[i]) - m_star) * z
    return total
