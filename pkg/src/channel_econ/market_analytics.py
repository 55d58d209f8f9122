"""Pairs-topology market: venue-choice thresholds, per-pair demand for
blockchain records, and the equilibrium record price.

Every pair compares three options per transfer: skip (utility 0), pay on
chain (beta*z - phi), or run a lightning channel at its optimal capacity
(beta*z - F_opt).  The resulting transfer-size thresholds are all linear in
phi.  Demand aggregates channel-reset records and direct on-chain transfers
over the transfer-size distribution; the equilibrium price clears
pairs * D(phi) = tau.

``fee_multiplier`` scales the lightning fee a user faces (the star topology
doubles it); ``reset_channels`` counts channels whose resets bill to one
pair of users (1 for pairs, 2 for the hub topology).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy.integrate import quad
from scipy.optimize import brentq

from .channel_analytics import DomainError, optimal_fee
from .model import (
    Constant,
    MarketParams,
    PairParams,
    PowerLaw,
    TransferSizeDist,
    Uniform,
    Venue,
    World,
)

__all__ = [
    "QuadratureFailure",
    "BracketFailure",
    "Thresholds",
    "DemandPoint",
    "EquilibriumResult",
    "Regime",
    "thresholds",
    "venue_choice",
    "reset_record_rate",
    "demand_no_lightning",
    "demand_with_lightning",
    "equilibrium_fee",
    "price_curve",
]

_ROOT_RTOL = 1e-12
_QUAD_ABS_TOL = 1e-9


class QuadratureFailure(ArithmeticError):
    """Adaptive quadrature could not meet the demand tolerance."""


class BracketFailure(ArithmeticError):
    """Demand never meets supply on the searched fee interval."""


class Regime(enum.Enum):
    ZERO_PRICE = "zero-price"
    LIGHTNING_DOMINANT = "lightning-dominant"
    COINCIDENT = "coincident-with-no-lightning"


@dataclass(frozen=True)
class Thresholds:
    """Transfer-size cutoffs: below min(t_nl, t_nb) nobody transfers, between
    t_nl and t_lb lightning wins, above max(t_nb, t_lb) the blockchain wins."""

    t_nl: float
    t_nb: float
    t_lb: float


@dataclass(frozen=True)
class DemandPoint:
    """Expected per-pair, per-day market quantities at one record price."""

    phi: float
    records_per_day: float
    lightning_tx: float
    blockchain_tx: float
    lightning_volume: float
    blockchain_volume: float  # may be inf (power-law tails have no mean)


@dataclass(frozen=True)
class EquilibriumResult:
    phi_eq: float
    miner_revenue: float  # tau * phi_eq, bitcoins/day
    demand: DemandPoint
    regime: Regime
    world: World
    n_users: float
    method: str


def thresholds(
    market: MarketParams,
    pair: PairParams,
    phi: float,
    fee_multiplier: float = 1.0,
) -> Thresholds:
    """Venue thresholds at record price phi; all three linear in phi.

    Symmetric: t_nl = 27*a*r^2/(ell^2*beta^3)*phi, t_nb = phi/beta,
    t_lb = ell/sqrt(27*a*r^2)*phi.  Asymmetric: t_nl = 4*delta*a*r/(ell^2*beta^2)*phi,
    t_lb = ell^2/(4*delta*a*r)*phi.  A fee multiplier k rescales the lightning
    cutoffs (t_nl * k^3, t_lb / k^(3/2) symmetric; t_nl * k^2, t_lb / k^2
    asymmetric); t_nb never moves.
    """
    if phi < 0:
        raise DomainError(f"phi must be nonnegative, got {phi}")
    k = fee_multiplier
    a, r, beta = market.a, market.r, market.beta
    ell = pair.ell
    t_nb = phi / beta
    if pair.symmetric():
        t_nl = 27.0 * k**3 * a * r * r / (ell * ell * beta**3) * phi
        t_lb = ell / (k**1.5 * math.sqrt(27.0 * a * r * r)) * phi
    else:
        delta = pair.delta
        t_nl = 4.0 * k * k * delta * a * r / (ell * ell * beta * beta) * phi
        t_lb = ell * ell / (4.0 * k * k * delta * a * r) * phi
    return Thresholds(t_nl=t_nl, t_nb=t_nb, t_lb=t_lb)


def venue_choice(
    market: MarketParams,
    pair: PairParams,
    z: float,
    phi: float,
    world: World = World.WITH_LIGHTNING,
    fee_multiplier: float = 1.0,
) -> Venue:
    """Venue with the highest net utility among {0, beta*z - phi,
    beta*z - k*F_opt(z)}; exact ties break Blockchain > Lightning > None."""
    if z <= 0:
        raise DomainError(f"z must be positive, got {z}")
    # second key resolves exact ties (measure-zero for continuous z)
    options = [
        (0.0, 0, Venue.NONE),
        (market.beta * z - phi, 2, Venue.BLOCKCHAIN),
    ]
    if world is World.WITH_LIGHTNING:
        u_l = market.beta * z - fee_multiplier * optimal_fee(market, pair, z, phi)
        options.append((u_l, 1, Venue.LIGHTNING))
    return max(options, key=lambda opt: (opt[0], opt[1]))[2]


def reset_record_rate(
    market: MarketParams, pair: PairParams, z: float, phi: float
) -> float:
    """Records per day an optimally-funded channel feeds into the chain:
    a / T(w_opt).  Symmetric: (ell*a*r^2*z^2/phi^2)^(1/3); asymmetric:
    sqrt(delta*a*r*z/phi)."""
    if phi <= 0:
        raise DomainError(f"phi must be positive, got {phi}")
    a, r = market.a, market.r
    if pair.symmetric():
        return (pair.ell * a * r * r * z * z / (phi * phi)) ** (1.0 / 3.0)
    return math.sqrt(pair.delta * a * r * z / phi)


# ---------------------------------------------------------------------------
# demand


def _lightning_count_volume(
    dist: TransferSizeDist, ell: float, t_nl: float, t_lb: float
) -> tuple[float, float]:
    if t_lb <= t_nl:
        return 0.0, 0.0
    count = ell * max(0.0, dist.sf(t_nl) - dist.sf(t_lb))
    volume = ell * dist.partial_mean(t_nl, t_lb)
    return count, volume


def demand_no_lightning(
    market: MarketParams,
    pair: PairParams,
    dist: TransferSizeDist,
    phi: float,
    method: str = "auto",
) -> DemandPoint:
    """Per-pair record demand when the blockchain is the only venue:
    ell * P(z > phi/beta) records/day."""
    if phi < 0:
        raise DomainError(f"phi must be nonnegative, got {phi}")
    ell = pair.ell
    t_nb = phi / market.beta
    if method == "quadrature" and not isinstance(dist, Constant):
        tail = _quad_checked(dist.pdf, max(t_nb, dist.support[0]), dist.support[1])
        records = ell * tail if t_nb > dist.support[0] else ell
    else:
        records = ell * dist.sf(t_nb)
    return DemandPoint(
        phi=phi,
        records_per_day=records,
        lightning_tx=0.0,
        blockchain_tx=ell * dist.sf(t_nb),
        lightning_volume=0.0,
        blockchain_volume=ell * dist.partial_mean(t_nb, math.inf),
    )


def _quad_checked(fn, lo: float, hi: float) -> float:
    """Adaptive quadrature of fn over (lo, hi), lo > 0.  Integrates in log
    space so intervals spanning many decades keep their left-edge mass."""
    if hi <= lo:
        return 0.0
    if lo <= 0.0:
        raise DomainError("quadrature interval must start above 0")
    u_hi = math.log(hi) if math.isfinite(hi) else math.inf

    def integrand(u: float) -> float:
        # integrable fn has fn(z)*z -> 0, so the far tail contributes nothing
        if u > 700.0:
            return 0.0
        z = math.exp(u)
        return fn(z) * z

    val, err = quad(
        integrand, math.log(lo), u_hi, epsabs=1e-12, epsrel=1e-12, limit=400
    )
    if err > _QUAD_ABS_TOL * max(1.0, abs(val)):
        raise QuadratureFailure(
            f"integral error estimate {err:g} exceeds tolerance on [{lo:g}, {hi:g}]"
        )
    return val


def _powerlaw_lightning_records(
    market: MarketParams, pair: PairParams, z_min: float, phi: float, lo: float, hi: float
) -> float:
    """Closed-form integral of the reset-record rate against the power-law pdf
    between transfer sizes lo and hi (already clamped to z >= z_min)."""
    if hi <= lo:
        return 0.0
    a, r, ell = market.a, market.r, pair.ell
    if pair.symmetric():
        coef = (ell * a * r * r / (phi * phi)) ** (1.0 / 3.0)
        return 3.0 * z_min * coef * (lo ** (-1.0 / 3.0) - hi ** (-1.0 / 3.0))
    coef = math.sqrt(pair.delta * a * r / phi)
    return 2.0 * z_min * coef * (lo**-0.5 - hi**-0.5)


def _uniform_lightning_records_paper(
    market: MarketParams, pair: PairParams, z_max: float, phi: float, t: Thresholds
) -> float | None:
    """The uniform-distribution with-lightning record demand, as the verbatim
    piecewise expressions (lightning resets + on-chain transfers together).
    Returns None when the guard conditions behind those expressions fail."""
    a, r, beta, ell = market.a, market.r, market.beta, pair.ell
    if t.t_nb > t.t_lb:
        return None
    if pair.symmetric():
        if phi < 3.0 * z_max / ell * math.sqrt(3.0) * math.sqrt(a) * r:
            return (
                -4.0 * math.sqrt(3.0) * ell * ell * phi / (45.0 * math.sqrt(a) * z_max * r)
                + ell
                - 729.0 * a * a * phi * r**4 / (5.0 * ell**3 * beta**5 * z_max)
            )
        if phi < ell * ell * beta**3 * z_max / (27.0 * a * r * r):
            return (
                3.0 * (ell * a) ** (1.0 / 3.0) * z_max ** (2.0 / 3.0) * r ** (2.0 / 3.0)
                / (5.0 * phi ** (2.0 / 3.0))
            ) - 729.0 * a * a * phi * r**4 / (5.0 * ell**3 * beta**5 * z_max)
        return 0.0
    delta = pair.delta
    if phi < 4.0 * delta * a * z_max * r / (ell * ell):
        return (
            -(ell**3) * phi / (6.0 * delta * a * z_max * r)
            + ell
            - 16.0 * delta**2 * a * a * phi * r * r / (3.0 * ell**3 * beta**3 * z_max)
        )
    if phi < ell * ell * beta * beta * z_max / (4.0 * delta * a * r):
        return (
            2.0 * math.sqrt(delta) * math.sqrt(a) * math.sqrt(z_max) * math.sqrt(r)
            / (3.0 * math.sqrt(phi))
        ) - 16.0 * delta**2 * a * a * phi * r * r / (3.0 * ell**3 * beta**3 * z_max)
    return 0.0


def demand_with_lightning(
    market: MarketParams,
    pair: PairParams,
    dist: TransferSizeDist,
    phi: float,
    fee_multiplier: float = 1.0,
    reset_channels: float = 1.0,
    method: str = "auto",
) -> DemandPoint:
    """Per-pair record demand when lightning is available.

    records/day = reset_channels * integral of a/T(w_opt(z, phi)) over the
    lightning region (t_nl, t_lb) plus ell * P(z > max(t_nb, t_lb)) on-chain
    transfers.  ``method`` is "auto" (closed forms when available),
    "closed", or "quadrature".
    """
    if phi < 0:
        raise DomainError(f"phi must be nonnegative, got {phi}")
    ell = pair.ell
    t = thresholds(market, pair, phi, fee_multiplier)
    support_lo, support_hi = dist.support
    lo = max(t.t_nl, support_lo)
    hi = min(t.t_lb, support_hi)
    block_from = max(t.t_nb, t.t_lb)

    lightning_tx, lightning_volume = _lightning_count_volume(dist, ell, t.t_nl, t.t_lb)
    blockchain_tx = ell * dist.sf(block_from)
    blockchain_volume = ell * dist.partial_mean(block_from, math.inf)

    if isinstance(dist, Constant):
        # point mass: classify the single transfer size directly
        in_lightning = t.t_nl < dist.z < t.t_lb and phi > 0.0
        reset_records = (
            reset_record_rate(market, pair, dist.z, phi) if in_lightning else 0.0
        )
        return DemandPoint(
            phi=phi,
            records_per_day=reset_channels * reset_records + blockchain_tx,
            lightning_tx=lightning_tx,
            blockchain_tx=blockchain_tx,
            lightning_volume=lightning_volume,
            blockchain_volume=blockchain_volume,
        )

    if phi == 0.0 or hi <= lo:
        reset_records = 0.0
    elif method in ("auto", "closed") and isinstance(dist, PowerLaw):
        reset_records = _powerlaw_lightning_records(market, pair, dist.z_min, phi, lo, hi)
    elif (
        method in ("auto", "closed")
        and isinstance(dist, Uniform)
        and fee_multiplier == 1.0
        and reset_channels == 1.0
    ):
        combined = _uniform_lightning_records_paper(market, pair, dist.z_max, phi, t)
        if combined is not None:
            return DemandPoint(
                phi=phi,
                records_per_day=max(0.0, combined),
                lightning_tx=lightning_tx,
                blockchain_tx=blockchain_tx,
                lightning_volume=lightning_volume,
                blockchain_volume=blockchain_volume,
            )
        if method == "closed":
            raise DomainError("closed-form uniform demand needs t_nb <= t_lb")
        reset_records = _quad_checked(
            lambda z: reset_record_rate(market, pair, z, phi) * dist.pdf(z), lo, hi
        )
    else:
        if method == "closed":
            raise DomainError(f"no closed form for {type(dist).__name__} here")
        reset_records = _quad_checked(
            lambda z: reset_record_rate(market, pair, z, phi) * dist.pdf(z), lo, hi
        )

    if method == "quadrature":
        blockchain_records = ell * _quad_checked(
            dist.pdf, max(block_from, support_lo), support_hi
        ) if block_from > support_lo else ell
    else:
        blockchain_records = blockchain_tx

    return DemandPoint(
        phi=phi,
        records_per_day=reset_channels * reset_records + blockchain_records,
        lightning_tx=lightning_tx,
        blockchain_tx=blockchain_tx,
        lightning_volume=lightning_volume,
        blockchain_volume=blockchain_volume,
    )


def _demand_records(
    market: MarketParams,
    pair: PairParams,
    dist: TransferSizeDist,
    phi: float,
    world: World,
    fee_multiplier: float,
    reset_channels: float,
) -> float:
    if world is World.NO_LIGHTNING:
        return demand_no_lightning(market, pair, dist, phi).records_per_day
    return demand_with_lightning(
        market, pair, dist, phi, fee_multiplier, reset_channels
    ).records_per_day


# ---------------------------------------------------------------------------
# equilibrium


def _closed_equilibrium(
    market: MarketParams,
    pair: PairParams,
    dist: TransferSizeDist,
    pairs: float,
    world: World,
) -> tuple[float, Regime] | None:
    """Piecewise closed-form equilibrium price where one is known; the
    supply/demand kink sits at pairs*ell = tau."""
    a, r, beta, tau = market.a, market.r, market.beta, market.tau
    ell = pair.ell
    if pairs * ell <= tau:
        return 0.0, Regime.ZERO_PRICE
    if isinstance(dist, PowerLaw):
        z_min = dist.z_min
        if world is World.NO_LIGHTNING:
            return z_min * beta * ell * pairs / tau, Regime.COINCIDENT
        if pair.symmetric():
            if pairs < beta * beta * ell * tau / (27.0 * a * r * r):
                phi = z_min * math.sqrt(27.0 * ell * a) * r * (pairs / tau) ** 1.5
                return phi, Regime.LIGHTNING_DOMINANT
            phi = z_min * (beta * ell - math.sqrt(27.0 * a) * r) * pairs / tau
            return phi, Regime.COINCIDENT
        delta = pair.delta
        if pairs < ell * beta * tau / (4.0 * delta * a * r):
            phi = 4.0 * z_min * delta * a * r * pairs * pairs / (tau * tau)
            return phi, Regime.LIGHTNING_DOMINANT
        return z_min * beta * ell * pairs / tau, Regime.COINCIDENT
    if isinstance(dist, Uniform) and world is World.NO_LIGHTNING:
        phi = beta * dist.z_max * (1.0 - tau / (pairs * ell))
        return phi, Regime.COINCIDENT
    return None


def _root_equilibrium(
    market: MarketParams,
    pair: PairParams,
    dist: TransferSizeDist,
    pairs: float,
    world: World,
    fee_multiplier: float,
    reset_channels: float,
) -> float:
    tau = market.tau
    if pairs * pair.ell <= tau:
        return 0.0

    def surplus(phi: float) -> float:
        return (
            pairs
            * _demand_records(
                market, pair, dist, phi, world, fee_multiplier, reset_channels
            )
            - tau
        )

    lo = 1e-30
    if surplus(lo) <= 0.0:
        return 0.0
    hi = 1e-12
    while surplus(hi) > 0.0:
        hi *= 10.0
        if hi > 1e12:
            raise BracketFailure(
                f"demand never meets supply for phi up to {hi:g} (pairs={pairs:g})"
            )
    return brentq(surplus, lo, hi, xtol=1e-300, rtol=_ROOT_RTOL, maxiter=300)


def equilibrium_fee(
    market: MarketParams,
    pair: PairParams,
    dist: TransferSizeDist,
    n: float,
    world: World,
    fee_multiplier: float = 1.0,
    reset_channels: float = 1.0,
    method: str = "auto",
) -> EquilibriumResult:
    """Record price phi_eq clearing (n/2) * D(phi) = tau, for n users in n/2
    identical pairs.

    On demand plateaus the equilibrium is the infimum of clearing fees, so
    maximum demand at or below supply gives phi_eq = 0.  ``method``: "auto"
    uses the piecewise closed forms where known (power-law both worlds,
    uniform without lightning) and falls back to bracketing + Brent at
    relative tolerance 1e-8 or better; "closed" / "root" force one path.
    """
    if n < 2:
        raise DomainError(f"need at least one pair of users, got n={n}")
    pairs = n / 2.0
    phi_eq: float | None = None
    regime: Regime | None = None
    used = "root"
    if method in ("auto", "closed") and fee_multiplier == 1.0 and reset_channels == 1.0:
        closed = _closed_equilibrium(market, pair, dist, pairs, world)
        if closed is not None:
            phi_eq, regime = closed
            used = "closed"
        elif method == "closed":
            raise DomainError(
                f"no closed-form equilibrium for {type(dist).__name__} in {world.value}"
            )
    if phi_eq is None:
        phi_eq = _root_equilibrium(
            market, pair, dist, pairs, world, fee_multiplier, reset_channels
        )
    if world is World.NO_LIGHTNING:
        demand = demand_no_lightning(market, pair, dist, phi_eq)
    else:
        demand = demand_with_lightning(
            market, pair, dist, phi_eq, fee_multiplier, reset_channels
        )
    if regime is None:
        if phi_eq == 0.0:
            regime = Regime.ZERO_PRICE
        elif world is World.NO_LIGHTNING:
            regime = Regime.COINCIDENT
        else:
            phi_no = equilibrium_fee(
                market, pair, dist, n, World.NO_LIGHTNING, method="auto"
            ).phi_eq
            close = phi_no > 0 and abs(phi_eq - phi_no) <= 0.01 * phi_no
            regime = Regime.COINCIDENT if close else Regime.LIGHTNING_DOMINANT
    return EquilibriumResult(
        phi_eq=phi_eq,
        miner_revenue=market.tau * phi_eq,
        demand=demand,
        regime=regime,
        world=world,
        n_users=n,
        method=used,
    )


def price_curve(
    market: MarketParams,
    pair: PairParams,
    dist: TransferSizeDist,
    n_grid,
    world: World,
    fee_multiplier: float = 1.0,
    reset_channels: float = 1.0,
    method: str = "auto",
) -> list[EquilibriumResult]:
    """Equilibrium results along an ascending grid of user counts."""
    n_grid = list(n_grid)
    if any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise DomainError("n_grid must be strictly increasing")
    return [
        equilibrium_fee(
            market, pair, dist, n, world, fee_multiplier, reset_channels, method
        )
        for n in n_grid
    ]
