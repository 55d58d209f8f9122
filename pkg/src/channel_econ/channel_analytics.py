"""Single-channel mathematics: expected lifetimes, optimal initial balance,
per-transaction fee, and optimal capacity.

Channel capacity ``w`` and balance ``m`` are measured in *transfers*; a
channel holding ``w`` transfers of ``z`` bitcoins each locks ``w * z``
bitcoins.  Lifetimes are expected values of the absorption time of the
balance random walk on ``{0, ..., w}``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .model import MarketParams, PairParams

__all__ = [
    "DomainError",
    "SingularPError",
    "DegenerateLifetimeError",
    "ChannelSpec",
    "LifetimeModel",
    "P_SINGULAR_TOL",
    "lifetime_transfers_asymmetric",
    "lifetime_transfers_symmetric",
    "lifetime_days",
    "optimal_initialization",
    "fee_exact",
    "fee_approx",
    "fee_gap_bound",
    "optimal_capacity",
    "optimal_fee",
]

# below this distance from p = 1/2 the closed form is 0/0; use the symmetric one
P_SINGULAR_TOL = 1e-9

# beyond this exponent, (p/(1-p))**w over/underflows; switch to log space
_LOG_RATIO_LIMIT = 700.0


class DomainError(ValueError):
    """An argument lies outside the formula's domain."""


class SingularPError(ValueError):
    """p is (numerically) 1/2; the asymmetric closed form does not apply."""


class DegenerateLifetimeError(ValueError):
    """The channel lifetime is zero, so no per-transfer fee can amortize costs."""


class LifetimeModel(enum.Enum):
    EXACT_SYMMETRIC = "exact_symmetric"
    EXACT_ASYMMETRIC = "exact_asymmetric"
    LINEAR_ASYMMETRIC = "linear_asymmetric"


@dataclass(frozen=True)
class ChannelSpec:
    """A funded channel: capacity w, Alice's balance m (both in transfers),
    transfer size z in bitcoins, and the pair's transfer rates."""

    w: float
    m: float
    z: float
    pair: PairParams

    def __post_init__(self) -> None:
        if self.w <= 0:
            raise DomainError(f"capacity w must be positive, got {self.w}")
        if not 0 <= self.m <= self.w:
            raise DomainError(f"balance m must lie in [0, w], got m={self.m}, w={self.w}")
        if self.z <= 0:
            raise DomainError(f"transfer size z must be positive, got {self.z}")

    @property
    def capacity_btc(self) -> float:
        return self.w * self.z


def _check_state(w: float, m: float) -> None:
    if w <= 0:
        raise DomainError(f"capacity w must be positive, got {w}")
    if not 0 <= m <= w:
        raise DomainError(f"balance m must lie in [0, w], got m={m}, w={w}")


def lifetime_transfers_asymmetric(w: float, m: float, p: float) -> float:
    """Expected number of transfers until either balance hits zero, when each
    transfer is made by Alice with probability p (her balance steps -1) and by
    Bob with probability 1-p.

    Evaluates m/(2p-1) - (w/(2p-1)) * (1 - rho**m) / (1 - rho**w) with
    rho = p/(1-p), switching to log space when rho**w would overflow.
    """
    _check_state(w, m)
    if not 0 < p < 1:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    if abs(p - 0.5) < P_SINGULAR_TOL:
        raise SingularPError(
            f"p={p} is within {P_SINGULAR_TOL} of 1/2; use the symmetric formula"
        )
    if m == 0 or m == w:
        return 0.0
    log_rho = math.log(p) - math.log1p(-p)
    if abs(w * log_rho) > _LOG_RATIO_LIMIT:
        if log_rho > 0:
            # rho**w huge: (1-rho^m)/(1-rho^w) = rho^(m-w) (1-rho^-m)/(1-rho^-w)
            ratio = (
                math.exp((m - w) * log_rho)
                * (1.0 - math.exp(-m * log_rho))
                / (1.0 - math.exp(-w * log_rho))
            )
        else:
            # rho**w underflows to 0
            ratio = 1.0 - math.exp(m * log_rho)
    else:
        ratio = math.expm1(m * log_rho) / math.expm1(w * log_rho)
    return (m - w * ratio) / (2.0 * p - 1.0)


def lifetime_transfers_symmetric(w: float, m: float) -> float:
    """Expected number of transfers until absorption when p = 1/2: w*m - m**2."""
    _check_state(w, m)
    return w * m - m * m


def lifetime_days(spec: ChannelSpec, model: LifetimeModel) -> float:
    """Expected channel lifetime in days under the chosen model.

    EXACT_SYMMETRIC:   (w*m - m**2) / (2*lambda)        (requires delta == 0)
    EXACT_ASYMMETRIC:  transfers formula at p = lambda_a/ell, divided by ell
    LINEAR_ASYMMETRIC: m' / delta with m' the balance of the larger-flow side
    """
    pair = spec.pair
    if model is LifetimeModel.EXACT_SYMMETRIC:
        if not pair.symmetric():
            raise DomainError("EXACT_SYMMETRIC requires lambda_a == lambda_b")
        return lifetime_transfers_symmetric(spec.w, spec.m) / pair.ell
    if model is LifetimeModel.EXACT_ASYMMETRIC:
        return lifetime_transfers_asymmetric(spec.w, spec.m, pair.p_alice) / pair.ell
    if model is LifetimeModel.LINEAR_ASYMMETRIC:
        if pair.delta == 0:
            raise DomainError("LINEAR_ASYMMETRIC requires delta > 0")
        m_eff = spec.m if pair.lambda_a >= pair.lambda_b else spec.w - spec.m
        return m_eff / pair.delta
    raise DomainError(f"unknown lifetime model {model!r}")


def optimal_initialization(pair: PairParams, w: float) -> tuple[float, float]:
    """Lifetime-maximizing initial balance and the resulting lifetime in days.

    Symmetric pairs split the capacity (m* = w/2, T = w**2/(4*ell)); asymmetric
    pairs give everything to the larger-flow side, whose linear-drift lifetime
    is T = w/delta.  Returns (m_star, T_days); m_star is Alice's balance.
    """
    if w < 0:
        raise DomainError(f"capacity w must be nonnegative, got {w}")
    if pair.symmetric():
        return w / 2.0, w * w / (4.0 * pair.ell)
    m_star = w if pair.lambda_a > pair.lambda_b else 0.0
    return m_star, w / pair.delta


def fee_exact(
    market: MarketParams, pair: PairParams, z: float, w: float, phi: float
) -> float:
    """Per-transaction fee that exactly covers channel maintenance over the
    optimally-initialized lifetime T(w):

        F(w) = (w*z*(1+r)**T(w) + a*phi - w*z) / (T(w) * ell)

    i.e. compound interest on the locked capital plus one reset cost,
    amortized over the expected T(w)*ell transfers.
    """
    if w < 0:
        raise DomainError(f"capacity w must be nonnegative, got {w}")
    if phi < 0:
        raise DomainError(f"phi must be nonnegative, got {phi}")
    _, t_days = optimal_initialization(pair, w)
    if t_days == 0:
        raise DegenerateLifetimeError("lifetime T(w) is zero; fee is undefined")
    capital = w * z
    interest = capital * math.expm1(t_days * math.log1p(market.r))
    return (interest + market.a * phi) / (t_days * pair.ell)


def fee_approx(
    market: MarketParams, pair: PairParams, z: float, w: float, phi: float
) -> float:
    """First-order (in r) fee: w*z*r/ell + a*phi/(T(w)*ell).

    Reduces to z*r*w/ell + 4*a*phi/w**2 for symmetric pairs and to
    w*z*r/ell + a*phi*delta/(w*ell) for asymmetric ones.
    """
    if w < 0:
        raise DomainError(f"capacity w must be nonnegative, got {w}")
    if phi < 0:
        raise DomainError(f"phi must be nonnegative, got {phi}")
    _, t_days = optimal_initialization(pair, w)
    if t_days == 0:
        raise DegenerateLifetimeError("lifetime T(w) is zero; fee is undefined")
    return w * z * market.r / pair.ell + market.a * phi / (t_days * pair.ell)


def fee_gap_bound(
    market: MarketParams,
    pair: PairParams,
    z: float,
    w: float,
    r_max: float | None = None,
) -> float:
    """Diagnostic upper bound on |fee_exact - fee_approx|.

    The gap is w*z*h(r)/(T*ell) where h(r) = (1+r)**T - 1 - r*T is the Taylor
    remainder; |h(r)| <= M*r**2/2 with M the maximum of |T(T-1)(1+r)**(T-2)|
    over [0, r_max].  Interpretation note: the bound treats w as the expansion
    variable and r_max (default: the market rate) as the top of the interest
    interval.
    """
    if r_max is None:
        r_max = market.r
    _, t_days = optimal_initialization(pair, w)
    if t_days == 0:
        raise DegenerateLifetimeError("lifetime T(w) is zero")
    big_m = abs(t_days * (t_days - 1.0)) * max((1.0 + r_max) ** (t_days - 2.0), 1.0)
    return w * z * big_m * r_max * r_max / (2.0 * t_days * pair.ell)


def optimal_capacity(
    market: MarketParams, pair: PairParams, z: float, phi: float
) -> float:
    """Capacity (in transfers) minimizing the first-order fee.

    Symmetric: w_opt = (8*a*phi*ell/(z*r))**(1/3);
    asymmetric: w_opt = sqrt(a*phi*delta/(z*r)).
    """
    if market.r <= 0 or z <= 0:
        raise DomainError("optimal capacity needs r > 0 and z > 0 (else unbounded)")
    if phi <= 0:
        raise DomainError(f"phi must be positive, got {phi}")
    if pair.symmetric():
        return (8.0 * market.a * phi * pair.ell / (z * market.r)) ** (1.0 / 3.0)
    return math.sqrt(market.a * phi * pair.delta / (z * market.r))


def optimal_fee(
    market: MarketParams, pair: PairParams, z: float, phi: float
) -> float:
    """First-order fee at the optimal capacity.

    Symmetric: 3 * (a*phi*z**2*r**2 / ell**2)**(1/3);
    asymmetric: 2 * sqrt(a*phi*delta*z*r / ell**2).
    """
    if phi < 0:
        raise DomainError(f"phi must be nonnegative, got {phi}")
    if pair.symmetric():
        return 3.0 * (market.a * phi * z * z * market.r * market.r) ** (1.0 / 3.0) / (
            pair.ell ** (2.0 / 3.0)
        )
    return 2.0 * math.sqrt(market.a * phi * pair.delta * z * market.r) / pair.ell
