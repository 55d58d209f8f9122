"""Domain types shared by every other module: market parameters, pair
transfer rates, transfer-size distributions, and seeded random streams.

Units follow one convention throughout the package:

* record   -- one transaction's worth of block space (price ``phi`` BTC/record)
* transfer -- one payment of ``z`` bitcoins between the two channel parties
* rates    -- transfers per day; interest rates are per day
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ParameterError",
    "MarketParams",
    "PairParams",
    "PowerLaw",
    "Uniform",
    "Constant",
    "TransferSizeDist",
    "Rng",
    "Direction",
    "Venue",
    "World",
    "sample_transfer_size",
    "dist_pdf",
    "next_transfer_direction",
    "default_market",
    "default_pair",
    "default_pair_asymmetric",
    "default_dist",
]


class ParameterError(ValueError):
    """A domain type was constructed with out-of-range parameters."""


@dataclass(frozen=True)
class MarketParams:
    """Global economy parameters.

    tau: record supply per day, r: daily interest rate, a: records consumed
    by one channel-reset transaction, beta: utility per bitcoin transferred.
    """

    tau: float = 288_000.0
    r: float = 0.04 / 365.0
    a: float = 1.1
    beta: float = 0.01

    def __post_init__(self) -> None:
        if not self.tau > 0:
            raise ParameterError(f"tau must be positive, got {self.tau}")
        if not 0 <= self.r < 1:
            raise ParameterError(f"r must be in [0, 1), got {self.r}")
        if not 1 <= self.a <= 2:
            raise ParameterError(f"a must be in [1, 2], got {self.a}")
        if not 0 < self.beta < 1:
            raise ParameterError(f"beta must be in (0, 1), got {self.beta}")


@dataclass(frozen=True)
class PairParams:
    """Poisson transfer rates of one trading pair (Alice -> Bob and back)."""

    lambda_a: float
    lambda_b: float

    def __post_init__(self) -> None:
        if self.lambda_a < 0 or self.lambda_b < 0:
            raise ParameterError("transfer rates must be nonnegative")
        if self.ell <= 0:
            raise ParameterError("total transfer rate ell must be positive")

    @property
    def ell(self) -> float:
        """Total transfers per day, lambda_a + lambda_b."""
        return self.lambda_a + self.lambda_b

    @property
    def delta(self) -> float:
        """Rate imbalance |lambda_a - lambda_b|."""
        return abs(self.lambda_a - self.lambda_b)

    @property
    def p_alice(self) -> float:
        """Probability that the next transfer is made by Alice."""
        return self.lambda_a / self.ell

    def symmetric(self) -> bool:
        return self.delta == 0.0


@dataclass(frozen=True)
class PowerLaw:
    """pdf f(z) = z_min / z**2 for z >= z_min, else 0. Infinite mean."""

    z_min: float

    def __post_init__(self) -> None:
        if not self.z_min > 0:
            raise ParameterError(f"z_min must be positive, got {self.z_min}")

    def pdf(self, z: float) -> float:
        return self.z_min / (z * z) if z >= self.z_min else 0.0

    def sf(self, z: float) -> float:
        """P(Z > z)."""
        return 1.0 if z <= self.z_min else self.z_min / z

    def partial_mean(self, lo: float, hi: float) -> float:
        """E[Z; lo < Z <= hi]; hi=inf is allowed and gives inf."""
        lo = max(lo, self.z_min)
        if hi <= lo:
            return 0.0
        if math.isinf(hi):
            return math.inf
        return self.z_min * math.log(hi / lo)

    def sample(self, rng: Rng, size: int | None = None):
        # inverse CDF of F(z) = 1 - z_min/z with u uniform on (0, 1]
        u = 1.0 - rng.generator.random(size)
        return self.z_min / u

    @property
    def support(self) -> tuple[float, float]:
        return (self.z_min, math.inf)


@dataclass(frozen=True)
class Uniform:
    """pdf f(z) = 1 / z_max on (0, z_max]."""

    z_max: float

    def __post_init__(self) -> None:
        if not self.z_max > 0:
            raise ParameterError(f"z_max must be positive, got {self.z_max}")

    def pdf(self, z: float) -> float:
        return 1.0 / self.z_max if 0.0 < z <= self.z_max else 0.0

    def sf(self, z: float) -> float:
        if z <= 0:
            return 1.0
        return max(0.0, 1.0 - z / self.z_max)

    def partial_mean(self, lo: float, hi: float) -> float:
        lo = max(lo, 0.0)
        hi = min(hi, self.z_max)
        if hi <= lo:
            return 0.0
        return (hi * hi - lo * lo) / (2.0 * self.z_max)

    def sample(self, rng: Rng, size: int | None = None):
        u = 1.0 - rng.generator.random(size)
        return self.z_max * u

    @property
    def support(self) -> tuple[float, float]:
        return (0.0, self.z_max)


@dataclass(frozen=True)
class Constant:
    """Degenerate distribution: every transfer is exactly z bitcoins."""

    z: float

    def __post_init__(self) -> None:
        if not self.z > 0:
            raise ParameterError(f"z must be positive, got {self.z}")

    def pdf(self, z: float) -> float:
        # point mass: no Lebesgue density; inf at the atom keeps misuse loud
        return math.inf if z == self.z else 0.0

    def sf(self, z: float) -> float:
        return 1.0 if z < self.z else 0.0

    def partial_mean(self, lo: float, hi: float) -> float:
        return self.z if lo < self.z <= hi else 0.0

    def sample(self, rng: Rng, size: int | None = None):
        if size is None:
            return self.z
        return np.full(size, self.z)

    @property
    def support(self) -> tuple[float, float]:
        return (self.z, self.z)


TransferSizeDist = PowerLaw | Uniform | Constant


class Direction(enum.Enum):
    ALICE_TO_BOB = "alice_to_bob"
    BOB_TO_ALICE = "bob_to_alice"


class Venue(enum.Enum):
    NONE = "none"
    LIGHTNING = "lightning"
    BLOCKCHAIN = "blockchain"


class World(enum.Enum):
    WITH_LIGHTNING = "with_lightning"
    NO_LIGHTNING = "no_lightning"


class Rng:
    """Reproducible random stream: NumPy PCG64 keyed by a 64-bit seed.

    Identical seeds produce identical streams on every platform and thread
    count.  Worker streams are derived with :meth:`stream`, which keys an
    independent PCG64 by ``(seed, task_index)`` via SeedSequence spawn keys,
    so parallel sweeps stay deterministic regardless of scheduling order.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self.generator = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(self.seed))
        )

    def stream(self, *task_index: int) -> "Rng":
        child = Rng.__new__(Rng)
        child.seed = self.seed
        child.generator = np.random.Generator(
            np.random.PCG64(
                np.random.SeedSequence(
                    self.seed, spawn_key=tuple(int(i) for i in task_index)
                )
            )
        )
        return child


def sample_transfer_size(dist: TransferSizeDist, rng: Rng):
    """Draw one transfer size (or an array if the caller batches via dist.sample)."""
    return dist.sample(rng)


def dist_pdf(dist: TransferSizeDist, z: float) -> float:
    """Density of the transfer-size distribution at z (0 outside support)."""
    return dist.pdf(z)


def next_transfer_direction(pair: PairParams, rng: Rng) -> Direction:
    """Direction of the next transfer: Alice pays with probability lambda_a/ell."""
    if rng.generator.random() < pair.p_alice:
        return Direction.ALICE_TO_BOB
    return Direction.BOB_TO_ALICE


def default_market() -> MarketParams:
    """Baseline economy: tau=288000 records/day, 4%/year interest, a=1.1, beta=0.01."""
    return MarketParams(tau=288_000.0, r=0.04 / 365.0, a=1.1, beta=0.01)


def default_pair() -> PairParams:
    """Symmetric pair with ell = 10 transfers/day."""
    return PairParams(lambda_a=5.0, lambda_b=5.0)


def default_pair_asymmetric() -> PairParams:
    """Asymmetric pair with ell = 10 and delta = 6 (8 vs 2 transfers/day)."""
    return PairParams(lambda_a=8.0, lambda_b=2.0)


def default_dist() -> PowerLaw:
    """Power-law transfer sizes with z_min = 0.001 BTC."""
    return PowerLaw(z_min=0.001)
