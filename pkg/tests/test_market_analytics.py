import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from channel_econ.channel_analytics import DomainError, optimal_fee
from channel_econ.market_analytics import (
    BracketFailure,
    DemandPoint,
    Regime,
    demand_no_lightning,
    demand_with_lightning,
    equilibrium_fee,
    price_curve,
    reset_record_rate,
    thresholds,
    venue_choice,
)
from channel_econ.model import (
    Constant,
    MarketParams,
    PairParams,
    PowerLaw,
    Rng,
    Uniform,
    Venue,
    World,
    default_dist,
    default_market,
    default_pair,
    default_pair_asymmetric,
)
from channel_econ.channel_analytics import optimal_capacity, optimal_initialization


MKT = default_market()
PAIR = default_pair()
PAIR_A = default_pair_asymmetric()
PL = default_dist()


class TestThresholds:
    def test_symmetric_coefficients_match_baseline(self):
        t = thresholds(MKT, PAIR, 1.0)
        assert t.t_nl == pytest.approx(0.0036, rel=0.01)
        assert t.t_nb == 100.0
        assert t.t_lb == pytest.approx(16744.0, rel=0.01)

    def test_asymmetric_coefficients_match_baseline(self):
        t = thresholds(MKT, PAIR_A, 1.0)
        assert t.t_nl == pytest.approx(0.29, rel=0.01)
        assert t.t_nb == 100.0
        assert t.t_lb == pytest.approx(34564.0, rel=0.01)

    def test_zero_phi_zero_thresholds(self):
        t = thresholds(MKT, PAIR, 0.0)
        assert (t.t_nl, t.t_nb, t.t_lb) == (0.0, 0.0, 0.0)

    def test_ordering_at_defaults(self):
        t = thresholds(MKT, PAIR, 0.001)
        assert t.t_nl < t.t_nb / 100 and t.t_nb < t.t_lb / 100

    @given(
        kappa_exp=st.integers(min_value=-40, max_value=40),
        phi=st.floats(min_value=1e-9, max_value=1e3),
    )
    @settings(max_examples=60, deadline=None)
    def test_linearity_exact_for_power_of_two_scaling(self, kappa_exp, phi):
        kappa = 2.0**kappa_exp
        for pair in (PAIR, PAIR_A):
            t1 = thresholds(MKT, pair, phi)
            t2 = thresholds(MKT, pair, kappa * phi)
            assert t2.t_nl == kappa * t1.t_nl
            assert t2.t_nb == kappa * t1.t_nb
            assert t2.t_lb == kappa * t1.t_lb

    @given(
        kappa=st.floats(min_value=1e-6, max_value=1e6),
        phi=st.floats(min_value=1e-9, max_value=1e3),
    )
    @settings(max_examples=60, deadline=None)
    def test_linearity_general(self, kappa, phi):
        t1 = thresholds(MKT, PAIR, phi)
        t2 = thresholds(MKT, PAIR, kappa * phi)
        assert t2.t_nl == pytest.approx(kappa * t1.t_nl, rel=1e-12)
        assert t2.t_lb == pytest.approx(kappa * t1.t_lb, rel=1e-12)

    def test_fee_multiplier_scaling(self):
        base = thresholds(MKT, PAIR, 0.001)
        star = thresholds(MKT, PAIR, 0.001, fee_multiplier=2.0)
        assert star.t_nl == pytest.approx(8.0 * base.t_nl, rel=1e-12)
        assert star.t_lb == pytest.approx(base.t_lb / 2.0**1.5, rel=1e-12)
        assert star.t_nb == base.t_nb
        base_a = thresholds(MKT, PAIR_A, 0.001)
        star_a = thresholds(MKT, PAIR_A, 0.001, fee_multiplier=2.0)
        assert star_a.t_nl == pytest.approx(4.0 * base_a.t_nl, rel=1e-12)
        assert star_a.t_lb == pytest.approx(base_a.t_lb / 4.0, rel=1e-12)


class TestVenueChoice:
    def test_examples(self):
        assert venue_choice(MKT, PAIR, 0.5, 0.001) is Venue.LIGHTNING
        assert venue_choice(MKT, PAIR, 1e-6, 0.001) is Venue.NONE
        # at phi=1e-6, t_lb is ~0.0167, so z=0.01 rides lightning while z=1
        # is past the lightning-blockchain cutoff
        assert venue_choice(MKT, PAIR, 0.01, 1e-6) is Venue.LIGHTNING
        assert venue_choice(MKT, PAIR, 1.0, 1e-6) is Venue.BLOCKCHAIN
        assert (
            venue_choice(MKT, PAIR, 1.0, 1e-6, world=World.NO_LIGHTNING)
            is Venue.BLOCKCHAIN
        )
        assert venue_choice(MKT, PAIR, 1e9, 0.001) is Venue.BLOCKCHAIN

    def test_agrees_with_threshold_rule(self):
        # independent route: classify by the threshold cutoffs instead of the
        # three utilities, off ties
        rng = Rng(31).generator
        for _ in range(10_000):
            z = float(10.0 ** rng.uniform(-7, 3))
            phi = float(10.0 ** rng.uniform(-8, 1))
            pair = PAIR if rng.random() < 0.5 else PAIR_A
            t = thresholds(MKT, pair, phi)
            got = venue_choice(MKT, pair, z, phi)
            if z < min(t.t_nl, t.t_nb) * (1 - 1e-12):
                assert got is Venue.NONE
            elif t.t_nl * (1 + 1e-12) < z < t.t_lb * (1 - 1e-12):
                assert got is Venue.LIGHTNING
            elif z > max(t.t_nb, t.t_lb) * (1 + 1e-12):
                assert got is Venue.BLOCKCHAIN

    def test_agrees_with_direct_argmax(self):
        rng = Rng(32).generator
        for _ in range(10_000):
            z = float(10.0 ** rng.uniform(-7, 3))
            phi = float(10.0 ** rng.uniform(-8, 1))
            u_b = MKT.beta * z - phi
            u_l = MKT.beta * z - optimal_fee(MKT, PAIR, z, phi)
            utilities = {Venue.NONE: 0.0, Venue.BLOCKCHAIN: u_b, Venue.LIGHTNING: u_l}
            best = max(utilities.values())
            ties = [v for v, u in utilities.items() if u == best]
            got = venue_choice(MKT, PAIR, z, phi)
            if len(ties) == 1:
                assert got is ties[0]
            else:
                assert got in ties


class TestResetRecordRate:
    def test_matches_lifetime_route(self):
        # a / T(w_opt) computed through channel_analytics
        for pair in (PAIR, PAIR_A):
            for z, phi in [(0.001, 0.001), (0.5, 0.02), (3.0, 1e-4)]:
                w = optimal_capacity(MKT, pair, z, phi)
                _, t_days = optimal_initialization(pair, w)
                assert reset_record_rate(MKT, pair, z, phi) == pytest.approx(
                    MKT.a / t_days, rel=1e-12
                )


class TestDemandNoLightning:
    def test_powerlaw_plateau_and_tail(self):
        assert demand_no_lightning(MKT, PAIR, PL, 1e-6).records_per_day == 10.0
        assert demand_no_lightning(MKT, PAIR, PL, 1e-3).records_per_day == pytest.approx(
            0.1, rel=1e-12
        )

    def test_uniform_hits_zero(self):
        u = Uniform(1.0)
        assert demand_no_lightning(MKT, PAIR, u, MKT.beta * 1.0).records_per_day == 0.0
        assert demand_no_lightning(MKT, PAIR, u, 0.02).records_per_day == 0.0

    def test_quadrature_agrees(self):
        for dist in (PL, Uniform(1.0)):
            for phi in np.geomspace(1e-7, 5e-3, 50):
                closed = demand_no_lightning(MKT, PAIR, dist, phi).records_per_day
                q = demand_no_lightning(
                    MKT, PAIR, dist, phi, method="quadrature"
                ).records_per_day
                assert q == pytest.approx(closed, rel=1e-6, abs=1e-12)


class TestDemandWithLightning:
    def test_paper_middle_regime_display(self):
        # rounded-coefficient display: 1.5e-5*(10/phi^(2/3) - 0.04/phi) + 6e-7/phi
        for phi in (1e-6, 1e-4, 1e-2, 0.2):
            display = 1.5e-5 * (10.0 / phi ** (2 / 3) - 0.04 / phi) + 6e-7 / phi
            got = demand_with_lightning(MKT, PAIR, PL, phi).records_per_day
            assert got == pytest.approx(display, rel=0.02)

    def test_plateau_below_jump(self):
        # t_lb < z_min: every transfer is worth putting on chain
        assert demand_with_lightning(MKT, PAIR, PL, 1e-9).records_per_day == 10.0

    def test_high_phi_counts(self):
        phi = 0.5  # t_nl > z_min regime
        t = thresholds(MKT, PAIR, phi)
        assert t.t_nl > PL.z_min
        dp = demand_with_lightning(MKT, PAIR, PL, phi)
        assert dp.lightning_tx == pytest.approx(
            PAIR.ell * (PL.z_min / t.t_nl - PL.z_min / t.t_lb), rel=1e-12
        )
        assert dp.blockchain_tx == pytest.approx(
            PAIR.ell * PL.z_min / t.t_lb, rel=1e-12
        )

    def test_constant_all_onchain(self):
        phi = 0.001
        t = thresholds(MKT, PAIR, phi)
        z = 2.0 * t.t_lb
        dp = demand_with_lightning(MKT, PAIR, Constant(z), phi)
        assert dp.records_per_day == PAIR.ell
        assert dp.blockchain_tx == PAIR.ell
        assert dp.lightning_tx == 0.0

    def test_constant_in_channel(self):
        phi = 0.001
        dp = demand_with_lightning(MKT, PAIR, Constant(0.5), phi)
        assert dp.records_per_day == pytest.approx(
            reset_record_rate(MKT, PAIR, 0.5, phi), rel=1e-12
        )
        assert dp.lightning_tx == PAIR.ell

    @pytest.mark.parametrize("pair", [PAIR, PAIR_A], ids=["sym", "asym"])
    @pytest.mark.parametrize("dist", [PL, Uniform(1.0)], ids=["powerlaw", "uniform"])
    def test_closed_matches_quadrature_on_grid(self, pair, dist):
        hi = 5e-3 if isinstance(dist, Uniform) else 1.0
        for phi in np.geomspace(1e-7, hi, 50):
            closed = demand_with_lightning(MKT, pair, dist, phi).records_per_day
            q = demand_with_lightning(
                MKT, pair, dist, phi, method="quadrature"
            ).records_per_day
            assert q == pytest.approx(closed, rel=1e-6, abs=1e-10)

    def test_monotone_nonincreasing_in_phi(self):
        for dist in (PL, Uniform(1.0)):
            grid = np.geomspace(1e-9, 1.0, 200)
            vals = [
                demand_with_lightning(MKT, PAIR, dist, phi).records_per_day
                for phi in grid
            ]
            assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))

    def test_with_lightning_below_no_lightning_above_jump(self):
        jump = PL.z_min * math.sqrt(27 * MKT.a) * MKT.r / PAIR.ell
        for phi in np.geomspace(jump * 1.01, 10.0, 60):
            with_l = demand_with_lightning(MKT, PAIR, PL, phi).records_per_day
            without = demand_no_lightning(MKT, PAIR, PL, phi).records_per_day
            assert with_l <= without * (1 + 1e-12)

    def test_point_invariants(self):
        rng = Rng(77).generator
        for _ in range(300):
            phi = float(10.0 ** rng.uniform(-8, 0))
            pair = PAIR if rng.random() < 0.5 else PAIR_A
            dist = (PL, Uniform(1.0), Constant(0.37))[int(rng.integers(3))]
            dp = demand_with_lightning(MKT, pair, dist, phi)
            assert 0.0 <= dp.records_per_day <= pair.ell * (1 + 1e-12)
            assert 0.0 <= dp.lightning_tx <= pair.ell * (1 + 1e-12)
            assert 0.0 <= dp.blockchain_tx <= pair.ell * (1 + 1e-12)
            assert dp.lightning_tx + dp.blockchain_tx <= pair.ell * (1 + 1e-12)

    def test_powerlaw_blockchain_volume_infinite(self):
        dp = demand_with_lightning(MKT, PAIR, PL, 0.001)
        assert math.isinf(dp.blockchain_volume)
        assert math.isfinite(dp.lightning_volume)
        dpu = demand_with_lightning(MKT, PAIR, Uniform(1.0), 1e-5)
        assert math.isfinite(dpu.blockchain_volume)


class TestEquilibrium:
    def test_zero_price_below_kink(self):
        n = 2 * (MKT.tau / PAIR.ell) * 0.9
        for world in World:
            res = equilibrium_fee(MKT, PAIR, PL, n, world)
            assert res.phi_eq == 0.0
            assert res.regime is Regime.ZERO_PRICE
            assert res.miner_revenue == 0.0

    def test_no_lightning_closed_value(self):
        res = equilibrium_fee(MKT, PAIR, PL, 1e7, World.NO_LIGHTNING)
        assert res.phi_eq == pytest.approx(1.736111111111111e-3, rel=1e-12)
        # market clears: (n/2) * D(phi) = tau
        clears = 5e6 * demand_no_lightning(MKT, PAIR, PL, res.phi_eq).records_per_day
        assert clears == pytest.approx(MKT.tau, rel=1e-9)

    def test_with_lightning_jump_value(self):
        n = 2 * (MKT.tau / PAIR.ell) * 1.0001
        res = equilibrium_fee(MKT, PAIR, PL, n, World.WITH_LIGHTNING, method="root")
        jump = PL.z_min * math.sqrt(27 * MKT.a * MKT.r**2 / PAIR.ell**2)
        assert res.phi_eq == pytest.approx(jump, rel=0.01)
        assert res.phi_eq < MKT.beta * PL.z_min / 10.0

    @pytest.mark.parametrize("pair", [PAIR, PAIR_A], ids=["sym", "asym"])
    def test_root_matches_closed_in_middle_regime(self, pair):
        for n in np.geomspace(1.2e5, 1e9, 50):
            closed = equilibrium_fee(MKT, pair, PL, n, World.WITH_LIGHTNING, method="closed")
            root = equilibrium_fee(MKT, pair, PL, n, World.WITH_LIGHTNING, method="root")
            if closed.regime is Regime.LIGHTNING_DOMINANT:
                assert root.phi_eq == pytest.approx(closed.phi_eq, rel=1e-6)

    def test_root_residual_small(self):
        for n in (1e5, 3e6, 1e8):
            for world in World:
                res = equilibrium_fee(MKT, PAIR, PL, n, world, method="root")
                if res.phi_eq > 0:
                    if world is World.NO_LIGHTNING:
                        d = demand_no_lightning(MKT, PAIR, PL, res.phi_eq)
                    else:
                        d = demand_with_lightning(MKT, PAIR, PL, res.phi_eq)
                    assert abs(n / 2 * d.records_per_day - MKT.tau) / MKT.tau < 1e-6

    def test_with_lightning_never_above_no_lightning_powerlaw(self):
        for n in np.geomspace(1e4, 1e10, 40):
            with_l = equilibrium_fee(MKT, PAIR, PL, n, World.WITH_LIGHTNING, method="root")
            without = equilibrium_fee(MKT, PAIR, PL, n, World.NO_LIGHTNING, method="root")
            assert with_l.phi_eq <= without.phi_eq * (1 + 1e-9) + 1e-18

    def test_uniform_price_eventually_exceeds_no_lightning(self):
        # without lightning the uniform price converges to beta*z_max while
        # the with-lightning price keeps growing (resets still burn records)
        u = Uniform(1.0)
        n = 1e9
        with_l = equilibrium_fee(MKT, PAIR, u, n, World.WITH_LIGHTNING, method="root")
        without = equilibrium_fee(MKT, PAIR, u, n, World.NO_LIGHTNING, method="root")
        assert without.phi_eq < MKT.beta * u.z_max
        assert with_l.phi_eq > without.phi_eq

    def test_uniform_no_lightning_closed(self):
        u = Uniform(1.0)
        n = 4e5
        res = equilibrium_fee(MKT, PAIR, u, n, World.NO_LIGHTNING)
        expected = MKT.beta * 1.0 * (1.0 - MKT.tau / (n / 2 * PAIR.ell))
        assert res.phi_eq == pytest.approx(expected, rel=1e-12)
        root = equilibrium_fee(MKT, PAIR, u, n, World.NO_LIGHTNING, method="root")
        assert root.phi_eq == pytest.approx(expected, rel=1e-9)

    def test_uniform_asymmetric_cross_check(self):
        # independent oracle: in its middle regime the demand is
        # K/sqrt(phi) - C*phi, so the equilibrium solves a cubic in sqrt(phi)
        u = Uniform(1.0)
        n = 4e5
        pairs = n / 2
        res = equilibrium_fee(MKT, PAIR_A, u, n, World.WITH_LIGHTNING, method="root")
        big_k = 2.0 / 3.0 * math.sqrt(PAIR_A.delta * MKT.a * u.z_max * MKT.r)
        big_c = (
            16.0 * PAIR_A.delta**2 * MKT.a**2 * MKT.r**2
            / (3.0 * PAIR_A.ell**3 * MKT.beta**3 * u.z_max)
        )
        roots = np.roots([big_c, 0.0, MKT.tau / pairs, -big_k])
        (s,) = [x.real for x in roots if abs(x.imag) < 1e-12 and x.real > 0]
        assert 4 * PAIR_A.delta * MKT.a * u.z_max * MKT.r / PAIR_A.ell**2 < s**2
        assert res.phi_eq == pytest.approx(s**2, rel=1e-9)

    def test_rejects_tiny_n(self):
        with pytest.raises(DomainError):
            equilibrium_fee(MKT, PAIR, PL, 1, World.WITH_LIGHTNING)


class TestPriceCurve:
    def test_all_zero_below_kink(self):
        grid = np.linspace(1000, 2 * MKT.tau / PAIR.ell * 0.99, 10)
        for world in World:
            rows = price_curve(MKT, PAIR, PL, grid, world)
            assert all(r.phi_eq == 0.0 for r in rows)

    def test_revenue_definition_and_monotone(self):
        grid = np.geomspace(1e5, 1e9, 25)
        rows = price_curve(MKT, PAIR, PL, grid, World.WITH_LIGHTNING)
        for r in rows:
            assert r.miner_revenue == MKT.tau * r.phi_eq
        phis = [r.phi_eq for r in rows]
        assert all(b >= a for a, b in zip(phis, phis[1:]))

    def test_curves_coincide_at_large_n(self):
        n = 1e10  # far beyond the symmetric middle regime
        with_l = equilibrium_fee(MKT, PAIR, PL, n, World.WITH_LIGHTNING, method="root")
        without = equilibrium_fee(MKT, PAIR, PL, n, World.NO_LIGHTNING, method="root")
        assert with_l.phi_eq == pytest.approx(without.phi_eq, rel=1e-6)
        assert with_l.regime is Regime.COINCIDENT

    def test_rejects_unsorted_grid(self):
        with pytest.raises(DomainError):
            price_curve(MKT, PAIR, PL, [1e5, 1e4], World.WITH_LIGHTNING)
