"""Tests for periodic-orbit enumeration, classification, J factors, and the
finite-hole expansion."""

from fractions import Fraction as F

import pytest

from holediff.diffusion import diffusion_coefficient
from holediff.maps import ConfigError, MapKind, ModelConfig, Placement, step_reduced
from holediff.orbits import (
    LimitMode,
    OrbitClass,
    OrbitClassification,
    asymptotic_scan,
    classify,
    dyadic_points_in_interval,
    enumerate_periodic_points,
    hole_at,
    minimal_period,
    periodic_points_in_interval,
    po_expansion,
    small_hole_factor,
    standing_points_in_interval,
    tent_periodic_points_in_interval,
)

SYM = (MapKind.DOUBLING, Placement.SYMMETRIC)
NS_D = (MapKind.DOUBLING, Placement.NONSYM_LEFT_AT_ZERO)
NS_T = (MapKind.TENT, Placement.NONSYM_LEFT_AT_ZERO)


class TestEnumeration:
    def test_low_periods(self):
        assert {(p.point, p.period) for p in enumerate_periodic_points(1)} == {(F(0), 1)}
        assert {(p.point, p.period) for p in enumerate_periodic_points(2)} == {
            (F(0), 1), (F(1, 3), 2), (F(2, 3), 2),
        }
        level3 = {p.point for p in enumerate_periodic_points(3) if p.period == 3}
        assert level3 == {F(k, 7) for k in range(1, 7)}

    def test_minimality(self):
        for pp in enumerate_periodic_points(6):
            x = pp.point
            for q in range(1, pp.period):
                x = step_reduced(MapKind.DOUBLING, x)
                assert x != pp.point
            assert step_reduced(MapKind.DOUBLING, x) == pp.point

    def test_counts_are_necklace_numbers(self):
        by_period = {}
        for pp in enumerate_periodic_points(8):
            by_period[pp.period] = by_period.get(pp.period, 0) + 1
        assert by_period[1] == 1
        assert by_period[2] == 2
        assert by_period[3] == 6
        assert by_period[4] == 12
        assert by_period[6] == 54

    def test_range_guard(self):
        with pytest.raises(ValueError):
            enumerate_periodic_points(0)
        with pytest.raises(ValueError):
            enumerate_periodic_points(31)

    def test_interval_enumerators_match_global(self):
        inside = periodic_points_in_interval(F(1, 8), F(1, 4), 8)
        expected = {
            p.point for p in enumerate_periodic_points(8) if F(1, 8) <= p.point <= F(1, 4)
        }
        assert {x for x, _, _ in inside} == expected

    def test_standing_points_have_double_period(self):
        for x, period in standing_points_in_interval(F(0), F(1, 2), 5):
            assert minimal_period(MapKind.DOUBLING, x) == period
            y = x
            for _ in range(period // 2):
                y = step_reduced(MapKind.DOUBLING, y)
            assert y == 1 - x  # mirror entry at half the period

    def test_dyadic_enumeration(self):
        found = dyadic_points_in_interval(F(1, 2), F(5, 8), 4)
        assert (F(1, 2), 1) in found
        assert (F(9, 16), 4) in found
        assert all(x.denominator == 1 << n for x, n in found)

    def test_tent_periodic_points(self):
        pts = dict(tent_periodic_points_in_interval(F(0), F(1), 2))
        assert pts[F(0)] == 1
        assert pts[F(2, 3)] == 1
        assert pts[F(2, 5)] == 2
        assert pts[F(4, 5)] == 2
        assert F(1, 3) not in pts  # preperiodic, not periodic


class TestClassify:
    def test_standing_interior(self):
        c = classify(*SYM, F(1, 3))
        assert (c.orbit_class, c.period) == (OrbitClass.STANDING, 2)

    def test_boundary_point_is_running(self):
        c = classify(*SYM, F(1, 3), LimitMode.FIXED_LEFT)
        assert (c.orbit_class, c.period) == (OrbitClass.RUNNING, 2)

    def test_running_interior(self):
        c = classify(*SYM, F(1, 7))
        assert (c.orbit_class, c.period) == (OrbitClass.RUNNING, 3)

    def test_non_periodic(self):
        assert classify(*SYM, F(5, 12)).orbit_class == OrbitClass.NON_PERIODIC
        assert classify(*SYM, F(3, 8)).orbit_class == OrbitClass.NON_PERIODIC

    def test_nonsymmetric_classes(self):
        c = classify(*NS_D, F(3, 8))
        assert (c.orbit_class, c.dyadic_level) == (OrbitClass.DYADIC_PREIMAGE, 3)
        c = classify(*NS_D, F(2, 3))
        assert (c.orbit_class, c.period) == (OrbitClass.RUNNING, 2)
        assert classify(*NS_D, F(5, 12)).orbit_class == OrbitClass.NON_PERIODIC

    def test_nonsymmetric_tent_period(self):
        c = classify(*NS_T, F(2, 3))
        assert (c.orbit_class, c.period) == (OrbitClass.RUNNING, 1)

    def test_symmetric_tent_rejected(self):
        with pytest.raises(ValueError):
            classify(MapKind.TENT, Placement.SYMMETRIC, F(1, 3))


def J(family, cls, period, mode=LimitMode.INTERIOR, level=None):
    return small_hole_factor(
        *family, OrbitClassification(cls, period, mode, level)
    )


class TestSmallHoleFactor:
    def test_symmetric_values(self):
        assert J(SYM, OrbitClass.RUNNING, 1) == 3
        assert J(SYM, OrbitClass.STANDING, 2) == F(1, 3)
        assert J(SYM, OrbitClass.RUNNING, 3) == F(9, 7)
        assert J(SYM, OrbitClass.RUNNING, 2) == F(5, 3)
        assert J(SYM, OrbitClass.NON_PERIODIC, 0) == 1

    def test_nonsymmetric_values(self):
        assert J(NS_D, OrbitClass.NON_PERIODIC, 0) == 2
        assert J(NS_D, OrbitClass.RUNNING, 2) == F(7, 3)
        assert J(NS_D, OrbitClass.DYADIC_PREIMAGE, 0, level=2) == F(3, 2)
        assert J(NS_T, OrbitClass.RUNNING, 1) == 3

    def test_dyadic_factor_depends_on_side(self):
        # doubling holes left of a dyadic see no backscatter; tent holes
        # split the correction between the two sides
        kw = dict(level=3)
        assert J(NS_D, OrbitClass.DYADIC_PREIMAGE, 0, LimitMode.FIXED_LEFT, **kw) == F(7, 4)
        assert J(NS_D, OrbitClass.DYADIC_PREIMAGE, 0, LimitMode.FIXED_RIGHT, **kw) == 2
        assert J(NS_T, OrbitClass.DYADIC_PREIMAGE, 0, LimitMode.INTERIOR, **kw) == F(7, 4)
        assert J(NS_T, OrbitClass.DYADIC_PREIMAGE, 0, LimitMode.FIXED_LEFT, **kw) == F(15, 8)
        assert J(NS_T, OrbitClass.DYADIC_PREIMAGE, 0, LimitMode.FIXED_RIGHT, **kw) == F(15, 8)

    def test_running_enhances_standing_suppresses(self):
        for p in range(1, 12):
            assert J(SYM, OrbitClass.RUNNING, p) > 1
        for p in range(2, 24, 2):
            assert J(SYM, OrbitClass.STANDING, p) < 1

    def test_ordering_heuristic(self):
        # |J_running(p) - 1| is comparable to |J_standing(2p) - 1|
        for p in range(2, 12):
            run = abs(J(SYM, OrbitClass.RUNNING, p) - 1)
            stand = abs(J(SYM, OrbitClass.STANDING, 2 * p) - 1)
            assert F(1, 2) <= run / stand <= 2


class TestAsymptoticScans:
    def test_dyadic_factor_verified_against_exact_D(self):
        # the J table must reproduce the exact asymptotics of the T machinery
        h = F(1, 1 << 16)
        for kind, mode, expected in [
            (MapKind.DOUBLING, "center", F(3, 2)),
            (MapKind.DOUBLING, "left", F(3, 2)),
            (MapKind.DOUBLING, "right", F(2)),
            (MapKind.TENT, "center", F(3, 2)),
            (MapKind.TENT, "left", F(7, 4)),
            (MapKind.TENT, "right", F(7, 4)),
        ]:
            a3 = {"center": F(3, 4) - h / 2, "left": F(3, 4), "right": F(3, 4) - h}[mode]
            d = diffusion_coefficient(ModelConfig.nonsymmetric(kind, a3, h)).D
            assert abs(d / h - expected) < F(1, 1000)

    def test_standing_point_scan(self):
        rows = asymptotic_scan(F(1, 3), LimitMode.INTERIOR, [F(1, 1 << s) for s in (6, 10, 14)])
        ratios = [abs(r.D / r.h - F(1, 3)) for r in rows]
        assert ratios[2] < ratios[1] < ratios[0]
        assert all(r.J_times_h == r.h / 3 for r in rows)

    def test_fixed_left_scan(self):
        rows = asymptotic_scan(F(1, 3), LimitMode.FIXED_LEFT, [F(1, 1 << s) for s in (6, 12)])
        assert all(r.J_times_h == 5 * r.h / 3 for r in rows)
        assert abs(rows[-1].D / rows[-1].h - F(5, 3)) < F(1, 500)

    def test_nonperiodic_surrogate_trend(self):
        x = F(25867, 3**10)
        rows = asymptotic_scan(x, LimitMode.INTERIOR, [F(1, 1 << s) for s in (6, 16)])
        devs = [abs(r.D / r.h - 1) for r in rows]
        assert devs[1] < devs[0] / 10
        assert devs[1] < F(1, 100)

    def test_hole_leaves_region(self):
        with pytest.raises(ConfigError):
            hole_at(F(0), LimitMode.INTERIOR, F(1, 8))
        with pytest.raises(ConfigError):
            hole_at(F(1, 2), LimitMode.FIXED_LEFT, F(1, 8))


class TestPoExpansion:
    def test_endpoint_running_zero(self):
        res = po_expansion(ModelConfig.symmetric_markov(MapKind.DOUBLING, 3, 0), 1)
        assert res.approx == F(3, 8)
        assert res.exact == F(5, 16)
        assert res.residual == F(1, 16)

    def test_trapping_hole_sits_below_mean(self):
        res = po_expansion(ModelConfig.symmetric_markov(MapKind.DOUBLING, 2, 1), 2)
        assert res.exact == 0
        assert res.approx < F(1, 4)  # visibly below the family mean 2^-s

    def test_residual_shrinks_with_pmax(self):
        cfg = ModelConfig.symmetric_markov(MapKind.DOUBLING, 3, 0)
        res = [po_expansion(cfg, p).residual for p in (1, 6, 12, 18)]
        assert res[-1] < res[1] < res[0]
        assert res[-1] < F(1, 1000)

    def test_multiplicity_of_orbit_intersections(self):
        # the 3-cycle {1/7, 2/7, 4/7} meets [0, 1/2] twice, contributing one
        # term per intersection; {3/7, 6/7, 5/7} adds one more
        cfg = ModelConfig.symmetric_markov(MapKind.DOUBLING, 1, 0)
        res = po_expansion(cfg, 3)
        sevenths = {t.point for t in res.terms if t.point.denominator == 7}
        assert sevenths == {F(1, 7), F(2, 7), F(3, 7)}
        assert len([t for t in res.terms if t.point in (F(1, 7), F(2, 7))]) == 2

    def test_nonsymmetric_variants_converge(self):
        for kind in MapKind:
            cfg = ModelConfig.nonsymmetric_markov(kind, 5, 6)
            r_small = po_expansion(cfg, 4).residual
            r_large = po_expansion(cfg, 14).residual
            assert r_large < r_small
            assert r_large < F(1, 1 << 5) / 8

    def test_period_ordering_retained_for_diagnostics(self):
        cfg = ModelConfig.symmetric_markov(MapKind.DOUBLING, 4, 3)
        res = po_expansion(cfg, 8, ordering="period")
        assert res.p_max == 8

    def test_non_markov_rejected(self):
        with pytest.raises(ConfigError):
            po_expansion(ModelConfig.symmetric(MapKind.DOUBLING, F(1, 3), F(1, 3) + F(1, 8)), 4)

    def test_bad_ordering(self):
        with pytest.raises(ValueError):
            po_expansion(ModelConfig.symmetric_markov(MapKind.DOUBLING, 3, 1), 4, "magic")
