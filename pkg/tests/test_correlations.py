from fractions import Fraction

import numpy as np
import pytest

from thoma import correlations as cr
from thoma import generators as gn
from thoma import measures as ms
from thoma import partitions as pt
from thoma import symfunc as sf

F = Fraction

SIGMA = sf.ParamPair(F(0), F(1))
SIGMA2 = sf.ParamPair(F(0), F(2))


class TestConfigOf:
    def test_empty(self):
        assert cr.config_of((), 1).points == ()

    def test_single_box(self):
        assert cr.config_of((1,), 1).points == (F(1, 2), F(-1, 2))

    def test_scaled(self):
        assert cr.config_of((2, 1), 2).points == (F(3, 4), F(-3, 4))

    def test_lattice_membership(self):
        for r in (F(1), F(2), F(5, 3)):
            for lam in pt.partitions_up_to(8):
                for x in cr.config_of(lam, r).points:
                    assert cr.on_lattice(x, r)

    def test_signs_split_frobenius(self):
        lam = (4, 2, 1)
        cfg = cr.config_of(lam, 1)
        a, b, d = pt.frobenius(lam)
        assert tuple(x for x in cfg.points if x > 0) == a
        assert tuple(-x for x in reversed(cfg.points) if x < 0) == b


class TestStaticCorrelation:
    def test_empty_query_is_one(self):
        res = cr.static_correlation(SIGMA, F(1), [], 20)
        assert res.value + res.error_bound == pytest.approx(1.0, abs=1e-9)

    def test_minimal_pair_event(self):
        # both minimal lattice points are present exactly when the diagram
        # has a full staircase corner: lam_d = d = lam'_d at the diagonal
        # depth d (NOT merely lam nonempty: (2) gives the points {3/2, -1/2})
        r, n_max = F(1), 22
        res = cr.static_correlation(SIGMA, r, [F(1, 2), F(-1, 2)], n_max)
        ens = ms.z_ensemble(SIGMA, r, n_max)
        want = 0.0
        for lam, mass in ens.weights.items():
            d = pt.frobenius(lam).d
            if d >= 1 and lam[d - 1] == d and pt.transpose(lam)[d - 1] == d:
                want += mass
        assert res.value == pytest.approx(want, abs=1e-14)
        assert res.value == pytest.approx(ens.weights[(1,)], abs=0.02)

    def test_single_minimal_point_is_row_event(self):
        # the positive point 1/(2r) is present iff the smallest Frobenius
        # arm equals 1/2, i.e. lam_d = d
        r, n_max = F(1), 20
        res = cr.static_correlation(SIGMA, r, [F(1, 2)], n_max)
        ens = ms.z_ensemble(SIGMA, r, n_max)
        want = sum(
            mass
            for lam, mass in ens.weights.items()
            if lam and lam[pt.frobenius(lam).d - 1] == pt.frobenius(lam).d
        )
        assert res.value == pytest.approx(want, abs=1e-14)

    def test_non_lattice_point_flagged(self):
        res = cr.static_correlation(SIGMA, F(1), [F(1, 3)], 10)
        assert res.value == 0.0 and not res.lattice_ok

    def test_permutation_symmetric(self):
        pts = [F(1, 2), F(3, 2), F(-1, 2)]
        a = cr.static_correlation(SIGMA, F(1), pts, 16)
        b = cr.static_correlation(SIGMA, F(1), list(reversed(pts)), 16)
        assert a.value == b.value

    def test_density_sum_identity(self):
        lhs, rhs, tail = cr.density_sum_identity(SIGMA, F(1), 24)
        assert abs(lhs - rhs) <= 2 * tail + 1e-12

    def test_monte_carlo_agrees(self):
        r, pts = F(1), [F(1, 2), F(-1, 2)]
        exact = cr.static_correlation(SIGMA2, r, pts, 26)
        est, se = cr.static_correlation_mc(
            SIGMA2, r, pts, 100_000, np.random.default_rng(2024)
        )
        assert abs(est - exact.value) <= 4 * se + exact.error_bound


class TestFdd:
    def test_single_time_indicator(self):
        spec = gn.ZMeasure(SIGMA, F(1))
        target = (1,)
        value, err = cr.fdd(spec, [0.5], [lambda lam: 1.0 if lam == target else 0.0], 18)
        ens = ms.z_ensemble(SIGMA, F(1), 18)
        assert abs(value - ens.weights[target]) <= err + ens.tail_bound + 1e-9

    def test_two_equal_times_collapse(self):
        spec = gn.ZMeasure(SIGMA, F(1))
        in_set = lambda lam: 1.0 if pt.size(lam) <= 1 else 0.0
        one, e1 = cr.fdd(spec, [0.3], [in_set], 16)
        two, e2 = cr.fdd(spec, [0.3, 0.3], [in_set, in_set], 16)
        assert abs(one - two) <= e1 + e2 + 1e-12

    def test_times_must_increase(self):
        spec = gn.ZMeasure(SIGMA, F(1))
        with pytest.raises(ValueError):
            cr.fdd(spec, [1.0, 0.5], [lambda s: 1.0, lambda s: 1.0], 8)


class TestDynamicCorrelation:
    def test_coincident_times_reduce_to_static(self):
        r, n_max = F(1), 16
        pts = [F(1, 2), F(-1, 2)]
        static = cr.static_correlation(SIGMA, r, pts, n_max)
        q = cr.SpaceTimeQuery(tuple((x, 0.7) for x in pts))
        dynamic = cr.dynamic_correlation(SIGMA, r, q, n_max)
        budget = 1e-8 + static.error_bound + dynamic.error_bound
        assert abs(dynamic.value - static.value) <= budget

    def test_time_shift_invariance(self):
        r, n_max = F(1), 14
        x, y = F(1, 2), F(3, 2)
        a = cr.dynamic_correlation(
            SIGMA, r, cr.SpaceTimeQuery(((x, 0.0), (y, 0.6))), n_max
        )
        b = cr.dynamic_correlation(
            SIGMA, r, cr.SpaceTimeQuery(((x, 0.4), (y, 1.0))), n_max
        )
        assert abs(a.value - b.value) <= a.error_bound + b.error_bound + 1e-8

    def test_time_gap_symmetry(self):
        r, n_max = F(1), 14
        x, y = F(1, 2), F(-3, 2)
        a = cr.dynamic_correlation(
            SIGMA, r, cr.SpaceTimeQuery(((x, 0.0), (y, 0.5))), n_max
        )
        b = cr.dynamic_correlation(
            SIGMA, r, cr.SpaceTimeQuery(((y, 0.0), (x, 0.5))), n_max
        )
        assert abs(a.value - b.value) <= a.error_bound + b.error_bound + 1e-8

    def test_single_point_stationary_in_time(self):
        r, n_max = F(1), 14
        early = cr.dynamic_correlation(
            SIGMA, r, cr.SpaceTimeQuery(((F(1, 2), 0.0),)), n_max
        )
        late = cr.dynamic_correlation(
            SIGMA, r, cr.SpaceTimeQuery(((F(1, 2), 2.0),)), n_max
        )
        assert abs(early.value - late.value) <= early.error_bound + late.error_bound + 1e-8

    def test_non_lattice_flagged(self):
        res = cr.dynamic_correlation(
            SIGMA, F(1), cr.SpaceTimeQuery(((F(1, 3), 0.0),)), 8
        )
        assert not res.lattice_ok

    def test_query_validation(self):
        with pytest.raises(ValueError):
            cr.SpaceTimeQuery(((F(0), 0.0),))
        with pytest.raises(ValueError):
            cr.SpaceTimeQuery(((F(1, 2), 1.0), (F(1, 2), 0.5)))


class TestBallBound:
    def test_exact_on_samples(self):
        rng = np.random.default_rng(7)
        r = F(2)
        for _ in range(2000):
            lam = ms.sample(SIGMA2, r, rng)
            for eps in (F(1, 4), F(1, 2), F(1), F(2)):
                assert cr.ball_bound_holds(lam, r, eps)

    def test_tight_case(self):
        # a single box at scale 1: both points at distance 1/2, size 1
        cfg = cr.config_of((1,), 1)
        assert cfg.count_outside(F(1, 2)) == 2 <= 2
        assert cr.ball_bound_holds((1,), 1, F(1, 2))
