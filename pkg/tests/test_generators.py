from fractions import Fraction
from math import factorial

import pytest

from thoma import generators as gn
from thoma import partitions as pt
from thoma import polys
from thoma import symfunc as sf
from thoma.partitions import falling_factorial as ff

F = Fraction

SIGMA_PRINCIPAL = sf.ParamPair(F(0), F(1))
SIGMA_REAL = sf.ParamPair(F(1), F(1, 4))
SIGMA_GRID = [SIGMA_PRINCIPAL, SIGMA_REAL, sf.ParamPair(F(-1), F(5))]


class TestQRows:
    def test_zmeasure_empty_row(self):
        spec = gn.ZMeasure(SIGMA_PRINCIPAL, F(1))
        row = spec.row(())
        assert row == {(1,): F(1), (): F(-1)}

    def test_zmeasure_sigma_scaling_at_empty(self):
        sigma = sf.ParamPair(F(1), F(3))
        spec = gn.ZMeasure(sigma, F(2))
        row = spec.row(())
        assert row[(1,)] == 6 and row[()] == -6

    def test_zmeasure_single_box_row(self):
        spec = gn.ZMeasure(SIGMA_PRINCIPAL, F(1))
        row = spec.row((1,))
        assert row == {(2,): F(1), (1, 1): F(1), (): F(2), (1,): F(-4)}

    def test_meixner_row_at_zero(self):
        spec = gn.Meixner1D(F(3, 2), F(1, 2))
        assert spec.row(0) == {1: F(3, 4), 0: F(-3, 4)}

    def test_rows_sum_to_zero_and_nonnegative(self):
        for sigma in SIGMA_GRID:
            for r in (F(1, 2), F(2)):
                spec = gn.ZMeasure(sigma, r)
                for lam in pt.partitions_up_to(10):
                    row = spec.row(lam)
                    assert sum(row.values()) == 0
                    assert all(v >= 0 for k, v in row.items() if k != lam)
        for l in range(40):
            row = gn.Meixner1D(F(2), F(3)).row(l)
            assert sum(row.values()) == 0
        for lam in pt.partitions_up_to(8):
            row = gn.Plancherel(F(2)).row(lam)
            assert sum(row.values()) == 0
            assert all(v >= 0 for k, v in row.items() if k != lam)

    def test_inadmissible_rejected(self):
        with pytest.raises(ValueError):
            gn.ZMeasure(sf.ParamPair(F(0), F(-1)), F(1))

    def test_plancherel_row(self):
        spec = gn.Plancherel(F(3))
        assert spec.row(()) == {(1,): F(3), (): F(-3)}
        row = spec.row((1,))
        assert row[()] == 1 and row[(1,)] == -4


class TestApplyQ:
    def test_constants_killed(self):
        for spec in (
            gn.Meixner1D(F(1), F(1)),
            gn.ZMeasure(SIGMA_REAL, F(2)),
            gn.Plancherel(F(1)),
        ):
            state = 3 if isinstance(spec, gn.Meixner1D) else (2, 1)
            assert gn.apply_q(spec, lambda s: F(7), state) == 0

    def test_meixner_linear_eigenfunction(self):
        c, r = F(2), F(1, 3)
        spec = gn.Meixner1D(c, r)
        for l in range(31):
            assert gn.apply_q(spec, lambda k: k - r * c, l) == -(l - r * c)

    def test_fs_action(self):
        # Q moves an fs function down by one box with content weights
        for sigma in (SIGMA_PRINCIPAL, SIGMA_REAL):
            for r in (F(1), F(1, 2)):
                spec = gn.ZMeasure(sigma, r)
                for m in range(5):
                    for mu in pt.enumerate_partitions(m):
                        for lam in pt.partitions_up_to(7):
                            got = gn.apply_q(
                                spec, lambda k, mu=mu: sf.fs_eval(mu, k), lam
                            )
                            want = -m * sf.fs_eval(mu, lam)
                            for dn in pt.down_set(mu):
                                box = pt.added_box(dn, mu)
                                want += (
                                    r
                                    * sigma.content_factor(box[1] - box[0])
                                    * sf.fs_eval(dn, lam)
                                )
                            assert got == want


class TestMeixnerEigen:
    def test_falling_factorial_action(self):
        c, r = F(3, 2), F(2)
        spec = gn.Meixner1D(c, r)
        for m in range(9):
            for l in range(31):
                got = gn.apply_q(spec, lambda k, m=m: ff(k, m), l)
                want = -m * ff(l, m) + r * m * (m + c - 1) * ff(l, m - 1) if m else F(0)
                assert got == want

    def test_meixner_polynomials_are_eigenfunctions(self):
        for c, r in ((F(1), F(1)), (F(3, 2), F(1, 2))):
            spec = gn.Meixner1D(c, r)
            for n in range(7):
                mx = sf.meixner_poly_1d(n, c, r)
                for l in range(31):
                    got = gn.apply_q(spec, lambda k: polys.ff_eval(mx, k), l)
                    assert got == -n * polys.ff_eval(mx, l)

    def test_meixner_sym_eigenfunctions(self):
        for sigma in (SIGMA_PRINCIPAL, SIGMA_REAL):
            r = F(1, 2)
            spec = gn.ZMeasure(sigma, r)
            for n in range(5):
                for nu in pt.enumerate_partitions(n):
                    fn = sf.meixner_sym(nu, sigma, r).as_diagram_function()
                    for lam in pt.partitions_up_to(7):
                        assert gn.apply_q(spec, fn, lam) == -n * fn(lam)


class TestLaguerre1D:
    def test_constant(self):
        out = gn.laguerre_op_1d(F(2), gn.ExpPoly1D(F(0), polys.poly({0: 1})))
        assert out.poly == {}

    def test_linear_eigenfunction(self):
        c = F(5, 4)
        out = gn.laguerre_op_1d(c, gn.ExpPoly1D(F(0), polys.poly({1: 1, 0: -c})))
        assert out.poly == polys.poly({1: -1, 0: c})

    def test_laguerre_polynomials_are_eigenfunctions(self):
        for c in (F(1), F(7, 3)):
            for n in range(7):
                lg = sf.laguerre_poly_1d(n, c)
                out = gn.laguerre_op_1d(c, gn.ExpPoly1D(F(0), lg))
                assert out.poly == polys.pscale(lg, -n)

    @pytest.mark.parametrize("m", range(11))
    def test_three_term_action_on_exp_monomials(self, m):
        # D f_m = r(c+m-1) f_{m-1} + (r+1)(m+1) f_{m+1} - [(2r+1)m + rc] f_m
        c, r = F(3, 2), F(1, 2)

        def f(k):
            return polys.poly({k: r ** k / factorial(k)}) if k >= 0 else {}

        out = gn.laguerre_op_1d(c, gn.ExpPoly1D(r, f(m)))
        want = polys.padd(
            polys.pscale(f(m - 1), r * (c + m - 1)),
            polys.pscale(f(m + 1), (r + 1) * (m + 1)),
            polys.pscale(f(m), -((2 * r + 1) * m + r * c)),
        )
        assert out.rate == r and out.poly == want

    @pytest.mark.parametrize("m", range(11))
    def test_correspondence_with_q_rows(self, m):
        # the Q row at m and the operator action on f_m carry the same
        # three coefficients
        c, r = F(3, 2), F(1, 2)
        spec = gn.Meixner1D(c, r)
        col = {l: spec.row(l).get(m, F(0)) for l in (m - 1, m, m + 1) if l >= 0}

        def f(k):
            return polys.poly({k: r ** k / factorial(k)}) if k >= 0 else {}

        out = gn.laguerre_op_1d(c, gn.ExpPoly1D(r, f(m))).poly
        # expand the image in the basis {f_k}: coefficient of f_k
        for k in (m - 1, m, m + 1):
            if k < 0:
                continue
            got = out.get(k, F(0)) / (r ** k / factorial(k))
            assert got == col[k]


class TestLaguerreOperatorSym:
    def test_constant_killed(self):
        phi = gn.ExpSymFn(F(0), sf.SymFn.one("e"))
        assert gn.laguerre_op_sym(SIGMA_PRINCIPAL, phi).fn == sf.SymFn.zero("e")

    def test_degree_one_eigenfunction(self):
        sigma = SIGMA_REAL
        lag1 = sf.SymFn("e", {(1,): 1, (): -sigma.sigma2})
        out = gn.laguerre_op_sym(sigma, gn.ExpSymFn(F(0), lag1))
        assert out.fn == lag1 * -1

    def test_schur_action(self):
        # D S_mu = -|mu| S_mu + sum over removable boxes of the content
        # factor times S_{mu minus box}
        for sigma in (SIGMA_PRINCIPAL, SIGMA_REAL):
            for m in range(6):
                for mu in pt.enumerate_partitions(m):
                    fe = sf.convert(sf.SymFn.term("s", mu), "e")
                    got = gn.laguerre_operator_e(sigma, fe)
                    want = sf.SymFn.term("s", mu) * -m
                    for dn in pt.down_set(mu):
                        box = pt.added_box(dn, mu)
                        want = want + sf.SymFn.term(
                            "s", dn, sigma.content_factor(box[1] - box[0])
                        )
                    assert got == sf.convert(want, "e")

    def test_laguerre_sym_eigenfunctions(self):
        for sigma in SIGMA_GRID:
            for n in range(5):
                for nu in pt.enumerate_partitions(n):
                    lag = sf.convert(sf.laguerre_sym(nu, sigma), "e")
                    out = gn.laguerre_op_sym(sigma, gn.ExpSymFn(F(0), lag))
                    assert out.fn == lag * -n

    def test_restriction_to_e1_is_one_dimensional_operator(self):
        # on functions of e1 alone the operator reduces to
        # x d^2/dx^2 + (sigma2 - x) d/dx
        sigma = SIGMA_REAL
        for k in range(6):
            fe = sf.SymFn.term("e", (1,) * k)
            got = gn.laguerre_operator_e(sigma, fe)
            want = sf.SymFn(
                "e",
                {
                    (1,) * (k - 1) if k >= 1 else (): k * (k - 1) + sigma.sigma2 * k,
                    (1,) * k: -k,
                },
            )
            assert got == want

    def test_second_order_kills_linear_inputs(self):
        sigma = SIGMA_PRINCIPAL
        fe = sf.SymFn("e", {(1,): F(3), (): F(2)})
        got = gn.laguerre_operator_e(sigma, fe)
        # only first-order terms act: 3*(-e1 + sigma2)
        assert got == sf.SymFn("e", {(1,): -3, (): 3 * sigma.sigma2})

    @pytest.mark.parametrize("sigma", [SIGMA_PRINCIPAL, SIGMA_REAL])
    def test_product_rule_split_on_exp_schur(self, sigma):
        # the three expressions of the split, one by one, on
        # f_mu = (r^m/m!) e^{-r e1} S_mu
        r = F(1, 2)
        for m in range(1, 5):
            for mu in pt.enumerate_partitions(m):
                scale = r ** m / factorial(m)
                fe = sf.convert(sf.SymFn.term("s", mu), "e") * scale
                p1, p2, p3 = gn.laguerre_op_sym_parts(sigma, gn.ExpSymFn(r, fe))

                def fterm(kappa):
                    k = sum(kappa)
                    return sf.SymFn.term("s", kappa, r ** k / factorial(k))

                want1 = sf.SymFn.zero("s")
                for up in pt.up_set(mu):
                    want1 = want1 + fterm(up) * ((r + 1) * (m + 1))
                want1 = want1 - fterm(mu) * (r * sigma.sigma2)
                assert p1 == sf.convert(want1, "e")

                want2 = fterm(mu) * -m
                for dn in pt.down_set(mu):
                    box = pt.added_box(dn, mu)
                    want2 = want2 + fterm(dn) * (
                        F(r, m) * sigma.content_factor(box[1] - box[0])
                    )
                assert p2 == sf.convert(want2, "e")

                assert p3 == fe * (-2 * r * m)

    @pytest.mark.parametrize("sigma", [SIGMA_PRINCIPAL, SIGMA_REAL])
    def test_operator_matches_q_row_pattern(self, sigma):
        # coefficients of D on f_mu equal the Q-row coefficients on the
        # normalized deltas, index by index
        r = F(1, 2)
        spec = gn.ZMeasure(sigma, r)
        for m in range(1, 5):
            for mu in pt.enumerate_partitions(m):
                scale = r ** m / factorial(m)
                fe = sf.convert(sf.SymFn.term("s", mu), "e") * scale
                out = gn.laguerre_op_sym(sigma, gn.ExpSymFn(r, fe))
                out_s = sf.convert(out.fn, "s")
                # Q row entries into mu, normalized by dims
                for kappa in [mu] + pt.up_set(mu) + pt.down_set(mu):
                    k = sum(kappa)
                    q_coeff = spec.row(kappa).get(mu, F(0)) * F(
                        pt.dim(kappa), pt.dim(mu)
                    )
                    f_coeff = out_s.coeffs.get(kappa, F(0)) / (r ** k / factorial(k))
                    assert f_coeff == q_coeff


class TestIntertwining:
    def test_meixner_chain(self):
        fine = gn.Meixner1D(F(1), F(2))
        coarse = gn.Meixner1D(F(1), F(1))
        report = gn.verify_intertwining(fine, coarse, 30)
        assert report.ok and report.checked == 31

    def test_zmeasure_chain(self):
        fine = gn.ZMeasure(SIGMA_PRINCIPAL, F(3, 2))
        coarse = gn.ZMeasure(SIGMA_PRINCIPAL, F(1, 2))
        report = gn.verify_intertwining(fine, coarse, 7)
        assert report.ok

    def test_trivial_row(self):
        fine = gn.ZMeasure(SIGMA_REAL, F(2))
        coarse = gn.ZMeasure(SIGMA_REAL, F(1))
        report = gn.verify_intertwining(fine, coarse, 0)
        assert report.ok and report.checked == 1

    def test_plancherel_chain(self):
        report = gn.verify_intertwining(gn.Plancherel(F(2)), gn.Plancherel(F(1)), 5)
        assert report.ok

    def test_mismatched_parameters_rejected(self):
        with pytest.raises(ValueError):
            gn.verify_intertwining(
                gn.ZMeasure(SIGMA_REAL, F(1)), gn.ZMeasure(SIGMA_REAL, F(2)), 3
            )


class TestEkBounds:
    def test_meixner_stabilized(self):
        report = gn.verify_ek_bounds(gn.Meixner1D(F(1), F(1)), 50)
        assert report.ok
        assert report.details["stabilized"]
        assert report.details["window"]["diagonal"] <= 3.0

    def test_zmeasure_window_equals_one_dimensional(self):
        for sigma, r in ((SIGMA_PRINCIPAL, F(1)), (SIGMA_REAL, F(2))):
            z_rep = gn.verify_ek_bounds(gn.ZMeasure(sigma, r), 6)
            m_rep = gn.verify_ek_bounds(gn.Meixner1D(sigma.sigma2, r), 6)
            assert z_rep.details["window"] == m_rep.details["window"]

    def test_empty_row_eta(self):
        # single-entry row: (Q eta)(empty) = r sigma2 <= C
        spec = gn.ZMeasure(SIGMA_PRINCIPAL, F(1))
        row = spec.row(())
        q_eta = sum(rate * (pt.size(t) + 1) for t, rate in row.items())
        assert q_eta == spec.r * spec.sigma.sigma2

    def test_plancherel_bounds(self):
        report = gn.verify_ek_bounds(gn.Plancherel(F(2)), 8)
        assert report.ok

    def test_size_rate_collapse(self):
        # total up/down rates depend on the diagram only through its size
        for sigma in SIGMA_GRID:
            spec = gn.ZMeasure(sigma, F(1, 2))
            for lam in pt.partitions_up_to(8):
                up, down = gn.size_rate_sums(spec, lam)
                n = pt.size(lam)
                assert up == spec.r * (sigma.sigma2 + n)
                assert down == (spec.r + 1) * n


class TestPlancherelLimit:
    def test_append_rate_exact_at_empty(self):
        theta = F(2)
        for sigma2 in (F(100), F(1000)):
            spec = gn.ZMeasure(sf.ParamPair(F(0), sigma2), theta / sigma2)
            assert spec.row(())[(1,)] == theta

    def test_removal_rate_limit(self):
        theta = F(1)
        sigma2 = F(10000)
        spec = gn.ZMeasure(sf.ParamPair(F(0), sigma2), theta / sigma2)
        # down-rate (r+1) -> 1
        assert spec.row((1,))[()] == 1 + theta / sigma2

    def test_diagonal_limit(self):
        theta = F(1)
        lam = (2, 1)
        for sigma2 in (F(100), F(10000)):
            spec = gn.ZMeasure(sf.ParamPair(F(0), sigma2), theta / sigma2)
            got = spec.row(lam)[lam]
            want = -(3 + theta)
            assert abs(got - want) <= F(7, int(sigma2))

    def test_defects_decrease(self):
        sigmas = [sf.ParamPair(F(0), F(10 ** k)) for k in (2, 3, 4)]
        report = gn.plancherel_limit_check(F(1), sigmas, 4)
        assert report.ok
        d = report.details["defects"]
        assert d[0] > d[1] > d[2]


class TestPlancherelLimitOperator:
    def p(self, *idx):
        return sf.SymFn.term("p", idx)

    def test_p1(self):
        got = gn.plancherel_limit_operator(self.p(1))
        assert got == sf.SymFn("p", {(): 1, (1,): -1})

    def test_constant(self):
        assert gn.plancherel_limit_operator(self.p()) == sf.SymFn.zero("p")

    def test_higher_power_sums_scale_by_degree(self):
        for n in (2, 3):
            got = gn.plancherel_limit_operator(self.p(n))
            assert got == self.p(n) * -n

    def test_consistent_with_prelimit_action(self):
        # Q_theta on fs functions: -|mu| FS_mu + theta * sum FS_{mu - box};
        # pushing through the degree map FS -> theta^m S must reproduce the
        # boundary operator on Schur functions
        theta = F(3, 2)
        spec = gn.Plancherel(theta)
        for m in range(5):
            for mu in pt.enumerate_partitions(m):
                for lam in pt.partitions_up_to(6):
                    got = gn.apply_q(spec, lambda k, mu=mu: sf.fs_eval(mu, k), lam)
                    want = -m * sf.fs_eval(mu, lam) + theta * sum(
                        sf.fs_eval(dn, lam) for dn in pt.down_set(mu)
                    )
                    assert got == want
                # boundary image: A S_mu = -m S_mu + sum S_{mu - box}
                a_smu = gn.plancherel_limit_operator(
                    sf.convert(sf.SymFn.term("s", mu), "p")
                )
                want_s = sf.SymFn.term("s", mu) * -m
                for dn in pt.down_set(mu):
                    want_s = want_s + sf.SymFn.term("s", dn)
                assert a_smu == sf.convert(want_s, "p")
