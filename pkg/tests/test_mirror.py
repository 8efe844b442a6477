"""Tests for the per-model series pipeline and differential operators."""

import math
from fractions import Fraction as F

import pytest

from mahlerq import (
    ConvergenceError,
    KVector,
    LogSeries,
    MirrorData,
    Model,
    Series,
    alpha,
    f_series,
    g0_series,
    gamma,
    h_series,
    local_mirror_map,
    mahler_measure,
    mirror_map,
    multinomial_diag,
    pf2_applicable,
    pf_apply,
    pf_operator,
)

M22 = Model.from_kvector((2, 2))
M333 = Model.from_kvector((3, 3, 3))
M244 = Model.from_kvector((2, 4, 4))
M236 = Model.from_kvector((2, 3, 6))


class TestAlpha:
    def test_333(self):
        assert [alpha(M333, m) for m in (1, 2, 3)] == [6, 90, 1680]

    def test_22_central_binomial(self):
        for m in range(8):
            assert alpha(M22, m) == math.comb(2 * m, m)

    def test_236(self):
        assert alpha(M236, 1) == 60

    def test_always_integer(self):
        for model in (M22, M333, M244, M236):
            for m in range(12):
                assert alpha(model, m).denominator == 1


class TestMultinomialDiag:
    def test_values(self):
        assert multinomial_diag(KVector((2, 2)), 2) == 2
        assert multinomial_diag(KVector((3, 3, 3)), 2) == 0
        assert multinomial_diag(KVector((3, 3, 3)), 3) == 6

    def test_links_to_alpha(self):
        # c_{km} = alpha_m by substituting xi^k/k^k = z
        kv = KVector((2, 3, 6))
        model = Model.from_kvector(kv)
        for m in (1, 2, 3):
            assert multinomial_diag(kv, 6 * m) == alpha(model, m) * math.comb(
                6 * m, 6 * m
            )  # == alpha_m


class TestSeriesPipeline:
    def test_g0_22(self):
        assert g0_series(M22, 3).coeffs == (1, 2, 6, 20)

    def test_g0_333(self):
        assert g0_series(M333, 2).coeffs == (1, 6, 90)

    def test_g0_constant_term(self):
        assert g0_series(M244, 5).coeff(0) == 1

    def test_local_map_22_catalan(self):
        assert local_mirror_map(M22, 4).coeffs == (0, 1, 2, 5, 14)

    def test_local_map_333(self):
        assert local_mirror_map(M333, 3).coeffs == (0, 1, 6, 63)

    def test_maps_are_normalized(self):
        for model in (M22, M333, M244, M236):
            for series in (local_mirror_map(model, 6), mirror_map(model, 6)):
                assert series.coeff(0) == 0 and series.coeff(1) == 1

    def test_local_map_is_z_exp_f(self):
        Q = local_mirror_map(M333, 9)
        assert Q.shift_down(1) == f_series(M333, 8).exp()

    def test_theta_log_local_map_is_g0(self):
        # theta log Q = 1 + theta(f) = g0
        for model in (M22, M333, M244, M236):
            f = f_series(model, 10)
            assert f.theta() + 1 == g0_series(model, 10)


class TestGamma:
    def test_22_initial(self):
        assert gamma(M22, 1) == 2

    def test_h_22_prefix(self):
        assert h_series(M22, 4).coeffs == (0, 2, 7, F(74, 3), F(533, 6))

    def test_closed_form_equals_recursion(self):
        for model in (M22, M333, M244, M236):
            op = pf_operator(model)
            prev = F(0)
            for m in range(1, 11):
                ratio = alpha(model, m) / alpha(model, m - 1)
                correction = sum(
                    1 / (m - 1 + aj) - 1 / (m - bj) for aj, bj in zip(op.a, op.b)
                ) * alpha(model, m)
                prev = ratio * prev + correction
                assert gamma(model, m) == prev, (model.name, m)

    def test_initial_value_formula(self):
        # gamma_1 == alpha_1 * sum_j (1/a_j - 1/(1-b_j))
        for model in (M22, M333, M244, M236):
            op = pf_operator(model)
            bracket = sum(1 / aj - 1 / (1 - bj) for aj, bj in zip(op.a, op.b))
            assert gamma(model, 1) == alpha(model, 1) * bracket


class TestOperators:
    def test_reduced_333(self):
        op = pf_operator(M333)
        assert op.constant == 27
        assert op.a == (F(1, 3), F(2, 3))
        assert op.b == (0, 0)

    def test_reduced_236(self):
        op = pf_operator(M236)
        assert op.constant == 432
        assert op.a == (F(1, 6), F(5, 6))
        assert op.b == (0, 0)

    def test_reduced_244(self):
        op = pf_operator(M244)
        assert op.constant == 64
        assert op.a == (F(1, 4), F(3, 4))
        assert op.b == (0, 0)

    def test_reduced_2_5_10_10_10(self):
        op = pf_operator(Model.from_kvector((2, 5, 10, 10, 10)))
        assert op.a == (F(1, 10), F(3, 10), F(7, 10), F(9, 10))
        assert op.b == (0, 0, 0, 0)

    def test_constant_is_product_of_parts_powers(self):
        # k^k / prod w_i^w_i == prod k_i^w_i
        for model in (M22, M333, M244, M236):
            expected = math.prod(
                ki**wi for ki, wi in zip(model.kvec.parts, model.w)
            )
            assert pf_operator(model).constant == expected

    def test_pf2_applicable(self):
        assert pf2_applicable(M333)
        assert pf2_applicable(Model.from_kvector((4, 4, 4, 4)))
        assert not pf2_applicable(Model.from_kvector((3, 4, 4, 6)))

    def test_ab1_ratio_identity(self):
        for model in (M22, M333, M244, M236):
            op = pf_operator(model)
            for m in range(1, 13):
                lhs = op.constant * math.prod(
                    (m - 1 + aj) / (m - bj) for aj, bj in zip(op.a, op.b)
                )
                assert lhs == alpha(model, m) / alpha(model, m - 1)

    def test_ab2_partial_fraction_identity(self):
        for model in (M333, M244, M236):
            op = pf_operator(model)
            k, w = model.k, model.w
            for m in range(1, 9):
                lhs = sum(
                    1 / (m - 1 + aj) - 1 / (m - bj) for aj, bj in zip(op.a, op.b)
                )
                rhs = sum(F(k, m * k - a) for a in range(k)) - sum(
                    F(wi, m * wi - a) for wi in w for a in range(wi)
                )
                assert lhs == rhs


class TestAnnihilation:
    ORDER = 14

    @pytest.mark.parametrize("model", [M333, M244, M236], ids=lambda m: m.name)
    def test_reduced_kills_g0_and_g1(self, model):
        op = pf_operator(model)
        g0 = g0_series(model, self.ORDER)
        g1 = LogSeries(h_series(model, self.ORDER), g0)
        assert pf_apply(op, g0, model).is_zero()
        assert pf_apply(op, g1, model).is_zero()

    def test_reduced_on_22_log_solution_is_inhomogeneous(self):
        # With a first-order operator there is no second solution: the
        # logarithmic combination satisfies L(g1) = 1 instead of 0.
        g0 = g0_series(M22, self.ORDER)
        g1 = LogSeries(h_series(M22, self.ORDER), g0)
        res = pf_apply(pf_operator(M22), g1)
        assert res.regular == Series.one(self.ORDER)
        assert res.logpart.is_zero()

    @pytest.mark.parametrize("model", [M22, M333, M244, M236], ids=lambda m: m.name)
    def test_local_kills_one_and_log_solution(self, model):
        op = pf_operator(model, "local")
        one = Series.one(self.ORDER)
        phi1 = LogSeries(f_series(model, self.ORDER), one)
        assert pf_apply(op, one).is_zero()
        assert pf_apply(op, phi1).is_zero()

    @pytest.mark.parametrize("model", [M22, M333, M244, M236], ids=lambda m: m.name)
    def test_unreduced_kills_g0(self, model):
        op = pf_operator(model, "unreduced")
        assert pf_apply(op, g0_series(model, self.ORDER)).is_zero()

    def test_constant_mismatch_detected(self):
        with pytest.raises(ValueError):
            pf_apply(pf_operator(M333), g0_series(M244, 4), M244)


class TestMirrorData:
    def test_invariants(self):
        md = MirrorData.build(M333, 8)
        assert md.q.shift_down(1) == (md.h / md.g0).truncate(7).exp()
        assert md.Q.shift_down(1) == md.f.truncate(7).exp()
        assert md.Q.compose(md.zQ) == Series.identity(8)
        assert md.q.compose(md.zq) == Series.identity(8)

    def test_series_lookup(self):
        md = MirrorData.build(M22, 4)
        assert md.series("Q").coeffs == (0, 1, 2, 5, 14)
        with pytest.raises(KeyError):
            md.series("nope")

    def test_json_round_trip(self):
        md = MirrorData.build(M236, 4)
        payload = md.to_json_dict()
        assert payload["order"] == 4
        assert payload["model"]["lcm"] == 6
        assert payload["g0"][1] == "60"
        assert all(len(payload[key]) == 5 for key in ("g0", "h", "f", "Q", "q"))


class TestMahlerMeasure:
    def test_22_closed_form(self):
        result = mahler_measure(M22, 2, 64)
        assert abs(result.log_measure - math.log((2 + math.sqrt(3)) / 2)) < 1e-6
        assert result.tail_bound < 1e-30
        assert abs(result.measure - (2 + math.sqrt(3)) / 2) < 1e-6

    def test_22_contour_integral_oracle(self):
        from scipy.integrate import quad

        value, err = quad(lambda t: math.log(abs(2 - math.cos(t))), 0, 2 * math.pi)
        oracle = value / (2 * math.pi)
        assert err < 1e-9
        assert abs(mahler_measure(M22, 2, 64).log_measure - oracle) < 1e-7

    def test_large_psi_asymptotic(self):
        result = mahler_measure(M22, 1000, 16)
        assert abs(result.log_measure - math.log(1000)) < 1e-5

    def test_convergence_guard(self):
        with pytest.raises(ConvergenceError):
            mahler_measure(M333, F(1, 10), 8)
        with pytest.raises(ConvergenceError):
            mahler_measure(M22, 1, 8)  # |z|*C == 1 exactly: not strictly inside

    def test_rejects_nonpositive_psi(self):
        with pytest.raises(ValueError):
            mahler_measure(M22, F(-2), 8)
