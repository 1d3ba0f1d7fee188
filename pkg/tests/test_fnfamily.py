import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from qpl import fnfamily as fam
from qpl.fnfamily import FamilyParams
from qpl.qcore import Series, coeff, eval_x_one, inverse, poch_infinite
from qpl.report import PASS


def as_dict(s: Series) -> dict:
    return {(d, e): c for d, e, c in s.terms()}


def x_free(coeffs, T):
    return Series.from_poly(coeffs, T)


# -- F_N --------------------------------------------------------------------------

class TestFiniteSum:
    def test_initial_values(self):
        assert str(fam.f_upper_N(FamilyParams(0, 1, 1, 1))) == "1 + q*x"
        F3 = fam.f_upper_N(FamilyParams(0, 1, 1, 3))
        assert str(F3) == "1 + q*x + q^2*x + q^3*x + q^4*x^2 - q^6*x^3"
        assert eval_x_one(F3) == x_free([1, 1, 1, 1, 1, 0, -1], F3.trunc)

    def test_negative_N_is_zero(self):
        for i, j, k in [(0, 0, 0), (1, 2, 3)]:
            assert fam.f_upper_N(FamilyParams(i, j, k, -1), 5).is_zero()

    def test_rejects_negative_parameters(self):
        with pytest.raises(ValueError):
            FamilyParams(-1, 0, 0, 3)

    def test_frozen_value_at_one(self):
        # from the independent oracle: F_5(0,1,1;1)
        want = [1, 1, 1, 1, 2, 2, 1, 1, 1, 0, -1, -1, -1, -1, -1]
        got = fam.F011_at_one(5)
        assert got.coefficients()[: len(want)] == want
        assert not any(got.coefficients()[len(want):])

    @given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2), st.integers(-1, 9))
    @settings(max_examples=60, deadline=None)
    def test_matches_oracle(self, i, j, k, N):
        assert as_dict(fam.f_upper_N(FamilyParams(i, j, k, N))) == oracles.F_finite(i, j, k, N)

    @given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2), st.integers(0, 12))
    @settings(max_examples=40, deadline=None)
    def test_degree_bound_is_exact_enough(self, i, j, k, N):
        p = FamilyParams(i, j, k, N)
        qd, xd = fam.f_upper_degree(p)
        exact = fam.f_upper_N(p)
        assert exact.q_degree() <= qd and exact.x_degree() <= xd
        # a larger truncation adds nothing
        assert fam.f_upper_N(p, qd + 5) == exact.pad(qd + 5)

    @given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2), st.integers(0, 10))
    @settings(max_examples=40, deadline=None)
    def test_value_at_x_zero_is_one(self, i, j, k, N):
        assert fam.f_upper_N(FamilyParams(i, j, k, N)).row(0) == (1,)

    @pytest.mark.parametrize("i,j,k", [(0, 0, 1), (1, 0, 1), (0, 2, 1), (2, 1, 2)])
    def test_stabilizes_in_N(self, i, j, k):
        T = 12
        ref = fam.f_upper_N(FamilyParams(i, j, k, T + j + 1), T)
        for N in range(T + j + 1, T + j + 5):
            assert fam.f_upper_N(FamilyParams(i, j, k, N), T) == ref
        if j == 0:
            assert ref == fam.f_infinite(i, k, T)


# -- infinite sum -------------------------------------------------------------------

class TestInfiniteSum:
    def test_one_mod_three_example(self):
        assert fam.f_infinite(0, 1, 7, x_tracked=False) == x_free([1, 1, 1, 1, 2, 2, 2, 3], 7)

    def test_order_zero(self):
        for i, k in [(0, 0), (2, 1), (1, 3)]:
            assert fam.f_infinite(i, k, 0) == Series.one(0)

    @pytest.mark.parametrize("T", [8, 40, 100])
    def test_one_mod_three_against_partition_count(self, T):
        lhs, rhs = fam.one_mod_three_sides(T)
        assert lhs.coefficients() == oracles.count_parts_in({1}, 3, T)
        assert rhs.coefficients() == oracles.count_parts_in({1}, 3, T)

    def test_two_three_mod_six(self):
        T = 60
        lhs, rhs = fam.conjecture_sides(T)
        assert lhs.coefficients() == oracles.count_parts_in({2, 3}, 6, T)
        assert rhs == lhs

    @given(st.integers(0, 3), st.integers(0, 2), st.integers(0, 15))
    @settings(max_examples=30, deadline=None)
    def test_matches_oracle(self, i, k, T):
        assert as_dict(fam.f_infinite(i, k, T)) == oracles.F_infinite(i, k, T)

    def test_x_tracking_flag(self):
        T = 20
        assert fam.f_infinite(1, 1, T, x_tracked=False) == eval_x_one(fam.f_infinite(1, 1, T))


class TestOverpartitionSeries:
    def test_worked_example(self):
        got = dict(coeff(fam.overpartition_gf(1, 1, 7), 7))
        assert got == {7: 1, 6: 2, 5: 4, 4: 7, 3: 10, 2: 9, 1: 2}

    def test_constant_term(self):
        assert coeff(fam.overpartition_gf(0, 1, 5), 0) == [(0, 1)]

    def test_definition(self):
        T = 15
        want = fam.f_infinite(0, 2, T) * inverse(poch_infinite(1, 1, T, x_weight=1))
        assert fam.overpartition_gf(0, 2, T) == want

    def test_partition_factor_oracle(self):
        # the x-tracked partition generating function, from a counting recursion
        T = 12
        got = as_dict(inverse(poch_infinite(1, 1, T, x_weight=1)))
        assert got == oracles.partitions_by_parts(T)


# -- k = 0 closed form ----------------------------------------------------------------

class TestClosedFormAtKZero:
    def test_single_term(self):
        for N in range(5):
            assert fam.f_k0_closed(2, 1, N) == Series.one(0)

    def test_rejects_j_zero(self):
        with pytest.raises(ValueError):
            fam.f_k0_closed(0, 0, 3)

    @pytest.mark.parametrize("N", [1, 3])
    def test_small_cases_against_oracle(self, N):
        s = fam.f_k0_closed(0, 2, N)
        assert as_dict(s) == oracles.F_finite(0, 2, 0, N)

    def test_printed_variants_fail(self):
        T = 40
        target = fam.f_upper_N(FamilyParams(0, 3, 0, 2), T)
        for variant in ("statement", "proof"):
            assert fam.f_k0_closed(0, 3, 2, T, variant) != target

    def test_unsigned_fails_only_for_small_N(self):
        # without the M <= N cap the sum keeps terms the double sum cannot produce
        T = 40
        assert fam.f_k0_closed(0, 4, 1, T, "unsigned") != fam.f_upper_N(FamilyParams(0, 4, 0, 1), T)
        assert fam.f_k0_closed(0, 4, 5, T, "unsigned") == fam.f_upper_N(FamilyParams(0, 4, 0, 5), T)

    def test_resolution(self):
        res = fam.resolve_k0_closed(8, 4, 2)
        assert res.chosen == "corrected"
        assert res.candidates["corrected"] == PASS
        assert not res.printed_ok

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            fam.f_k0_closed(0, 2, 2, variant="guess")


# -- f_N and b_N -------------------------------------------------------------------

class TestSmallSequences:
    def test_trivial_values(self):
        assert fam.f_small(0) == Series.one(0)
        assert fam.f_small(2) == Series.one(0)

    @pytest.mark.parametrize("N", range(0, 13))
    def test_f_against_oracle(self, N):
        assert as_dict(fam.f_small(N)) == oracles.f_small(N)

    def test_b_initial(self):
        for sign in (1, -1):
            assert fam.b_seq(1, sign=sign) == Series.one(0)

    def test_b_two(self):
        # F_1(0,1,1;1) = 1 + q and F_0 = 1
        assert fam.b_seq(2, 3, 1) == x_free([1, 2], 3)
        assert fam.b_seq(2, 3, -1) == Series.one(3)

    def test_b_sign_resolution(self):
        res = fam.resolve_b_sign(20)
        assert res.chosen == "-"
        assert res.candidates["+"] != PASS

    @pytest.mark.parametrize("N", range(1, 16))
    def test_f_equals_b(self, N):
        T = max(fam.f_small_degree(N), fam.b_degree(N))
        assert fam.f_small(N, T) == fam.b_seq(N, T)

    def test_pair_reading_differs(self):
        assert fam.f_small(6, reading="pair") != fam.f_small(6)

    def test_f_rejects_negative(self):
        with pytest.raises(ValueError):
            fam.f_small(-1)
        with pytest.raises(ValueError):
            fam.b_seq(3, sign=0)
