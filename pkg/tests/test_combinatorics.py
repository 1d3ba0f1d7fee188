import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from qpl import combinatorics as comb
from qpl import fnfamily as fam
from qpl.combinatorics import Overpartition, SeqPattern


def product_counts(T: int) -> list[int]:
    """Coefficients of prod (1+q^n)/(1-q^n), the overpartition counts, by series expansion."""
    series = [1] + [0] * T
    for part in range(1, T + 1):
        # times (1 + q^part)
        for n in range(T, part - 1, -1):
            series[n] += series[n - part]
        # divided by (1 - q^part)
        for n in range(part, T + 1):
            series[n] += series[n - part]
    return series


def ops(*texts):
    return {Overpartition.parse(t) for t in texts}


class TestOverpartitions:
    def test_counts_of_three(self):
        listed = ops("3", "3~", "2+1", "2+1~", "2~+1", "2~+1~", "1+1+1", "1~+1+1")
        assert set(comb.enum_overpartitions(3)) == listed

    @pytest.mark.parametrize("n", range(0, 16))
    def test_total_count_matches_product(self, n):
        assert len(comb.enum_overpartitions(n)) == product_counts(15)[n]

    @pytest.mark.parametrize("n", [0, 5, 9])
    def test_enumeration_has_no_duplicates(self, n):
        found = comb.enum_overpartitions(n)
        assert len(found) == len(set(found))
        assert all(op.weight == n for op in found)

    def test_validation(self):
        with pytest.raises(ValueError):
            Overpartition((1, 2), (False, False))
        with pytest.raises(ValueError):
            Overpartition((2, 2), (False, True))
        with pytest.raises(ValueError):
            Overpartition((0,), (False,))
        with pytest.raises(ValueError):
            comb.enum_overpartitions(comb.ENUM_LIMIT + 1)

    def test_text_round_trip(self):
        for op in comb.enum_overpartitions(6):
            assert Overpartition.parse(str(op)) == op
        assert str(Overpartition((), ())) == "0"

    def test_json(self):
        doc = json.loads(comb.overpartitions_json([Overpartition.parse("3~+1")]))
        assert doc == [[[3, True], [1, False]]]


class TestPatterns:
    def test_shifted_occurrence(self):
        pat = SeqPattern(((1, True), (2, False), (3, True)))
        host = Overpartition.parse("7~+7+6+5~+4")
        assert list(pat.shifts(host)) == [4]

    def test_multiset_containment(self):
        # two plain copies of 2 are needed
        pat = SeqPattern(((2, False), (2, False)))
        assert pat.matches(Overpartition.parse("2+2"))
        assert not pat.matches(Overpartition.parse("2~+2"))

    def test_overlined_entry_needs_overlined_copy(self):
        pat = SeqPattern(((1, True),))
        assert not pat.matches(Overpartition.parse("1+1"))
        assert pat.matches(Overpartition.parse("3~"))

    @pytest.mark.parametrize("i,k,text", [
        (0, 1, "1~+2+3~"),
        (0, 2, "1~+2+3~+4+5~"),
        (1, 1, "2~+2+3"),
        (2, 1, "2+3~+3"),
        (1, 2, "2~+2+3+4~+5"),
        (2, 2, "2+3~+3+4+5~"),
        (3, 2, "2+3+4~+4+5"),
    ])
    def test_sequence_patterns(self, i, k, text):
        assert str(comb.sequence_pattern(i, k)) == text

    def test_sequence_pattern_bounds(self):
        with pytest.raises(ValueError):
            comb.sequence_pattern(4, 1)
        with pytest.raises(ValueError):
            comb.sequence_pattern(-1, 1)

    def test_stretched_runs(self):
        runs = [str(p) for p in comb.stretched_runs(1, 5)]
        assert runs == ["1~+2+3~", "1~+2+3+4~", "1~+2+3+4+5~"]

    def test_guard(self):
        g = comb.GuardedPattern(SeqPattern(((2, True), (2, False), (3, False))), (4, 4))
        assert g.violated_by(Overpartition.parse("3+2~+2"))
        assert not g.violated_by(Overpartition.parse("4~+3+2~+2"))
        # the guard moves with the occurrence
        assert g.violated_by(Overpartition.parse("4~+4+3~+3"))
        assert not g.violated_by(Overpartition.parse("5~+4+3~+3"))


class TestWorkedExamples:
    def test_n4_list(self):
        listed = ops("4", "4~", "3+1", "3~+1", "3+1~", "3~+1~", "2+2", "2~+2", "2+1+1",
                     "2~+1+1", "2+1~+1", "1+1+1+1", "1~+1+1+1")
        for reading in comb.READINGS:
            assert set(comb.filtered(4, 0, 1, reading)) == listed
        assert comb.count_2color(4) == 13

    def test_n7_three_parts(self):
        # the listed "3~+3+2" has weight 8; the admitted overpartition is 3~+2+2
        listed = ops("5+1+1", "5~+1+1", "4+2+1", "4~+2+1", "4+2~+1", "4~+2~+1",
                     "3+3+1", "3~+3+1", "3+2+2", "3~+2+2")
        for reading in comb.READINGS:
            got = {op for op in comb.filtered(7, 1, 1, reading) if len(op) == 3}
            assert got == listed
        cons = comb.Constraints(1, 1)
        for excluded in ("3~+2~+2", "5+1~+1", "3+2~+2"):
            assert not cons.admits(Overpartition.parse(excluded))

    def test_n7_by_parts(self):
        assert comb.count_filtered(7, 1, 1)[1] == (0, 2, 9, 10, 7, 4, 2, 1)


class TestAgainstSeries:
    @pytest.mark.parametrize("i,k", [(0, 1), (1, 1), (2, 1), (0, 2), (1, 2), (2, 2)])
    def test_calibrated_counts_match_series(self, i, k):
        T = 14
        gf = fam.overpartition_gf(i, k, T)
        for n in range(T + 1):
            want = [0] * (n + 1)
            for e, c in gf.coeff(n):
                want[e] = c
            assert comb.count_filtered(n, i, k)[1] == tuple(want), n

    def test_literal_reading_frozen_values(self):
        # the literal wording admits one extra overpartition of 10 for (i,k) = (0,1)
        assert [comb.count_filtered(n, 0, 1, "literal")[0] for n in (9, 10, 11, 12)] == [122, 182, 263, 379]
        assert [comb.count_filtered(n, 0, 1)[0] for n in (9, 10, 11, 12)] == [122, 181, 262, 377]

    def test_literal_extra_witness(self):
        op = Overpartition.parse("4~+3+2+1~")
        assert comb.Constraints(0, 1, "literal").admits(op)
        assert not comb.Constraints(0, 1).admits(op)

    def test_calibrated_needs_positive_k(self):
        with pytest.raises(ValueError):
            comb.Constraints(0, 0)
        with pytest.raises(ValueError):
            comb.Constraints(0, 1, "loose")


class TestTwoColor:
    def test_counts_against_product(self):
        T = 20
        red = oracles.count_parts_in({0}, 1, T)
        green = oracles.count_parts_in({1}, 3, T)
        conv = [sum(red[a] * green[n - a] for a in range(n + 1)) for n in range(T + 1)]
        assert [comb.count_2color(n) for n in range(T + 1)] == conv

    def test_small_listing(self):
        got = sorted(str(p) for p in comb.enum_2color(2))
        assert got == ["1g+1g", "1r+1g", "1r+1r", "2r"]

    def test_green_parts_are_one_mod_three(self):
        with pytest.raises(ValueError):
            comb.TwoColorPartition((), (2,))

    @given(st.integers(0, 14))
    @settings(max_examples=15, deadline=None)
    def test_matches_restricted_overpartitions(self, n):
        assert comb.count_filtered(n, 0, 1)[0] == comb.count_2color(n)
