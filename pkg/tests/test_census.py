"""Exact enumeration: valid-string counts, bad censuses, walk identities."""

import io
import math

import pytest

from leinert import (
    BudgetExceededError,
    bad_count_length8_formula,
    bad_count_length12_formula,
    brute_force_return_walks,
    composition_sum_identity,
    compositions_count,
    conjugation_extension_count,
    count_bad_exact,
    first_return_formula,
    fit_exponential_rate,
    growth_rate,
    is_bad,
    is_kernel,
    iter_bad_strings,
    iter_compositions,
    parse_signature,
    return_walks_formula,
    take_census,
    valid_string_count,
    walk_formula_comparison,
    word_from_text,
)
from leinert.census import (
    InsufficientDataError,
    composition_sum_enumerated,
    conjugation_extensions,
    iter_valid_strings,
    walk_distance_distribution,
    write_census_csv,
)

F2F2 = parse_signature("F2xF2")
Z3 = parse_signature("Z3")


class TestValidStrings:
    def test_count_formula(self):
        # s total generators: s choices then s-1 per later letter
        assert valid_string_count(F2F2, 2) == 12
        assert valid_string_count(F2F2, 8) == 8748
        assert valid_string_count(Z3, 6) == 3 * 2**5

    def test_enumeration_matches_formula(self):
        for length in (2, 4, 6):
            words = list(iter_valid_strings(F2F2, length))
            assert len(words) == valid_string_count(F2F2, length)
            assert len(set(words)) == len(words)

    def test_odd_length_rejected(self):
        with pytest.raises(ValueError):
            valid_string_count(F2F2, 7)


class TestBadCounts:
    def test_f2f2_below_eight(self):
        for length in (2, 4, 6):
            assert count_bad_exact(F2F2, length) == 0

    def test_f2f2_at_eight(self):
        bad = list(iter_bad_strings(F2F2, 8))
        assert len(bad) == 16
        assert all(is_kernel(w) for w in bad)

    def test_f2f2_at_ten(self):
        bad = list(iter_bad_strings(F2F2, 10))
        assert len(bad) == 32
        # every length-10 bad string contains a length-8 kernel, so none
        # are minimal themselves
        assert not any(is_kernel(w) for w in bad)

    def test_z3_counts(self):
        assert [count_bad_exact(Z3, l) for l in (2, 4, 6, 8)] == [0, 0, 6, 6]

    def test_z3_six_is_hexagon_family(self):
        # abc a'b'c' patterns with a, b, c the three central generators:
        # 3! orderings per exponent arrangement collapse to exactly 6 strings
        bad = list(iter_bad_strings(Z3, 6))
        assert len(bad) == 6
        assert all(is_kernel(w) for w in bad)

    def test_rank_one_factors_have_none(self):
        for name in ("F1xF1", "F1xF2"):
            sig = parse_signature(name)
            for length in (2, 4, 6, 8):
                assert count_bad_exact(sig, length) == 0

    def test_budget_guard(self):
        with pytest.raises(BudgetExceededError):
            count_bad_exact(F2F2, 8, budget=100)
        with pytest.raises(BudgetExceededError):
            count_bad_exact(F2F2, 20)


class TestCensusObject:
    def test_take_census(self):
        census = take_census(F2F2, range(2, 11, 2))
        assert census.lengths() == [2, 4, 6, 8, 10]
        e = census.entries[8]
        assert (e.total_valid, e.bad, e.kernels) == (8748, 16, 16)
        assert e.frequency == pytest.approx(16 / 8748)
        assert census.entries[10].kernels == 0

    def test_csv_golden(self):
        census = take_census(F2F2, range(2, 9, 2))
        buf = io.StringIO()
        write_census_csv(census, buf)
        assert buf.getvalue() == (
            "length,total_valid,bad,kernels,frequency\n"
            "2,12,0,0,0\n"
            "4,108,0,0,0\n"
            "6,972,0,0,0\n"
            "8,8748,16,16,0.00182898948331\n"
        )


class TestClosedForms:
    def test_length8_formula_values(self):
        assert bad_count_length8_formula(2, 2) == 8
        assert bad_count_length8_formula(1, 5) == 0
        assert bad_count_length8_formula(3, 3) == 72

    def test_length8_formula_counts_interleaved_family_only(self):
        # enumeration finds the interleaved commutator strings the formula
        # counts plus an equal-sized mirrored family it misses
        assert count_bad_exact(F2F2, 8) == 2 * bad_count_length8_formula(2, 2)

    def test_length12_bracket(self):
        assert bad_count_length12_formula(8, 4) == 176
        assert bad_count_length12_formula(16, 4) == 352

    def test_conjugation_extensions(self):
        assert conjugation_extension_count(4) == 2
        kernel = word_from_text(
            F2F2, "f1g1' f1g2 f2g1' f2g2 f1g2' f1g1 f2g2' f2g1"
        )
        assert is_bad(kernel)
        wrappers = conjugation_extensions(kernel.conjugate())
        assert len(wrappers) == conjugation_extension_count(4)

    def test_conjugation_extension_needs_two_generators(self):
        with pytest.raises(ValueError):
            conjugation_extension_count(1)


class TestCompositions:
    def test_count(self):
        for total in range(1, 9):
            tuples = list(iter_compositions(total))
            assert len(tuples) == compositions_count(total) == 2 ** (total - 1)
            assert all(sum(t) == total and min(t) >= 1 for t in tuples)
            assert len(set(tuples)) == len(tuples)

    def test_sum_identity_vanishes(self):
        for s in range(1, 6):
            for total in range(1, 9):
                assert composition_sum_identity(s, total) == 0

    def test_enumerated_sum_matches_binomial_form(self):
        # grouping compositions by part count turns the product sum into
        # the binomial expression the identity compares
        for s in (1, 2, 3):
            for total in range(1, 7):
                enumerated = composition_sum_enumerated(s, total)
                closed = return_walks_formula(s, total)
                assert enumerated == closed


class TestWalkCounts:
    def test_conservation(self):
        for s in (1, 2):
            for steps in range(1, 9):
                dist = walk_distance_distribution(s, steps)
                assert sum(dist.values()) == (2 * s) ** steps

    def test_hand_values(self):
        # one excursion out and back: 2s ways
        assert brute_force_return_walks(1, 2, first_return_only=True) == 2
        assert brute_force_return_walks(2, 2, first_return_only=True) == 4

    def test_rank_one_is_central_binomial(self):
        # F_1 = Z, so returns in 2n steps are lattice-path counts
        for n in range(1, 8):
            assert brute_force_return_walks(1, 2 * n) == math.comb(2 * n, n)

    def test_formula_exact_through_four_steps(self):
        for s in (1, 2, 3):
            for steps in (2, 4):
                half = steps // 2
                assert brute_force_return_walks(
                    s, steps, first_return_only=True
                ) == first_return_formula(s, half)
                assert brute_force_return_walks(s, steps) == return_walks_formula(
                    s, half
                )

    def test_formula_undercounts_from_six_steps(self):
        # the geometric count assumes one shape per excursion length; the
        # tree offers Catalan-many, so the DP pulls ahead
        assert brute_force_return_walks(1, 6) == 20
        assert return_walks_formula(1, 3) == 18
        assert brute_force_return_walks(2, 6) == 232
        assert return_walks_formula(2, 3) == 196

    def test_comparison_table_shape(self):
        rows = walk_formula_comparison((1, 2), 10)
        assert len(rows) == 2 * 2 * 5
        for row in rows:
            assert row.kind in ("first_return", "all_returns")
            assert row.dp_count >= row.formula_count  # undercount only
            if row.steps <= 4:
                assert row.agree


class TestDecayFit:
    def test_recovers_exact_geometric(self):
        xs = [3, 4, 5, 6]
        rate = 0.37
        ys = [2.5 * rate**x for x in xs]
        fitted, residual = fit_exponential_rate(xs, ys)
        assert fitted == pytest.approx(rate, rel=1e-12)
        assert residual < 1e-12

    def test_needs_three_positive_points(self):
        with pytest.raises(InsufficientDataError):
            fit_exponential_rate([1, 2, 3], [0.0, 0.0, 0.5])

    def test_growth_rate_on_census(self):
        census = take_census(F2F2, range(2, 13, 2))
        est = growth_rate(census)
        assert est.lengths == (8, 10, 12)
        assert 0 < est.rate < 1
        assert all(0 < r < 1 for r in est.per_length_roots)
