import json
from pathlib import Path

import pytest

from klpoly.coxeter import CartanDatum, WeylGroup
from klpoly.klcore import (
    IntervalTooLarge,
    KLEngine,
    NegativeCoefficient,
    NotComparable,
    ValidationFailure,
    cross_validate,
)
from klpoly.laurent import HalfLaurent, poly_from_string

T = HalfLaurent.t_power
ONE = HalfLaurent.one()
ZERO = HalfLaurent.zero()

GOLDEN = Path(__file__).parent / "data" / "a3_p_table.json"


@pytest.fixture(scope="module")
def eng_a1(group_a1):
    return KLEngine(group_a1)


@pytest.fixture(scope="module")
def eng_a2(group_a2):
    return KLEngine(group_a2)


@pytest.fixture(scope="module")
def eng_a3(group_a3):
    return KLEngine(group_a3)


class TestRRecursive:
    def test_incomparable(self, eng_a2, group_a2):
        assert eng_a2.r_poly_recursive(group_a2.generator(1), group_a2.generator(2)) == ZERO

    def test_longest_from_identity(self, eng_a2, group_a2):
        w0 = group_a2.element_from_word([1, 2, 1])
        assert eng_a2.r_poly_recursive(group_a2.identity, w0) == poly_from_string(
            "t^3-2t^2+2t-1"
        )

    def test_longest_from_s1(self, eng_a2, group_a2):
        w0 = group_a2.element_from_word([1, 2, 1])
        assert eng_a2.r_poly_recursive(group_a2.generator(1), w0) == (T(1) - 1) ** 2

    @pytest.mark.parametrize("label", ["A2", "B2", "G2"])
    def test_agrees_with_hecke_everywhere(self, label):
        eng = KLEngine(WeylGroup(CartanDatum.from_label(label)))
        for v, w in eng.group.comparable_pairs():
            assert eng.r_poly_recursive(v, w) == eng.extract_R(v, w)


class TestPRecursive:
    def test_diagonal(self, eng_a2, group_a2):
        for w in group_a2.enumerate_group():
            assert eng_a2.p_poly_recursive(w, w) == ONE

    def test_a1_pair(self, eng_a1, group_a1):
        assert eng_a1.p_poly_recursive(group_a1.identity, group_a1.generator(1)) == ONE

    def test_a2_longest(self, eng_a2, group_a2):
        w0 = group_a2.element_from_word([1, 2, 1])
        assert eng_a2.p_poly_recursive(group_a2.identity, w0) == ONE

    def test_not_comparable_raises(self, eng_a2, group_a2):
        with pytest.raises(NotComparable):
            eng_a2.p_poly_recursive(group_a2.generator(1), group_a2.generator(2))

    @pytest.mark.parametrize("label", ["A2", "B2", "G2"])
    def test_dihedral_groups_are_trivial(self, label):
        # Every P in a rank-2 group is 1.
        eng = KLEngine(WeylGroup(CartanDatum.from_label(label)))
        for v, w in eng.group.comparable_pairs():
            assert eng.p_poly_recursive(v, w) == ONE

    def test_first_nontrivial_a3_pair(self, eng_a3, group_a3):
        # The classic singular case: w = s2 s1 s3 s2, v = s2 gives 1 + t.
        w = group_a3.element_from_word([2, 1, 3, 2])
        v = group_a3.generator(2)
        assert eng_a3.p_poly_recursive(v, w) == ONE + T(1)

    def test_golden_a3_table(self, eng_a3, group_a3):
        rows = json.loads(GOLDEN.read_text())["rows"]
        assert len(rows) > 0
        seen_nontrivial = 0
        for row in rows:
            v = group_a3.element_from_word(
                [] if row["v"] == "e" else [int(x) for x in row["v"].split(".")]
            )
            w = group_a3.element_from_word(
                [] if row["w"] == "e" else [int(x) for x in row["w"].split(".")]
            )
            expected = HalfLaurent.from_pairs([(i, c) for i, c in row["poly"]])
            assert eng_a3.p_poly_recursive(v, w) == expected, (row["v"], row["w"])
            if expected != ONE:
                seen_nontrivial += 1
        assert seen_nontrivial >= 1
        assert len(rows) == sum(1 for _ in group_a3.comparable_pairs())


class TestChainRoutes:
    def test_dp_accumulators_a2(self, eng_a2, group_a2):
        # Hand values for the top interval of A2.
        w0 = group_a2.element_from_word([1, 2, 1])
        s1s2 = group_a2.element_from_word([1, 2])
        s1 = group_a2.generator(1)
        assert eng_a2._chain_tail(s1s2, w0, "half") == -ONE
        assert eng_a2._chain_tail(s1, w0, "half") == -ONE

    def test_direct_a1(self, eng_a1, group_a1):
        assert eng_a1.p_poly_chain_direct(group_a1.identity, group_a1.generator(1)) == ONE

    def test_direct_a2_from_s1(self, eng_a2, group_a2):
        w0 = group_a2.element_from_word([1, 2, 1])
        assert eng_a2.p_poly_chain_direct(group_a2.generator(1), w0) == ONE

    def test_direct_a2_from_identity(self, eng_a2, group_a2):
        w0 = group_a2.element_from_word([1, 2, 1])
        assert eng_a2.p_poly_chain_direct(group_a2.identity, w0) == ONE

    def test_dp_a2_from_identity(self, eng_a2, group_a2):
        w0 = group_a2.element_from_word([1, 2, 1])
        assert eng_a2.p_poly_chain_dp(group_a2.identity, w0) == ONE

    def test_dp_matches_recursion_a3(self, eng_a3, group_a3):
        for v, w in group_a3.comparable_pairs():
            assert eng_a3.p_poly_chain_dp(v, w) == eng_a3.p_poly_recursive(v, w), (
                group_a3.word_string(v),
                group_a3.word_string(w),
            )

    def test_direct_matches_dp_under_cap_a3(self, eng_a3, group_a3):
        checked = 0
        for v, w in group_a3.comparable_pairs():
            if v == w or len(group_a3.interval(v, w)) > 14:
                continue
            checked += 1
            assert eng_a3.p_poly_chain_direct(v, w) == eng_a3.p_poly_chain_dp(v, w)
        assert checked > 50

    def test_direct_cap_enforced(self, eng_a3, group_a3):
        w0 = group_a3.longest_element()
        with pytest.raises(IntervalTooLarge):
            eng_a3.p_poly_chain_direct(group_a3.identity, w0, direct_cap=14)

    def test_not_comparable(self, eng_a2, group_a2):
        with pytest.raises(NotComparable):
            eng_a2.p_poly_chain_dp(group_a2.generator(1), group_a2.generator(2))


class TestNegativeControl:
    """Reading the truncation bounds as integer degrees must break the
    chain formula in a specific, pinned way."""

    def test_misreading_produces_the_known_wrong_value(self, group_a2):
        eng = KLEngine(group_a2)
        w0 = group_a2.element_from_word([1, 2, 1])
        e = group_a2.identity
        wrong = poly_from_string("2t^2-2t+1")
        assert eng.p_poly_chain_direct(e, w0, tau_reading="degree") == wrong
        assert eng.p_poly_chain_dp(e, w0, tau_reading="degree") == wrong
        assert eng.p_poly_recursive(e, w0) == ONE

    def test_unknown_reading_rejected(self, eng_a2, group_a2):
        with pytest.raises(ValueError):
            eng_a2.p_poly_chain_dp(
                group_a2.identity, group_a2.generator(1), tau_reading="thirds"
            )


class TestStalkDictionary:
    def test_trivial_pairs(self, eng_a2, group_a2):
        w0 = group_a2.element_from_word([1, 2, 1])
        assert eng_a2.ic_stalk_dims(group_a2.identity, w0) == {0: 1}
        assert eng_a2.ic_stalk_dims(w0, w0) == {0: 1}

    def test_nontrivial_a3_pair(self, eng_a3, group_a3):
        w = group_a3.element_from_word([2, 1, 3, 2])
        v = group_a3.generator(2)
        assert eng_a3.ic_stalk_dims(v, w) == {0: 1, 2: 1}

    def test_all_even_nonnegative_a3(self, eng_a3, group_a3):
        for v, w in group_a3.comparable_pairs():
            dims = eng_a3.ic_stalk_dims(v, w)
            assert all(deg % 2 == 0 and deg >= 0 for deg in dims)
            assert all(d > 0 for d in dims.values())

    def test_negative_coefficient_raises(self, group_a2):
        # Unreachable through correct arithmetic, so poison the P memo.
        eng = KLEngine(group_a2)
        e, s1 = group_a2.identity, group_a2.generator(1)
        eng._p_memo[(e, s1)] = HalfLaurent.from_pairs([(0, 1), (2, -3)])
        with pytest.raises(NegativeCoefficient):
            eng.ic_stalk_dims(e, s1)


class TestPolyTables:
    def test_r_table_routes_agree(self, group_b2):
        eng = KLEngine(group_b2)
        tables = {route: eng.r_table(route) for route in ("recursion", "hecke", "cells")}
        entries = [t.entries for t in tables.values()]
        assert entries[0] == entries[1] == entries[2]
        assert tables["hecke"].kind == "R"
        assert tables["cells"].route == "cells"
        assert len(entries[0]) == sum(1 for _ in group_b2.comparable_pairs())

    def test_p_table_diagonal_convention(self, group_a2):
        eng = KLEngine(group_a2)
        table = eng.p_table("chain_dp")
        for (v, w), poly in table.entries.items():
            if v == w:
                assert poly == ONE


class TestCrossValidate:
    def test_a1_counts(self):
        report = cross_validate(CartanDatum.from_label("A1"))
        assert report.status == "pass"
        assert report.comparable_pairs == 3
        assert report.group_order == 2

    def test_a2_counts(self):
        report = cross_validate(CartanDatum.from_label("A2"))
        assert report.status == "pass"
        assert report.comparable_pairs == 19
        assert set(report.suites) == {
            "triple-r", "paving", "p-routes", "chain-direct", "structure", "dictionary",
        }

    def test_a3_reports_nontrivial_p(self):
        report = cross_validate(CartanDatum.from_label("A3"))
        assert report.status == "pass"
        assert report.suites["dictionary"]["nontrivial"] >= 1

    def test_suite_selection(self):
        report = cross_validate(CartanDatum.from_label("A2"), suites=["paving"])
        assert set(report.suites) == {"paving"}

    def test_chain_direct_skips_large_intervals(self):
        report = cross_validate(
            CartanDatum.from_label("A3"), suites=["chain-direct"], direct_cap=4
        )
        assert report.suites["chain-direct"]["skipped_intervals"] > 0

    def test_bad_suite_name(self):
        with pytest.raises(ValueError):
            cross_validate(CartanDatum.from_label("A1"), suites=["nope"])

    def test_bad_q(self):
        with pytest.raises(ValueError):
            cross_validate(CartanDatum.from_label("A1"), q_values=[1])

    def test_workers_do_not_change_the_report(self):
        d = CartanDatum.from_label("B2")
        r1 = cross_validate(d, workers=1).to_json_dict()
        r4 = cross_validate(d, workers=4).to_json_dict()
        assert r1 == r4

    def test_failure_carries_the_pair(self, group_a2):
        eng = KLEngine(group_a2)
        # Poison the recursion memo to force a divergence.
        w0 = group_a2.element_from_word([1, 2, 1])
        eng._r_memo[(group_a2.identity, w0)] = HalfLaurent.t_power(3)
        with pytest.raises(ValidationFailure) as exc:
            cross_validate(group_a2.datum, suites=["triple-r"], engine=eng)
        assert exc.value.suite == "triple-r"
        assert exc.value.w_word == "1.2.1"
        assert "hecke" in exc.value.values
