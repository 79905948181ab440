import pytest

from klpoly.coxeter import (
    CartanDatum,
    GroupTooLarge,
    NonFiniteType,
    Root,
    WeylGroup,
    word_from_string,
    word_to_string,
)

from _oracles import bfs_word_length, brute_force_interval, greedy_subword_leq


class TestCartanDatum:
    def test_label_round_trip(self):
        d = CartanDatum.from_label("a3")
        assert d.label == "A3"
        assert d.rank == 3
        assert d.cartan == ((2, -1, 0), (-1, 2, -1), (0, -1, 2))

    def test_b2_matrix(self):
        assert CartanDatum.from_label("B2").cartan == ((2, -1), (-2, 2))

    def test_g2_matrix(self):
        assert CartanDatum.from_label("G2").cartan == ((2, -1), (-3, 2))

    def test_diagonal_must_be_two(self):
        with pytest.raises(ValueError):
            CartanDatum.from_matrix([[1]])

    def test_positive_off_diagonal_rejected(self):
        with pytest.raises(ValueError):
            CartanDatum.from_matrix([[2, 1], [1, 2]])

    def test_asymmetric_zero_pattern_rejected(self):
        with pytest.raises(ValueError):
            CartanDatum.from_matrix([[2, 0], [-1, 2]])

    def test_affine_bond_rejected(self):
        # a_12 * a_21 = 4 is the affine A1 bond.
        with pytest.raises(ValueError):
            CartanDatum.from_matrix([[2, -2], [-2, 2]])

    def test_known_orders(self):
        assert CartanDatum.from_label("A4").known_order() == 120
        assert CartanDatum.from_label("B3").known_order() == 48
        assert CartanDatum.from_label("D4").known_order() == 192
        assert CartanDatum.from_label("E6").known_order() == 51840
        assert CartanDatum.from_matrix([[2]]).known_order() is None

    def test_lying_label_is_ignored(self):
        d = CartanDatum.from_matrix([[2, -1], [-1, 2]], label="A9")
        assert d.known_order() is None


class TestRootsAndAction:
    def test_reflection_negates_own_root(self, group_a2):
        a1 = group_a2.simple_root(1)
        assert group_a2.act_on_root(1, a1) == -a1

    def test_a2_cartan_forces_sum(self, group_a2):
        a1, a2 = group_a2.simple_root(1), group_a2.simple_root(2)
        assert group_a2.act_on_root(1, a2) == Root((1, 1))
        assert group_a2.act_on_root(1, -a2) == Root((-1, -1))

    def test_positive_root_counts(self, group_a2, group_b2, group_b3, group_g2):
        assert len(WeylGroup(CartanDatum.from_label("A1")).positive_roots) == 1
        assert len(group_a2.positive_roots) == 3
        assert len(group_b2.positive_roots) == 4
        assert len(group_b3.positive_roots) == 9
        assert len(group_g2.positive_roots) == 6

    def test_a2_positive_roots_explicit(self, group_a2):
        assert {r.coords for r in group_a2.positive_roots} == {
            (1, 0),
            (0, 1),
            (1, 1),
        }

    def test_no_mixed_signs_anywhere(self, group_b3):
        roots = [r.coords for r in group_b3.positive_roots]
        for w in group_b3.enumerate_group():
            for coords in roots:
                img = group_b3.act(w, Root(coords))
                assert img.is_positive or img.is_negative

    def test_non_finite_type(self):
        # Rank-3 datum with three strong bonds is not finite.
        d = CartanDatum.from_matrix(
            [[2, -2, -2], [-1, 2, -2], [-1, -1, 2]]
        )
        with pytest.raises(NonFiniteType):
            _ = WeylGroup(d).positive_roots


class TestLengthAndWords:
    def test_identity(self, group_a2):
        assert group_a2.length(group_a2.identity) == 0
        assert group_a2.reduced_word(group_a2.identity) == ()

    def test_involution(self, group_a2):
        s1 = group_a2.generator(1)
        assert group_a2.multiply(s1, s1) == group_a2.identity

    def test_length_of_longest_a2(self, group_a2):
        w0 = group_a2.element_from_word([1, 2, 1])
        assert group_a2.length(w0) == 3
        assert bfs_word_length(group_a2, w0) == 3

    def test_length_matches_bfs_oracle_everywhere(self, group_b2):
        for w in group_b2.enumerate_group():
            assert group_b2.length(w) == bfs_word_length(group_b2, w)

    def test_shortlex_word_of_longest_a2(self, group_a2):
        w0 = group_a2.element_from_word([2, 1, 2])
        assert group_a2.reduced_word(w0) == (1, 2, 1)

    def test_all_reduced_words_a2(self, group_a2):
        w0 = group_a2.element_from_word([1, 2, 1])
        assert set(group_a2.all_reduced_words(w0)) == {(1, 2, 1), (2, 1, 2)}

    def test_all_reduced_words_lengths(self, group_a3):
        for w in group_a3.enumerate_group():
            words = group_a3.all_reduced_words(w)
            assert len(words) >= 1
            assert all(len(u) == group_a3.length(w) for u in words)
            assert all(group_a3.element_from_word(u) == w for u in words)

    def test_reduced_word_count_a3_longest(self, group_a3):
        assert len(group_a3.all_reduced_words(group_a3.longest_element())) == 16

    def test_length_of_inverse(self, group_b2):
        for w in group_b2.enumerate_group():
            assert group_b2.length(w) == group_b2.length(group_b2.inverse(w))

    def test_length_parity_subadditive(self, group_a3):
        els = group_a3.enumerate_group()
        for v in els[:8]:
            for w in els[:8]:
                lv, lw = group_a3.length(v), group_a3.length(w)
                lvw = group_a3.length(group_a3.multiply(v, w))
                assert lvw <= lv + lw
                assert (lvw - lv - lw) % 2 == 0


class TestBraidRelations:
    @pytest.mark.parametrize("label", ["A2", "A3", "B2", "B3", "G2"])
    def test_braid_orders(self, label):
        g = WeylGroup(CartanDatum.from_label(label))
        a = g.datum.cartan
        m_of = {0: 2, 1: 3, 2: 4, 3: 6}
        for i in range(1, g.rank + 1):
            for j in range(i + 1, g.rank + 1):
                m = m_of[a[i - 1][j - 1] * a[j - 1][i - 1]]
                prod = g.multiply(g.generator(i), g.generator(j))
                acc = g.identity
                for _ in range(m):
                    acc = g.multiply(acc, prod)
                assert acc == g.identity
                # No smaller power may be trivial.
                acc = g.identity
                for k in range(1, m):
                    acc = g.multiply(acc, prod)
                    assert acc != g.identity


class TestEnumeration:
    @pytest.mark.parametrize(
        "label,order",
        [("A1", 2), ("A2", 6), ("A3", 24), ("B2", 8), ("B3", 48), ("G2", 12), ("D4", 192)],
    )
    def test_orders(self, label, order):
        g = WeylGroup(CartanDatum.from_label(label))
        assert len(g.enumerate_group()) == order

    def test_sorted_by_length_then_word(self, group_b2):
        els = group_b2.enumerate_group()
        keys = [(group_b2.length(w), group_b2.reduced_word(w)) for w in els]
        assert keys == sorted(keys)
        assert els[0] == group_b2.identity

    def test_cap_refuses_early_by_formula(self):
        with pytest.raises(GroupTooLarge):
            WeylGroup(CartanDatum.from_label("A9")).enumerate_group()

    def test_cap_override(self):
        g = WeylGroup(CartanDatum.from_label("A2"), max_order=5)
        with pytest.raises(GroupTooLarge):
            g.enumerate_group()


class TestBruhatOrder:
    def test_identity_below_everything(self, group_a2):
        for w in group_a2.enumerate_group():
            assert group_a2.bruhat_leq(group_a2.identity, w)

    def test_equal_length_distinct_incomparable(self, group_a2):
        s1, s2 = group_a2.generator(1), group_a2.generator(2)
        assert not group_a2.bruhat_leq(s1, s2)
        assert not group_a2.bruhat_leq(s2, s1)

    def test_generator_below_product(self, group_a2):
        s1 = group_a2.generator(1)
        s2s1 = group_a2.element_from_word([2, 1])
        assert group_a2.bruhat_leq(s1, s2s1)

    @pytest.mark.parametrize("fixture", ["group_a3", "group_b2"])
    def test_agrees_with_subword_oracle(self, fixture, request):
        g = request.getfixturevalue(fixture)
        els = g.enumerate_group()
        for v in els:
            for w in els:
                assert g.bruhat_leq(v, w) == greedy_subword_leq(g, v, w), (
                    g.word_string(v),
                    g.word_string(w),
                )

    def test_comparable_pair_count_a2(self, group_a2):
        assert sum(1 for _ in group_a2.comparable_pairs()) == 19


class TestIntervals:
    def test_full_interval_a2(self, group_a2):
        w0 = group_a2.element_from_word([1, 2, 1])
        iv = group_a2.interval(group_a2.identity, w0)
        assert len(iv) == 6
        assert set(iv) == brute_force_interval(group_a2, group_a2.identity, w0)

    def test_singleton(self, group_a2):
        s1 = group_a2.generator(1)
        assert group_a2.interval(s1, s1) == (s1,)

    def test_incomparable_is_empty(self, group_a2):
        assert group_a2.interval(group_a2.generator(1), group_a2.generator(2)) == ()

    def test_interval_sorted(self, group_a3):
        w0 = group_a3.longest_element()
        iv = group_a3.interval(group_a3.generator(2), w0)
        keys = [(group_a3.length(y), group_a3.reduced_word(y)) for y in iv]
        assert keys == sorted(keys)


class TestWordStrings:
    def test_round_trip(self):
        assert word_to_string((1, 2, 1)) == "1.2.1"
        assert word_to_string(()) == "e"
        assert word_from_string("1.2.1") == (1, 2, 1)
        assert word_from_string("e") == ()
        assert word_from_string("") == ()

    def test_rejects_nonsense(self):
        with pytest.raises(ValueError):
            word_from_string("1.x.2")
        with pytest.raises(ValueError):
            word_from_string("0.1")
