"""Rational sets, limit censuses, hulls: automata against brute force."""
from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypset import (
    Alphabet,
    ReducedAutomaton,
    SubgroupGraph,
    ball,
    boolean,
    complement,
    hull_slice,
    inverse,
    inverse_automaton,
    limit_compare,
    normalize,
    product,
    reduced_product,
    sampled_limit_prefixes,
    shortlex_key,
    tame_check,
    translated,
)
from hypset.ratsets import LimitPrefixSet

from oracles import all_words, naive_nearest, random_reduced_word

AL = Alphabet(2)
BALL5 = all_words(AL, 5)


def lang(a: ReducedAutomaton, radius: int) -> set:
    return set(a.words(radius))


def from_texts(*texts):
    return ReducedAutomaton.from_words(AL, [AL.parse(t) for t in texts])


def subgroup_auto(*texts):
    return ReducedAutomaton.from_subgroup(
        SubgroupGraph.from_generators(AL, [AL.parse(t) for t in texts])
    )


# a small pool of rational operands reused by the brute-force comparisons;
# member lengths are kept short so window factorizations stay visible
def operand_pool():
    return [
        from_texts("1"),
        from_texts("x"),
        from_texts("xy", "Yx"),
        from_texts("1", "x", "xx"),
        ReducedAutomaton.star(AL, AL.parse("x")),
        ReducedAutomaton.star(AL, AL.parse("xy")),
        subgroup_auto("x"),
        subgroup_auto("xy"),
        subgroup_auto("xx", "yy"),
    ]


# -- construction and membership -----------------------------------------------


def test_singleton_epsilon_empty():
    w = AL.parse("xYx")
    s = ReducedAutomaton.singleton(AL, w)
    assert lang(s, 4) == {w}
    assert lang(ReducedAutomaton.epsilon(AL), 3) == {()}
    e = ReducedAutomaton.empty(AL)
    assert e.is_empty and lang(e, 3) == set()


def test_all_reduced_is_the_ball():
    A = ReducedAutomaton.all_reduced(AL)
    assert lang(A, 4) == set(BALL5) - {w for w in BALL5 if len(w) > 4}


def test_star_language():
    A = ReducedAutomaton.star(AL, AL.parse("xy"))
    assert lang(A, 6) == {(), AL.parse("xy"), AL.parse("xyxy"), AL.parse("xyxyxy")}
    assert ReducedAutomaton.star(AL, ()) == ReducedAutomaton.epsilon(AL)
    # conjugated core: powers of x y X stay reduced
    B = ReducedAutomaton.star(AL, AL.parse("xyX"))
    assert lang(B, 5) == {(), AL.parse("xyX"), AL.parse("xyyX"), AL.parse("xyyyX")}


def test_from_subgroup_matches_member_iter():
    H = SubgroupGraph.from_generators(AL, [AL.parse("xx"), AL.parse("yy")])
    A = ReducedAutomaton.from_subgroup(H)
    assert lang(A, 6) == set(H.member_iter(6))


def test_from_words_deduplicates_and_reduces():
    A = ReducedAutomaton.from_words(AL, [AL.parse("x"), (1,), (1, -1, 1)])
    assert lang(A, 3) == {(1,)}


def test_accepts_matches_words():
    for A in operand_pool():
        listed = lang(A, 5)
        for w in BALL5:
            assert A.accepts(w) == (w in listed)


# -- canonical minimality ------------------------------------------------------


def test_same_language_same_object():
    words = [AL.parse(t) for t in ["x", "xy", "xyy", "yX"]]
    a = ReducedAutomaton.from_words(AL, words)
    b = ReducedAutomaton.from_words(AL, list(reversed(words)))
    assert a == b and hash(a) == hash(b)
    # built a different way: union of singletons
    c = ReducedAutomaton.empty(AL)
    for w in words:
        c = boolean("or", c, ReducedAutomaton.singleton(AL, w))
    assert c == a


@given(st.lists(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=4), max_size=6))
@settings(max_examples=60, deadline=None)
def test_canonical_form_round_trip_random(raw):
    words = [normalize(w) for w in raw]
    a = ReducedAutomaton.from_words(AL, words)
    rng = random.Random(7)
    shuffled = list(words)
    rng.shuffle(shuffled)
    assert ReducedAutomaton.from_words(AL, shuffled) == a
    assert lang(a, 4) == {w for w in words if len(w) <= 4}


# -- boolean algebra -----------------------------------------------------------


def test_booleans_match_set_operations():
    pool = operand_pool()
    rng = random.Random(13)
    for trial in range(15):
        A, B = rng.choice(pool), rng.choice(pool)
        LA, LB = lang(A, 5), lang(B, 5)
        assert lang(boolean("or", A, B), 5) == LA | LB
        assert lang(boolean("and", A, B), 5) == LA & LB
        assert lang(boolean("minus", A, B), 5) == LA - LB
        assert lang(boolean("xor", A, B), 5) == LA ^ LB


def test_boolean_rejects_unknown_op():
    A = from_texts("x")
    with pytest.raises(ValueError):
        boolean("nand", A, A)


def test_complement_within_ball():
    for A in [from_texts("x", "yy"), subgroup_auto("x")]:
        comp = complement(A)
        L = lang(A, 4)
        assert lang(comp, 4) == {w for w in all_words(AL, 4) if w not in L}


def test_inverse_automaton_language():
    for A in operand_pool():
        got = lang(inverse_automaton(A), 5)
        want = {inverse(w) for w in lang(A, 5)}
        assert got == want


def test_translated_language():
    g = AL.parse("yx")
    for A in operand_pool()[:6]:
        L = lang(A, 5)
        left = lang(translated(A, g, "left"), 7)
        assert left == {product(g, w) for w in L if len(product(g, w)) <= 7}
        right = lang(translated(A, g, "right"), 7)
        assert right == {product(w, g) for w in L if len(product(w, g)) <= 7}


# -- reduced product -----------------------------------------------------------


def test_reduced_product_against_brute_force():
    pool = operand_pool()
    rng = random.Random(19)
    for trial in range(12):
        A, B = rng.choice(pool), rng.choice(pool)
        P = reduced_product(A, B)
        # soundness: every pairwise product from the windows is accepted
        wide_a, wide_b = lang(A, 5), lang(B, 5)
        for u in wide_a:
            for v in wide_b:
                assert P.accepts(product(u, v))
        # completeness on a smaller ball, factoring through wider windows
        brute = {
            product(u, v)
            for u in lang(A, 9)
            for v in lang(B, 9)
            if len(product(u, v)) <= 5
        }
        assert lang(P, 5) == brute


def test_reduced_product_subgroup_coset():
    # y . <x> is the coset: exactly the words y x^k
    P = reduced_product(ReducedAutomaton.singleton(AL, AL.parse("y")), subgroup_auto("x"))
    got = lang(P, 4)
    want = {AL.parse(t) for t in ["y", "yx", "yX", "yxx", "yXX", "yxxx", "yXXX"]}
    assert got == want


def test_reduced_product_with_cancellation():
    # <x> . x is <x> again: right translation by a member
    A = subgroup_auto("x")
    P = reduced_product(A, ReducedAutomaton.singleton(AL, AL.parse("x")))
    assert P == A


# -- growth, nearest -----------------------------------------------------------


def test_growth_counts():
    A = subgroup_auto("xx", "yy")
    g = A.growth(6)
    want = []
    L = lang(A, 6)
    for n in range(7):
        want.append(sum(1 for w in L if len(w) == n))
    assert list(g) == want
    assert g[0] == 1 and g[2] == 4


def test_nearest_word_matches_naive():
    rng = random.Random(37)
    for A in [subgroup_auto("xx", "yy"), from_texts("x", "yy", "xyx")]:
        members = sorted(lang(A, 8), key=shortlex_key)
        for trial in range(25):
            w = random_reduced_word(rng, AL, 4)
            got_d, got_w = A.nearest_word(w)
            want_d, want_w = naive_nearest(w, members)
            assert (got_d, got_w) == (want_d, want_w)


# -- limit censuses ------------------------------------------------------------


def test_limit_prefixes_of_axis():
    A = subgroup_auto("x")
    c = A.limit_prefixes(4)
    assert c.exact
    assert [AL.format(w) for w in c.words] == ["xxxx", "XXXX"]


def test_limit_prefixes_of_positive_ray():
    A = ReducedAutomaton.star(AL, AL.parse("x"))
    c = A.limit_prefixes(5)
    assert [AL.format(w) for w in c.words] == ["xxxxx"]


def test_limit_prefixes_ignore_finite_noise():
    # a finite chunk leaves no trace in the census
    A = boolean("or", ReducedAutomaton.star(AL, AL.parse("x")), from_texts("yy", "yx"))
    assert [AL.format(w) for w in A.limit_prefixes(3).words] == ["xxx"]


def test_limit_prefixes_finite_language_empty():
    A = from_texts("x", "xy", "yyy")
    c = A.limit_prefixes(2)
    assert c.count == 0 and c.exact


def test_monotone_refinement():
    for A in [subgroup_auto("xx", "yy"), subgroup_auto("xy"), ReducedAutomaton.all_reduced(AL)]:
        for d in range(1, 5):
            shallow = set(A.limit_prefixes(d).words)
            deeper = A.limit_prefixes(d + 1).words
            assert {p[:d] for p in deeper} == shallow


def test_translation_invariance_right():
    # right translation never moves the limit set
    A = subgroup_auto("xx", "yy")
    base = A.limit_prefixes(4)
    for t in ["x", "yx", "xxY"]:
        moved = translated(A, AL.parse(t), "right")
        assert limit_compare(moved.limit_prefixes(4), base).verdict == "equal"


def test_translation_left_moves_directions():
    A = subgroup_auto("x")
    moved = translated(A, AL.parse("y"), "left")
    assert [AL.format(w) for w in moved.limit_prefixes(3).words] == ["yxx", "yXX"]
    # translating by a member fixes a subgroup's census
    K = subgroup_auto("xx", "yy")
    fixed = translated(K, AL.parse("xx"), "left")
    assert limit_compare(fixed.limit_prefixes(4), K.limit_prefixes(4)).verdict == "equal"
    # round trip
    back = translated(moved, AL.parse("Y"), "left")
    assert limit_compare(back.limit_prefixes(4), A.limit_prefixes(4)).verdict == "equal"


def test_sampled_census_agrees_with_exact_at_24():
    cases = [
        subgroup_auto("x"),
        subgroup_auto("xx", "yy"),
        subgroup_auto("xy"),
        ReducedAutomaton.star(AL, AL.parse("x")),
    ]
    for A in cases:
        for depth in (3, 6):
            exact = A.limit_prefixes(depth)
            sampled = sampled_limit_prefixes(A.oracle("A"), depth, 24)
            assert sampled.words == exact.words
            assert not sampled.exact and exact.exact


def test_sampled_census_parity_footgun_documented():
    # <xx> has no members on odd spheres; an explicit min_length rescues it
    A = subgroup_auto("xx")
    empty = sampled_limit_prefixes(A.oracle(), 3, 25)
    assert empty.count == 0
    ok = sampled_limit_prefixes(A.oracle(), 3, 25, min_length=24)
    assert [AL.format(w) for w in ok.words] == ["xxx", "XXX"]


def test_limit_compare_verdicts():
    ax, ay = subgroup_auto("x"), subgroup_auto("y")
    both = boolean("or", ax, ay)
    assert limit_compare(ax.limit_prefixes(3), subgroup_auto("xx").limit_prefixes(3)).verdict == "equal"
    assert limit_compare(ax.limit_prefixes(3), ay.limit_prefixes(3)).verdict == "disjoint"
    cmp = limit_compare(ax.limit_prefixes(3), both.limit_prefixes(3))
    assert cmp.verdict == "left-subset"
    assert cmp.right_witness == AL.parse("yyy")
    cmp2 = limit_compare(both.limit_prefixes(3), ax.limit_prefixes(3))
    assert cmp2.verdict == "right-subset"
    assert cmp2.left_witness == AL.parse("yyy")
    with pytest.raises(ValueError):
        limit_compare(ax.limit_prefixes(2), ax.limit_prefixes(3))


def test_limit_compare_incomparable():
    a = boolean("or", subgroup_auto("x"), ReducedAutomaton.star(AL, AL.parse("y")))
    b = boolean("or", subgroup_auto("x"), ReducedAutomaton.star(AL, AL.parse("Y")))
    cmp = limit_compare(a.limit_prefixes(2), b.limit_prefixes(2))
    assert cmp.verdict == "incomparable"
    assert cmp.common_count == 2


# -- hulls ---------------------------------------------------------------------


def test_hull_slice_of_axis_is_the_segment():
    A = subgroup_auto("x")
    s = hull_slice(A.limit_prefixes(4), 3)
    assert [AL.format(w) for w in s.words] == ["1", "x", "X", "xx", "XX", "xxx", "XXX"]
    assert s.exact


def test_hull_slice_of_everything_is_the_ball():
    A = ReducedAutomaton.all_reduced(AL)
    s = hull_slice(A.limit_prefixes(3), 2)
    assert set(s.words) == set(all_words(AL, 2))


def test_hull_slice_offset_fork():
    # directions x y^infty and x Y^infty: lines live past the x prefix
    A = translated(boolean("or", ReducedAutomaton.star(AL, AL.parse("y")),
                           ReducedAutomaton.star(AL, AL.parse("Y"))), AL.parse("x"), "left")
    s = hull_slice(A.limit_prefixes(3), 2)
    assert [AL.format(w) for w in s.words] == ["x", "xy", "xY"]


def test_hull_slice_requires_two_directions():
    A = ReducedAutomaton.star(AL, AL.parse("x"))
    with pytest.raises(ValueError, match="hull undefined"):
        hull_slice(A.limit_prefixes(4), 3)


def test_hull_slice_depth_mismatch():
    A = subgroup_auto("x")
    with pytest.raises(ValueError):
        hull_slice(A.limit_prefixes(4), 4)


def test_hull_idempotence():
    # the slice's own outer sphere regenerates the same inner slices
    for A in [subgroup_auto("xx", "yy"), subgroup_auto("xy"),
              boolean("or", subgroup_auto("x"), subgroup_auto("y"))]:
        R = 5
        s = hull_slice(A.limit_prefixes(R + 1), R)
        sphere_words = tuple(w for w in s.words if len(w) == R)
        census = LimitPrefixSet(depth=R, words=sphere_words, exact=s.exact)
        again = hull_slice(census, R - 1)
        direct = hull_slice(A.limit_prefixes(R), R - 1)
        assert again.words == direct.words
        # and the inner slice is the outer one restricted to the smaller ball
        assert set(again.words) == {w for w in s.words if len(w) <= R - 1}


# -- tameness ------------------------------------------------------------------


def test_subgroup_is_tame_at_zero():
    H = SubgroupGraph.from_generators(AL, [AL.parse("x"), AL.parse("yy")])
    A = ReducedAutomaton.from_subgroup(H)
    hull = hull_slice(A.limit_prefixes(13), 12)
    res = tame_check(list(H.member_iter(8)), hull.words, 0, 8, 12)
    assert res.holds and res.certified
    assert res.worst_distance == 0


def test_tame_check_catches_far_members():
    # members drifting off every line between directions
    axis = hull_slice(subgroup_auto("x").limit_prefixes(17), 16)
    members = [AL.parse("xxx"), AL.parse("xxyy"), AL.parse("xyyyy")]
    res = tame_check(members, axis.words, 1, 6, 16)
    assert not res.holds
    assert AL.format(res.worst_member) == "xyyyy"
    assert res.worst_distance == 4
    assert res.certified


def test_tame_check_empty_hull_is_an_error():
    with pytest.raises(ValueError, match="hull undefined"):
        tame_check([AL.parse("x")], [], 0, 4, 4)


def test_tame_check_hull_against_itself():
    axis = hull_slice(subgroup_auto("x").limit_prefixes(9), 8)
    res = tame_check(list(axis.words), axis.words, 0, 8, 8)
    assert res.holds and res.worst_distance == 0


# -- serialization -------------------------------------------------------------


def test_automaton_text_round_trip():
    for A in operand_pool():
        assert ReducedAutomaton.from_text(A.to_text()) == A


def test_from_text_rejects_garbage():
    with pytest.raises(ValueError):
        ReducedAutomaton.from_text("gibberish")


def test_alphabet_mismatch_errors():
    B3 = ReducedAutomaton.all_reduced(Alphabet(3))
    A2 = ReducedAutomaton.all_reduced(AL)
    with pytest.raises(ValueError):
        boolean("and", A2, B3)
    with pytest.raises(ValueError):
        reduced_product(A2, B3)
