"""Coarse-geometry predicates against exhaustive small-case oracles."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypset import (
    Alphabet,
    TruncationParams,
    WordTrie,
    broken_line_check,
    conj_witness,
    conjugacy_oracle,
    delta_four_point,
    distance,
    explicit_oracle,
    geodesic,
    gromov_product,
    hausdorff_truncated,
    inverse,
    normalize,
    preceq_check,
    product,
    quasiconvexity_constant,
    quasidense_check,
    quasigeodesic_check,
    shortlex_key,
    thin_triangle_defect,
    union_oracle,
)
from hypset.geometry import complement_oracle, left_translate_oracle, predicate_oracle
from hypset.stallings import SubgroupGraph

from oracles import all_words, naive_nearest, random_reduced_word

AL = Alphabet(2)


def oracle_of(texts):
    return explicit_oracle(AL, [AL.parse(t) for t in texts])


# -- oracles and tries ---------------------------------------------------------


def test_explicit_oracle_members_sorted_and_windowed():
    A = oracle_of(["xx", "y", "xyx", "1"])
    ms = A.members(2)
    assert [AL.format(w) for w in ms] == ["1", "y", "xx"]
    assert A.contains(AL.parse("xyx"))
    assert not A.contains(AL.parse("yy"))


def test_predicate_oracle_enumerates_by_ball():
    even = predicate_oracle(AL, lambda w: len(w) % 2 == 0, "even length")
    ms = even.members(3)
    assert all(len(w) % 2 == 0 for w in ms)
    assert len(ms) == 1 + 12  # lengths 0 and 2


def test_union_translate_complement_oracles():
    A = oracle_of(["x", "xx"])
    B = oracle_of(["y"])
    U = union_oracle(A, B)
    assert {AL.format(w) for w in U.members(2)} == {"x", "xx", "y"}
    T = left_translate_oracle(AL.parse("y"), A)
    assert {AL.format(w) for w in T.members(3)} == {"yx", "yxx"}
    C = complement_oracle(B)
    assert AL.parse("y") not in set(C.members(1))
    assert len(C.members(1)) == 4


def test_conjugacy_oracle_matches_brute_force():
    from oracles import naive_inverse, naive_product

    A = conjugacy_oracle(AL, [AL.parse("xy")])
    got = {AL.format(w) for w in A.members(4)}
    brute = {
        AL.format(w)
        for g in all_words(AL, 3)
        for w in [naive_product(g, AL.parse("xy"), naive_inverse(g))]
        if len(w) <= 4
    }
    assert got == brute
    assert got == {"xy", "yx", "xxyX", "Yxyy", "yyxY", "Xyxx"}


@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=8))
def test_word_trie_nearest_matches_naive(raw):
    w = normalize(raw)
    members = [AL.parse(t) for t in ["1", "x", "xx", "xxx", "xy", "xyy", "yX", "Y"]]
    trie = WordTrie(members)
    got_d, got_w = trie.nearest(w)
    want_d, want_w = naive_nearest(w, members)
    assert got_d == want_d
    assert got_w == want_w  # ties break shortlex


def test_word_trie_min_divergence():
    trie = WordTrie([AL.parse("xxx"), AL.parse("xxy")])
    assert trie.min_divergence(AL.parse("xxx")) == 2
    assert trie.min_divergence(AL.parse("xxy")) == 2


# -- quasiconvexity ------------------------------------------------------------


def naive_epsilon(members, window_members):
    """Max over member pairs and geodesic vertices of d(vertex, set)."""
    worst = 0
    for a in members:
        for b in members:
            for v in geodesic(a, b):
                d, _ = naive_nearest(v, window_members)
                worst = max(worst, d)
    return worst


def test_quasiconvexity_of_prefix_closed_set_is_zero():
    A = oracle_of(["1", "x", "xx", "xy"])
    est = quasiconvexity_constant(A, TruncationParams(2))
    assert est.epsilon == 0


def test_quasiconvexity_matches_naive_on_random_sets():
    rng = random.Random(5)
    pool = all_words(AL, 4)
    for trial in range(12):
        members = sorted(
            {random_reduced_word(rng, AL, 4) for _ in range(rng.randint(2, 7))},
            key=shortlex_key,
        )
        if len(members) < 2:
            continue
        A = explicit_oracle(AL, members)
        params = TruncationParams(4)
        est = quasiconvexity_constant(A, params)
        want = naive_epsilon(members, A.members(params.window))
        assert est.epsilon == want, members
        # the reported witness realizes the bound
        d, _ = naive_nearest(est.point, A.members(params.window))
        assert d == est.epsilon


def test_quasiconvexity_needs_two_members():
    with pytest.raises(ValueError):
        quasiconvexity_constant(oracle_of(["x"]), TruncationParams(3))


def test_even_subgroup_epsilon_is_one():
    H = SubgroupGraph.from_generators(AL, [AL.parse("xx"), AL.parse("yy")])
    est = quasiconvexity_constant(H.oracle("H"), TruncationParams(5))
    assert est.epsilon == 1  # odd prefixes sit at distance 1


# -- preceq --------------------------------------------------------------------


def naive_preceq(B_members, A_window, c):
    for b in B_members:
        d, _ = naive_nearest(b, A_window)
        if d > c:
            return False, b
    return True, None


def test_preceq_matches_naive_on_random_sets():
    rng = random.Random(23)
    for trial in range(15):
        B = explicit_oracle(
            AL, {random_reduced_word(rng, AL, 4) for _ in range(rng.randint(1, 6))}
        )
        A = explicit_oracle(
            AL, {random_reduced_word(rng, AL, 4) for _ in range(rng.randint(1, 6))}
        )
        c = rng.randint(0, 3)
        params = TruncationParams(4)
        res = preceq_check(B, A, c, params)
        want_holds, want_witness = naive_preceq(
            B.members(params.radius), A.members(params.window), c
        )
        assert res.holds == want_holds
        if not res.holds:
            assert res.witness == want_witness
            d, _ = naive_nearest(res.witness, A.members(params.window))
            assert d == res.witness_distance > c


def test_preceq_covering_translates():
    B = oracle_of(["x", "xx", "xxx"])
    A = oracle_of(["1", "x", "xx", "xxx", "xxxx"])
    res = preceq_check(B, A, 0, TruncationParams(3))
    assert res.holds
    assert res.translates == ((),)  # B sits inside A


def test_preceq_subgroup_pair():
    H = SubgroupGraph.from_generators(AL, [AL.parse("xx")])
    K = SubgroupGraph.from_generators(AL, [AL.parse("x")])
    assert preceq_check(H.oracle(), K.oracle(), 0, TruncationParams(8)).holds
    assert preceq_check(K.oracle(), H.oracle(), 1, TruncationParams(8)).holds
    assert not preceq_check(K.oracle(), H.oracle(), 0, TruncationParams(8)).holds


# -- quasidensity and hausdorff ------------------------------------------------


def test_quasidense_matches_naive():
    rng = random.Random(9)
    for trial in range(10):
        Q = explicit_oracle(
            AL, {random_reduced_word(rng, AL, 3) for _ in range(rng.randint(1, 8))}
        )
        alpha = rng.randint(0, 2)
        params = TruncationParams(3)
        res = quasidense_check(Q, alpha, params)
        dists = [naive_nearest(g, Q.members(params.window))[0] for g in all_words(AL, 3)]
        assert res.holds == (max(dists) <= alpha)
        if res.holds:
            assert res.max_distance == max(dists)
        else:
            assert res.witness_distance > alpha


def test_quasidense_even_subgroup():
    H = SubgroupGraph.from_generators(
        AL, [AL.parse(t) for t in ["xx", "yy", "xy", "xY"]]
    )
    assert quasidense_check(H.oracle(), 1, TruncationParams(5)).holds
    assert not quasidense_check(H.oracle(), 0, TruncationParams(5)).holds


def test_hausdorff_matches_naive():
    rng = random.Random(31)
    for trial in range(10):
        A = explicit_oracle(
            AL, {random_reduced_word(rng, AL, 3) for _ in range(rng.randint(1, 6))}
        )
        B = explicit_oracle(
            AL, {random_reduced_word(rng, AL, 3) for _ in range(rng.randint(1, 6))}
        )
        params = TruncationParams(3)
        est = hausdorff_truncated(A, B, params)
        fwd = max(
            naive_nearest(a, B.members(params.window))[0] for a in A.members(params.radius)
        )
        bwd = max(
            naive_nearest(b, A.members(params.window))[0] for b in B.members(params.radius)
        )
        assert est.forward.value == fwd
        assert est.backward.value == bwd
        assert est.value == max(fwd, bwd)


def test_hausdorff_axis_vs_even_axis():
    A = SubgroupGraph.from_generators(AL, [AL.parse("x")]).oracle()
    B = SubgroupGraph.from_generators(AL, [AL.parse("xx")]).oracle()
    est = hausdorff_truncated(A, B, TruncationParams(10))
    assert est.value == 1
    assert est.within_slack


# -- quasigeodesics and broken lines -------------------------------------------


def test_quasigeodesic_on_geodesic():
    path = geodesic(AL.parse("XX"), AL.parse("yy"))
    res = quasigeodesic_check(path, 1, 0)
    assert res.holds
    assert res.worst_margin == 0


def test_quasigeodesic_detects_backtrack():
    # walk x, x, back, back: the span (0, 4) returns to the origin
    path = [(), (1,), (1, 1), (1,), ()]
    res = quasigeodesic_check(path, Fraction(1, 2), 1)
    assert not res.holds
    assert res.worst_span == (0, 4)
    assert res.worst_margin == Fraction(-1)


def test_quasigeodesic_rejects_bad_params():
    with pytest.raises(ValueError):
        quasigeodesic_check([(), (1,)], 0, 1)
    with pytest.raises(ValueError):
        quasigeodesic_check([(), (1, 1)], 1, 1)


def exact_length_word(rng, al, n):
    letters = []
    while len(letters) < n:
        choices = [l for l in al.ranked_letters if not letters or l != -letters[-1]]
        letters.append(rng.choice(choices))
    return tuple(letters)


def make_broken_line(rng, segments, seg_len, C0):
    """Random broken line with corners of Gromov product <= C0."""
    verts = [()]
    prev_step = None
    while len(verts) <= segments:
        step = exact_length_word(rng, AL, rng.randint(seg_len + 1, seg_len + 6))
        if prev_step is not None:
            corner = gromov_product(inverse(prev_step), step)
            if corner > C0:
                continue
        verts.append(product(verts[-1], step))
        prev_step = step
    return verts


def test_broken_line_conclusions_hold():
    rng = random.Random(77)
    for trial in range(40):
        verts = make_broken_line(rng, rng.randint(2, 4), 25, 2)
        res = broken_line_check(verts, C0=2, C1=25)
        assert res.hypotheses_ok, res.failures
        assert res.conclusions_hold
        assert res.max_deviation <= 4
        assert 2 * res.endpoints_distance >= res.total_length


def test_broken_line_deviation_matches_naive():
    rng = random.Random(78)
    for trial in range(5):
        verts = make_broken_line(rng, 3, 25, 2)
        res = broken_line_check(verts, C0=2, C1=25)
        # naive deviation: scan every vertex of every segment against the
        # full endpoint geodesic
        end_geo = geodesic(verts[0], verts[-1])
        worst = 0
        for a, b in zip(verts, verts[1:]):
            for v in geodesic(a, b):
                worst = max(worst, min(distance(v, u) for u in end_geo))
        assert res.max_deviation == worst


def test_broken_line_reports_violated_hypotheses():
    verts = [(), AL.parse("xxx")]  # single short segment
    res = broken_line_check(verts, C0=0, C1=25)
    assert not res.hypotheses_ok
    assert any("segment" in f for f in res.failures)
    assert res.conclusions_hold is None


def test_broken_line_rejects_c1_not_dominating_c0():
    res = broken_line_check([(), AL.parse("xxxx")], C0=1, C1=3)
    assert not res.hypotheses_ok
    assert any("12*C0" in f for f in res.failures)


# -- conjugation witnesses -----------------------------------------------------


def test_conj_witness_inside_subgroup():
    H = SubgroupGraph.from_generators(AL, [AL.parse("xx"), AL.parse("yy")])
    A = H.oracle("H")
    params = TruncationParams(8)
    eps = quasiconvexity_constant(A, params).epsilon
    g = AL.parse("x")
    wit = conj_witness(A, g, eps, params)
    assert product(wit.a, wit.r, inverse(wit.b)) == g
    assert H.contains(wit.a) and H.contains(wit.b)
    assert len(wit.r) <= wit.bound == 2 * eps + 2 * wit.kappa


def test_conj_witness_needs_shared_elements():
    A = oracle_of(["x", "xx", "xxx"])
    with pytest.raises(ValueError):
        conj_witness(A, AL.parse("yy"), 0, TruncationParams(4))


# -- hyperbolicity -------------------------------------------------------------


def test_delta_four_point_zero_on_tree_samples():
    rng = random.Random(3)
    for trial in range(300):
        pts = [random_reduced_word(rng, AL, 8) for _ in range(4)]
        est = delta_four_point(pts, distance)
        assert est.delta == 0


def test_thin_triangle_defect_zero_on_tree_samples():
    rng = random.Random(4)
    for trial in range(300):
        a, b, c = (random_reduced_word(rng, AL, 8) for _ in range(3))
        assert thin_triangle_defect(a, b, c) == 0


def test_delta_four_point_positive_on_square():
    # four corners of a unit square under L1: delta = 1
    pts = [(0, 0), (0, 1), (1, 0), (1, 1)]

    def l1(p, q):
        return abs(p[0] - q[0]) + abs(p[1] - q[1])

    est = delta_four_point(pts, l1)
    assert est.delta == 1.0


def test_delta_validates_metric():
    with pytest.raises(ValueError):
        delta_four_point([0, 1, 2, 4], lambda p, q: (p - q) ** 2)  # triangle ineq fails
