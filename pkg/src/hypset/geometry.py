"""Radius-truncated coarse geometry of subsets of a free group.

Subsets enter through :class:`SetOracle` (membership plus bounded
enumeration, optionally an exact nearest-member hook) and every check is
run against a finite window: the set is examined inside ``ball(R)`` and
distances are measured against the set inside ``ball(R + slack)``.  On a
tree this truncation is exact whenever measured distances stay at most
``slack``, because any closer witness would already lie in the window.

All ties are broken shortlex, so repeated runs produce identical
witnesses.  Fractions are used where a check involves a rational
multiplicative constant; everything else is integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .freewords import (
    Alphabet,
    Word,
    ball,
    common_prefix_length,
    conjugacy_class,
    distance,
    geodesic,
    gromov_product,
    inverse,
    normalize,
    product,
    shortlex_key,
)


@dataclass(frozen=True)
class TruncationParams:
    """Window for a truncated check: scan radius and measurement slack."""

    radius: int
    slack: int = 4

    def __post_init__(self) -> None:
        if self.radius < 0 or self.slack < 0:
            raise ValueError("radius and slack must be non-negative")

    @property
    def window(self) -> int:
        return self.radius + self.slack


def default_slack(c: int = 0, epsilon: int = 0) -> int:
    """Slack covering boundary effects of a distance-c comparison."""
    return c + epsilon + 2


class SetOracle:
    """A subset of the free group seen through membership and enumeration.

    ``enumerate_fn(radius)`` must yield every member of length <= radius
    (each exactly once, any order).  ``nearest_fn``, when provided, returns
    the exact distance from a word to the whole set together with a member
    realizing it; subgroup graphs and automata supply this, and checks then
    report exact rather than window-truncated distances.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        contains_fn: Callable[[Word], bool],
        enumerate_fn: Callable[[int], Iterable[Word]],
        descriptor: str,
        nearest_fn: Callable[[Word], tuple[int, Word]] | None = None,
    ):
        self.alphabet = alphabet
        self._contains = contains_fn
        self._enumerate = enumerate_fn
        self.descriptor = descriptor
        self.nearest_fn = nearest_fn
        self._cache: dict[int, tuple[Word, ...]] = {}

    def __repr__(self) -> str:
        return f"SetOracle({self.descriptor})"

    def contains(self, word: Word) -> bool:
        return self._contains(word)

    def members(self, radius: int) -> tuple[Word, ...]:
        """Members of length <= radius, sorted shortlex, cached per radius."""
        if radius not in self._cache:
            out = sorted(self._enumerate(radius), key=shortlex_key)
            self._cache[radius] = tuple(out)
        return self._cache[radius]


def explicit_oracle(alphabet: Alphabet, words: Iterable[Word], descriptor: str = "") -> SetOracle:
    elems = frozenset(words)
    return SetOracle(
        alphabet,
        elems.__contains__,
        lambda radius: (w for w in elems if len(w) <= radius),
        descriptor or f"explicit set of {len(elems)} words",
    )


def predicate_oracle(
    alphabet: Alphabet, pred: Callable[[Word], bool], descriptor: str
) -> SetOracle:
    """Membership by predicate; enumeration scans the whole ball (slow path)."""
    return SetOracle(
        alphabet,
        pred,
        lambda radius: (w for w in ball(alphabet, radius) if pred(w)),
        descriptor,
    )


def conjugacy_oracle(alphabet: Alphabet, reps: Sequence[Word]) -> SetOracle:
    """Union of conjugacy classes; membership is the exact cyclic-core test."""
    from .freewords import conjugate_test

    reps = tuple(reps)

    def _contains(w: Word) -> bool:
        return any(conjugate_test(w, r) for r in reps)

    def _enumerate(radius: int) -> Iterator[Word]:
        seen: set[Word] = set()
        for r in reps:
            for w in conjugacy_class(alphabet, r, radius):
                if w not in seen:
                    seen.add(w)
                    yield w

    names = " ".join(alphabet.format(r) for r in reps)
    return SetOracle(alphabet, _contains, _enumerate, f"conjugacy classes of {names}")


def union_oracle(*oracles: SetOracle) -> SetOracle:
    alphabet = oracles[0].alphabet
    for o in oracles:
        if o.alphabet != alphabet:
            raise ValueError("alphabet mismatch between oracles")

    def _enumerate(radius: int) -> Iterator[Word]:
        seen: set[Word] = set()
        for o in oracles:
            for w in o.members(radius):
                if w not in seen:
                    seen.add(w)
                    yield w

    return SetOracle(
        alphabet,
        lambda w: any(o.contains(w) for o in oracles),
        _enumerate,
        " u ".join(o.descriptor for o in oracles),
    )


def left_translate_oracle(g: Word, oracle: SetOracle) -> SetOracle:
    """The set g * A.  Enumeration is exact: |g a| <= r implies |a| <= r + |g|."""
    g = tuple(g)
    ginv = inverse(g)

    def _enumerate(radius: int) -> Iterator[Word]:
        for a in oracle.members(radius + len(g)):
            w = product(g, a)
            if len(w) <= radius:
                yield w

    nearest = None
    if oracle.nearest_fn is not None:
        # d(w, gA) = d(g^-1 w, A), and the witness maps back through g.
        base = oracle.nearest_fn

        def nearest(w: Word) -> tuple[int, Word]:
            d, member = base(product(ginv, w))
            return d, product(g, member)

    return SetOracle(
        oracle.alphabet,
        lambda w: oracle.contains(product(ginv, w)),
        _enumerate,
        f"{oracle.alphabet.format(g)} * ({oracle.descriptor})",
        nearest_fn=nearest,
    )


def complement_oracle(oracle: SetOracle) -> SetOracle:
    """Membership by negation; enumeration scans the ball."""
    return SetOracle(
        oracle.alphabet,
        lambda w: not oracle.contains(w),
        lambda radius: (w for w in ball(oracle.alphabet, radius) if not oracle.contains(w)),
        f"complement of ({oracle.descriptor})",
    )


class WordTrie:
    """Prefix trie over reduced words supporting exact nearest-member queries.

    Each node stores the number of member words in its subtree and the
    best member below it, best meaning minimal (length, shortlex).  A
    nearest query walks the query word's path and combines, per shared
    prefix depth d, the cost (|w| - d) + (|m| - d); the minimum over d is
    the exact tree distance to the stored set.
    """

    def __init__(self, words: Iterable[Word] = ()):
        self._children: list[dict[int, int]] = [{}]
        self._count: list[int] = [0]
        self._best: list[Word | None] = [None]
        for w in words:
            self.add(w)

    def __len__(self) -> int:
        return self._count[0]

    def add(self, word: Word) -> None:
        key = shortlex_key(word)
        node = 0
        for letter in (None, *word):
            if letter is not None:
                nxt = self._children[node].get(letter)
                if nxt is None:
                    nxt = len(self._children)
                    self._children[node][letter] = nxt
                    self._children.append({})
                    self._count.append(0)
                    self._best.append(None)
                node = nxt
            self._count[node] += 1
            best = self._best[node]
            if best is None or key < shortlex_key(best):
                self._best[node] = word

    def nearest(self, word: Word) -> tuple[int, Word]:
        """Exact (distance, member); member is shortlex-least among closest."""
        if not self._count[0]:
            raise ValueError("nearest query against an empty set")
        candidates: list[tuple[int, tuple, Word]] = []
        node = 0
        depth = 0
        n = len(word)
        while True:
            best = self._best[node]
            if best is not None:
                cost = (n - depth) + (len(best) - depth)
                candidates.append((cost, shortlex_key(best), best))
            if depth == n:
                break
            nxt = self._children[node].get(word[depth])
            if nxt is None:
                break
            node = nxt
            depth += 1
        cost, _, member = min(candidates)
        return cost, member

    def distance(self, word: Word) -> int:
        return self.nearest(word)[0]

    def min_divergence(self, word: Word) -> int | None:
        """Least depth at which some stored member other than ``word`` branches off.

        Returns None when ``word`` is the only member (no geodesic leaves it).
        """
        node = 0
        for depth in range(len(word) + 1):
            here = self._count[node]
            if depth == len(word):
                below = 0
            else:
                child = self._children[node].get(word[depth])
                below = self._count[child] if child is not None else 0
            others = here - below - (1 if depth == len(word) else 0)
            if others > 0:
                return depth
            if depth == len(word) or below == 0:
                return None
            node = self._children[node][word[depth]]
        return None


def _distance_source(A: SetOracle, window: int) -> tuple[Callable[[Word], tuple[int, Word]], str]:
    """Exact nearest hook when the oracle has one, else a window trie."""
    if A.nearest_fn is not None:
        return A.nearest_fn, "exact"
    members = A.members(window)
    if not members:
        raise ValueError(f"degenerate set: {A.descriptor} has no member in ball({window})")
    trie = WordTrie(members)
    return trie.nearest, "window"


@dataclass(frozen=True)
class QcEstimate:
    """Measured quasiconvexity constant with the witness realizing it."""

    epsilon: int
    pair: tuple[Word, Word]
    point: Word
    params: TruncationParams
    method: str

    def __post_init__(self) -> None:
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")


def quasiconvexity_constant(A: SetOracle, params: TruncationParams) -> QcEstimate:
    """Exact max distance from geodesics between members in ball(R) to the set.

    Every vertex of a geodesic [a, b] in a tree is a prefix of a or of b, so
    the scan walks, for each member a, the prefixes from the first depth at
    which another member diverges; that covers every pair once from each
    side and avoids the quadratic pair loop.
    """
    members = A.members(params.radius)
    if len(members) < 2:
        raise ValueError(
            f"degenerate set: need two members in ball({params.radius}), found {len(members)}"
        )
    nearest, method = _distance_source(A, params.window)
    member_trie = WordTrie(members)
    best: tuple[int, Word, Word] | None = None  # (-epsilon, point, endpoint a)
    for a in members:
        m = member_trie.min_divergence(a)
        if m is None:
            continue
        for depth in range(m, len(a) + 1):
            point = a[:depth]
            d, _ = nearest(point)
            if best is None or d > -best[0]:
                best = (-d, point, a)
    assert best is not None
    eps, point, a = -best[0], best[1], best[2]
    partner = _divergent_partner(members, a, len(point))
    return QcEstimate(epsilon=eps, pair=(a, partner), point=point, params=params, method=method)


def _divergent_partner(members: Sequence[Word], a: Word, depth: int) -> Word:
    """Shortlex-least member b != a whose common prefix with a has length <= depth."""
    for b in members:
        if b != a and common_prefix_length(a, b) <= depth:
            return b
    raise AssertionError("divergence depth was computed from the same member set")


@dataclass(frozen=True)
class TruncatedDistance:
    """One-sided truncated Hausdorff estimate.

    ``within_slack`` is False when some scanned member sits farther than
    the slack from the other set's window, in which case the reported
    value is only a lower bound (the true nearest point may lie outside
    the window); callers treat that as an unbounded-distance flag.
    """

    value: int
    within_slack: bool
    witness: Word
    witness_partner: Word


@dataclass(frozen=True)
class HausdorffEstimate:
    value: int
    within_slack: bool
    forward: TruncatedDistance
    backward: TruncatedDistance
    params: TruncationParams
    method: str


def _directed_hausdorff(
    src: SetOracle, dst: SetOracle, params: TruncationParams
) -> tuple[TruncatedDistance, str]:
    members = src.members(params.radius)
    if not members:
        raise ValueError(f"degenerate set: {src.descriptor} empty in ball({params.radius})")
    nearest, method = _distance_source(dst, params.window)
    worst: tuple[int, tuple, Word, Word] | None = None
    for a in members:
        d, partner = nearest(a)
        entry = (-d, shortlex_key(a), a, partner)
        if worst is None or entry < worst:
            worst = entry
    assert worst is not None
    value = -worst[0]
    flagged = method == "window" and value > params.slack
    return TruncatedDistance(value, not flagged, worst[2], worst[3]), method


def hausdorff_truncated(A: SetOracle, B: SetOracle, params: TruncationParams) -> HausdorffEstimate:
    """Symmetric truncated Hausdorff distance between A and B."""
    fwd, m1 = _directed_hausdorff(A, B, params)
    bwd, m2 = _directed_hausdorff(B, A, params)
    return HausdorffEstimate(
        value=max(fwd.value, bwd.value),
        within_slack=fwd.within_slack and bwd.within_slack,
        forward=fwd,
        backward=bwd,
        params=params,
        method=m1 if m1 == m2 else "mixed",
    )


@dataclass(frozen=True)
class PreceqResult:
    """Verdict of B <= A at distance c, with covering translates or a witness.

    When the check holds, ``translates`` lists the distinct x = a^-1 b over
    scanned members b and their nearest members a, so B's window is covered
    by finitely many right translates A x_i with |x_i| <= c.  When it fails,
    ``witness`` is the shortlex-least member of B's window left uncovered.
    """

    holds: bool
    c: int
    params: TruncationParams
    method: str
    translates: tuple[Word, ...] = ()
    witness: Word | None = None
    witness_distance: int | None = None


def preceq_check(B: SetOracle, A: SetOracle, c: int, params: TruncationParams) -> PreceqResult:
    """Is B inside the closed c-neighbourhood of A, at this truncation?"""
    if c < 0:
        raise ValueError("c must be non-negative")
    members = B.members(params.radius)
    nearest, method = _distance_source(A, params.window)
    translates: set[Word] = set()
    for b in members:
        d, a = nearest(b)
        if d > c:
            return PreceqResult(
                holds=False,
                c=c,
                params=params,
                method=method,
                witness=b,
                witness_distance=d,
            )
        translates.add(product(inverse(a), b))
    return PreceqResult(
        holds=True,
        c=c,
        params=params,
        method=method,
        translates=tuple(sorted(translates, key=shortlex_key)),
    )


@dataclass(frozen=True)
class QuasidenseResult:
    holds: bool
    alpha: int
    params: TruncationParams
    method: str
    witness: Word | None = None
    witness_distance: int | None = None
    max_distance: int = 0


def quasidense_check(Q: SetOracle, alpha: int, params: TruncationParams) -> QuasidenseResult:
    """Is every point of ball(R) within alpha of Q's window?

    Scans the ball in shortlex order; the witness on failure is the first
    point found beyond alpha.
    """
    nearest, method = _distance_source(Q, params.window)
    max_d = 0
    for g in ball(Q.alphabet, params.radius):
        d, _ = nearest(g)
        if d > alpha:
            return QuasidenseResult(
                holds=False,
                alpha=alpha,
                params=params,
                method=method,
                witness=g,
                witness_distance=d,
                max_distance=d,
            )
        if d > max_d:
            max_d = d
    return QuasidenseResult(
        holds=True, alpha=alpha, params=params, method=method, max_distance=max_d
    )


@dataclass(frozen=True)
class QuasigeodesicResult:
    holds: bool
    lam: Fraction
    c: Fraction
    worst_margin: Fraction
    worst_span: tuple[int, int]


def quasigeodesic_check(path: Sequence[Word], lam, c) -> QuasigeodesicResult:
    """Check lam * |subpath| - c <= d(endpoints) for every subpath.

    ``path`` is a sequence of consecutive vertices (unit steps).  The worst
    margin d(v_i, v_j) - lam * (j - i) + c is reported; the check holds when
    it is non-negative everywhere.  Exact rational arithmetic throughout.
    """
    lam = Fraction(lam)
    c = Fraction(c)
    if not 0 < lam <= 1:
        raise ValueError("lambda must lie in (0, 1]")
    if c < 0:
        raise ValueError("c must be non-negative")
    verts = [tuple(v) for v in path]
    if not verts:
        raise ValueError("empty path")
    for i in range(1, len(verts)):
        if distance(verts[i - 1], verts[i]) != 1:
            raise ValueError(f"non-unit step in path at position {i}")
    worst = None
    span = (0, 0)
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            margin = distance(verts[i], verts[j]) - lam * (j - i) + c
            if worst is None or margin < worst:
                worst = margin
                span = (i, j)
    if worst is None:
        worst = c
    return QuasigeodesicResult(holds=worst >= 0, lam=lam, c=c, worst_margin=worst, worst_span=span)


@dataclass(frozen=True)
class BrokenLineResult:
    """Outcome of the broken-line criterion.

    Hypotheses: every segment longer than C1, every corner Gromov product
    at most C0, and C1 > 12 * C0 (the tree case of the general constraint).
    Conclusions checked: the whole line stays within 2 * C0 of the geodesic
    joining its endpoints, and that geodesic is at least half the line's
    total length.
    """

    hypotheses_ok: bool
    failures: tuple[str, ...]
    max_deviation: int | None
    endpoints_distance: int
    total_length: int
    conclusions_hold: bool | None


def broken_line_check(vertices: Sequence[Word], C0: int, C1: int) -> BrokenLineResult:
    verts = [tuple(v) for v in vertices]
    if len(verts) < 2:
        raise ValueError("a broken line needs at least two vertices")
    if C0 < 0:
        raise ValueError("C0 must be non-negative")
    failures: list[str] = []
    if C1 <= 12 * C0:
        failures.append(f"C1={C1} is not greater than 12*C0={12 * C0}")
    total = 0
    for i in range(1, len(verts)):
        seg = distance(verts[i - 1], verts[i])
        total += seg
        if seg <= C1:
            failures.append(f"segment {i} has length {seg} <= C1={C1}")
    for i in range(1, len(verts) - 1):
        corner = gromov_product(verts[i - 1], verts[i + 1], verts[i])
        if corner > C0:
            failures.append(f"corner {i} has Gromov product {corner} > C0={C0}")
    endpoints = distance(verts[0], verts[-1])
    if failures:
        return BrokenLineResult(False, tuple(failures), None, endpoints, total, None)
    # On a tree d(v, [a, b]) equals the Gromov product (a|b)_v exactly.
    deviation = 0
    for i in range(1, len(verts)):
        for v in geodesic(verts[i - 1], verts[i]):
            dev = gromov_product(verts[0], verts[-1], v)
            if dev > deviation:
                deviation = dev
    ok = deviation <= 2 * C0 and 2 * endpoints >= total
    return BrokenLineResult(True, (), deviation, endpoints, total, ok)


@dataclass(frozen=True)
class ConjugationWitness:
    """Short connector r with g = a r b^-1, a and b in the set.

    ``bound`` is 2 * epsilon + 2 * kappa (the tree form of the general
    4*delta + 2*epsilon + 2*kappa), kappa being the length of a shortest
    member.  ``shared`` lists the sample of common elements of A and
    g A g^-1 that discharged the infinite-intersection precondition.
    """

    r: Word
    a: Word
    b: Word
    bound: int
    kappa: int
    epsilon: int
    shared: tuple[Word, ...]

    @property
    def within_bound(self) -> bool:
        return len(self.r) <= self.bound


def conj_witness(
    A: SetOracle,
    g: Word,
    epsilon: int,
    params: TruncationParams,
    threshold: int = 3,
) -> ConjugationWitness:
    """Find the minimal-length r with g in A r A^-1 inside the window.

    Precondition (proxy for the intersection A n gAg^-1 being infinite):
    the window must contain at least ``threshold`` elements of length
    >= radius/2 lying in both A and gAg^-1.  The returned factorization
    g = a r b^-1 is re-verified by reduction.
    """
    members = A.members(params.window)
    if not members:
        raise ValueError(f"degenerate set: {A.descriptor} empty in window")
    ginv = inverse(g)
    member_set = frozenset(members)
    shared = [
        w
        for w in members
        if 2 * len(w) >= params.radius and product(ginv, w, g) in member_set
    ]
    if len(shared) < threshold:
        raise ValueError(
            f"intersection proxy failed: {len(shared)} shared elements of length"
            f" >= {params.radius}/2 in window, need {threshold}"
        )
    kappa = min(len(w) for w in members)
    trie = WordTrie(members)
    best: tuple[int, tuple, tuple, Word, Word] | None = None
    for b in members:
        # min_a |a^-1 g b| = d(g b, A) realizes the shortest connector for
        # this b, with the nearest scan choosing the least such a.
        d, a = trie.nearest(product(g, b))
        r = product(inverse(a), g, b)
        assert len(r) == d
        entry = (d, shortlex_key(b), shortlex_key(a), b, a)
        if best is None or entry < best:
            best = entry
    assert best is not None
    _, _, _, b, a = best
    r = product(inverse(a), g, b)
    if product(a, r, inverse(b)) != tuple(g):
        raise AssertionError("factorization failed to reassemble")
    return ConjugationWitness(
        r=r,
        a=a,
        b=b,
        bound=2 * epsilon + 2 * kappa,
        kappa=kappa,
        epsilon=epsilon,
        shared=tuple(sorted(shared, key=shortlex_key)[:threshold]),
    )


@dataclass(frozen=True)
class DeltaEstimate:
    delta: float
    witness: tuple | None


def delta_four_point(points: Sequence, dist: Callable[[object, object], float]) -> DeltaEstimate:
    """Least delta satisfying the four-point condition over all labelings.

    For every ordered choice of basepoint w and pair split {x,y|z} of each
    quadruple, the deficit min{(x|z)_w, (y|z)_w} - (x|y)_w must be at most
    delta.  ``dist`` supplies the metric; metric axioms are validated on
    the sample first.  Works on external (possibly non-integer) data; for
    words of this library with the word metric the result is exactly 0.
    """
    pts = list(points)
    if len(pts) < 4:
        raise ValueError("need at least four sample points")
    _validate_metric(pts, dist)

    def gp(x, y, w) -> float:
        return (dist(x, w) + dist(y, w) - dist(x, y)) / 2

    delta = 0
    witness = None
    from itertools import combinations

    for quad in combinations(range(len(pts)), 4):
        for wi in quad:
            rest = [i for i in quad if i != wi]
            for zi in rest:
                xi, yi = (i for i in rest if i != zi)
                w, x, y, z = pts[wi], pts[xi], pts[yi], pts[zi]
                deficit = min(gp(x, z, w), gp(y, z, w)) - gp(x, y, w)
                if deficit > delta:
                    delta = deficit
                    witness = (w, x, y, z)
    return DeltaEstimate(delta=delta, witness=witness)


def _validate_metric(pts: Sequence, dist: Callable) -> None:
    tol = 1e-9
    for i, p in enumerate(pts):
        if abs(dist(p, p)) > tol:
            raise ValueError(f"metric axiom violation: d(p,p) != 0 at sample {i}")
        for j in range(i + 1, len(pts)):
            q = pts[j]
            dpq, dqp = dist(p, q), dist(q, p)
            if abs(dpq - dqp) > tol:
                raise ValueError(f"metric axiom violation: asymmetry between samples {i},{j}")
            if dpq < -tol:
                raise ValueError(f"metric axiom violation: negative distance at {i},{j}")
    for i, p in enumerate(pts):
        for j, q in enumerate(pts):
            for k, r in enumerate(pts):
                if dist(p, q) > dist(p, r) + dist(r, q) + tol:
                    raise ValueError(
                        f"metric axiom violation: triangle inequality fails at {i},{j},{k}"
                    )


def thin_triangle_defect(a: Word, b: Word, c: Word) -> int:
    """Max distance between equidistant points on two sides of a triangle.

    For each corner, points on the two incident sides at equal distance
    t from the corner are compared for every t up to the corner's Gromov
    product.  On a tree the defect is always 0: the sides overlap up to
    the three special points.
    """
    defect = 0
    for corner, s1, s2 in ((a, b, c), (b, a, c), (c, a, b)):
        side1 = geodesic(corner, s1)
        side2 = geodesic(corner, s2)
        limit = gromov_product(s1, s2, corner)
        for t in range(min(limit, len(side1) - 1, len(side2) - 1) + 1):
            d = distance(side1[t], side2[t])
            if d > defect:
                defect = d
    return defect
