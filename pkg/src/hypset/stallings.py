"""Folded core graphs for finitely generated subgroups of free groups.

A subgroup is represented by its folded core graph: a connected graph
with edges labelled by generators, deterministic and co-deterministic at
every vertex, in which every vertex except possibly the basepoint has
degree at least two.  Reduced words in the subgroup are exactly the
labels of reduced basepoint loops, which makes membership a linear walk
and turns intersections, conjugates, relative indices, double cosets and
commensurator scans into finite graph computations.

Graphs are canonicalized on construction (basepoint 0, vertices numbered
by breadth-first search in letter order), so equal subgroups always
produce identical objects and serialized forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .freewords import (
    Alphabet,
    Word,
    ball,
    distance,
    inverse,
    letter_rank,
    normalize,
    product,
    shortlex_key,
)
from .geometry import SetOracle


def _find(parent: list[int], v: int) -> int:
    root = v
    while parent[root] != root:
        root = parent[root]
    while parent[v] != root:
        parent[v], v = root, parent[v]
    return root


def _fold(
    n: int, edges: Iterable[tuple[int, int, int]], marks: Sequence[int]
) -> tuple[list[dict[int, int]], list[int]]:
    """Fold a labelled graph: merge same-label edges at every vertex.

    ``edges`` are (vertex, letter, vertex) with both orientations implied.
    Returns the folded adjacency (letter -> target, on representative
    vertices) and the images of the marked vertices.
    """
    parent = list(range(n))
    adj: list[dict[int, int]] = [dict() for _ in range(n)]
    pending: list[tuple[int, int, int]] = []
    for u, l, v in edges:
        pending.append((u, l, v))
        pending.append((v, -l, u))
    while pending:
        u, l, v = pending.pop()
        u, v = _find(parent, u), _find(parent, v)
        cur = adj[u].get(l)
        if cur is None:
            adj[u][l] = v
            continue
        cur = _find(parent, cur)
        adj[u][l] = cur
        if cur == v:
            continue
        keep, absorb = (cur, v) if len(adj[cur]) >= len(adj[v]) else (v, cur)
        parent[absorb] = keep
        for l2, t in adj[absorb].items():
            pending.append((keep, l2, t))
        adj[absorb] = {}
    result: list[dict[int, int]] = [dict() for _ in range(n)]
    for u in range(n):
        if _find(parent, u) != u:
            continue
        for l, t in adj[u].items():
            result[u][l] = _find(parent, t)
    return result, [_find(parent, m) for m in marks]


def _trim(adj: list[dict[int, int]], base: int) -> None:
    """Remove non-basepoint vertices of degree <= 1 until none remain."""
    queue = [v for v, nb in enumerate(adj) if v != base and nb and len(nb) <= 1]
    dead = set()
    while queue:
        v = queue.pop()
        if v in dead or len(adj[v]) > 1 or v == base:
            continue
        dead.add(v)
        for l, t in list(adj[v].items()):
            adj[v].clear()
            if t not in dead:
                del adj[t][-l]
                if t != base and len(adj[t]) <= 1:
                    queue.append(t)


class SubgroupGraph:
    """Folded core graph of a finitely generated subgroup, basepoint 0."""

    def __init__(self, alphabet: Alphabet, adj: Sequence[dict[int, int]]):
        # Assumes adj is already folded, trimmed and canonically numbered;
        # use the constructors below rather than this directly.
        self.alphabet = alphabet
        self._adj: tuple[dict[int, int], ...] = tuple(dict(a) for a in adj)
        self._ranked: tuple[tuple[tuple[int, int], ...], ...] = tuple(
            tuple(sorted(a.items(), key=lambda it: letter_rank(it[0]))) for a in self._adj
        )
        self._to_base: list[int] | None = None

    # -- construction ---------------------------------------------------

    @classmethod
    def from_generators(cls, alphabet: Alphabet, generators: Iterable[Word]) -> "SubgroupGraph":
        """Wedge of loops spelling the generators, folded and trimmed."""
        gens = [normalize(alphabet.check(tuple(g))) for g in generators]
        edges: list[tuple[int, int, int]] = []
        n = 1
        for g in gens:
            if not g:
                continue
            prev = 0
            for i, l in enumerate(g):
                nxt = 0 if i == len(g) - 1 else n
                if nxt:
                    n += 1
                edges.append((prev, l, nxt))
                prev = nxt
        adj, (base,) = _fold(n, edges, [0])
        _trim(adj, base)
        return cls._canonical(alphabet, adj, base)

    @classmethod
    def trivial(cls, alphabet: Alphabet) -> "SubgroupGraph":
        return cls(alphabet, [{}])

    @classmethod
    def _canonical(
        cls, alphabet: Alphabet, adj: Sequence[dict[int, int]], base: int
    ) -> "SubgroupGraph":
        """Renumber by BFS from the basepoint with letters in ranked order."""
        order = {base: 0}
        queue = [base]
        while queue:
            v = queue.pop(0)
            for l, t in sorted(adj[v].items(), key=lambda it: letter_rank(it[0])):
                if t not in order:
                    order[t] = len(order)
                    queue.append(t)
        out: list[dict[int, int]] = [dict() for _ in range(len(order))]
        for v, nb in enumerate(adj):
            if v not in order:
                continue
            for l, t in nb.items():
                out[order[v]][l] = order[t]
        return cls(alphabet, out)

    # -- basic structure -------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self._adj)

    @property
    def n_edges(self) -> int:
        return sum(len(a) for a in self._adj) // 2

    @property
    def graph_rank(self) -> int:
        """Free rank of the subgroup: cycle rank of the core graph."""
        return self.n_edges - self.n_vertices + 1

    @property
    def is_trivial(self) -> bool:
        return self.n_edges == 0

    @property
    def key(self) -> tuple:
        edges = []
        for v, nb in enumerate(self._adj):
            for l, t in nb.items():
                if l > 0:
                    edges.append((v, l, t))
        return (self.alphabet.rank, self.n_vertices, tuple(sorted(edges)))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SubgroupGraph) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"SubgroupGraph(rank {self.graph_rank}, {self.n_vertices} vertices)"

    def step(self, vertex: int, letter: int) -> int | None:
        return self._adj[vertex].get(letter)

    def trace(self, vertex: int, word: Word) -> int | None:
        for l in word:
            vertex = self._adj[vertex].get(l)
            if vertex is None:
                return None
        return vertex

    def contains(self, word: Word) -> bool:
        return self.trace(0, word) == 0

    def basis(self) -> tuple[Word, ...]:
        """A free basis: spanning-tree words through each surplus edge."""
        path: dict[int, Word] = {0: ()}
        tree: set[tuple[int, int, int]] = set()
        queue = [0]
        while queue:
            v = queue.pop(0)
            for l, t in self._ranked[v]:
                if t not in path:
                    path[t] = path[v] + (l,)
                    tree.add((v, l, t))
                    tree.add((t, -l, v))
                    queue.append(t)
        out = []
        for v, nb in enumerate(self._adj):
            for l, t in nb.items():
                if l < 0 or (v, l, t) in tree:
                    continue
                w = product(path[v], (l,), inverse(path[t]))
                out.append(min(w, inverse(w), key=shortlex_key))
        return tuple(sorted(set(out), key=shortlex_key))

    # -- membership-level geometry ----------------------------------------

    def _base_distances(self) -> list[int]:
        if self._to_base is None:
            dist = [-1] * self.n_vertices
            dist[0] = 0
            queue = [0]
            while queue:
                v = queue.pop(0)
                for _, t in self._ranked[v]:
                    if dist[t] < 0:
                        dist[t] = dist[v] + 1
                        queue.append(t)
            self._to_base = dist
        return self._to_base

    def _least_return(self, v: int, forbidden: tuple[int, ...]) -> Word | None:
        """Lex-least shortest path word from v to the basepoint whose first
        letter avoids ``forbidden``; None if every shortest path starts
        with a forbidden letter.  Greedy descent along the distance field."""
        lam = self._base_distances()
        out: list[int] = []
        while lam[v] > 0:
            for l, t in self._ranked[v]:
                if not out and l in forbidden:
                    continue
                if lam[t] == lam[v] - 1:
                    out.append(l)
                    v = t
                    break
            else:
                return None
        return tuple(out)

    def nearest_member(self, word: Word) -> tuple[int, Word]:
        """Exact distance from a word to the subgroup, with the shortlex-least
        witness member at that distance.

        Every member at minimal distance is a traced prefix of the word
        followed by a shortest return path to the basepoint whose first
        letter neither extends the common prefix nor cancels into it, so
        scanning traced prefixes and taking the least admissible return
        is exhaustive.
        """
        lam = self._base_distances()
        traced: list[tuple[int, int]] = []
        v = 0
        for t in range(len(word) + 1):
            traced.append((t, v))
            if t == len(word):
                break
            nxt = self._adj[v].get(word[t])
            if nxt is None:
                break
            v = nxt
        dmin = min(len(word) - t + lam[v] for t, v in traced)
        best: tuple[tuple, Word] | None = None
        for t, v in traced:
            if len(word) - t + lam[v] != dmin:
                continue
            forbidden = []
            if t < len(word):
                forbidden.append(word[t])
            if t > 0:
                forbidden.append(-word[t - 1])
            suffix = self._least_return(v, tuple(forbidden))
            if suffix is None:
                continue
            member = word[:t] + suffix
            assert distance(word, member) == dmin
            entry = (shortlex_key(member), member)
            if best is None or entry < best:
                best = entry
        assert best is not None, "some optimal prefix admits a return path"
        return dmin, best[1]

    def distance_to(self, word: Word) -> int:
        lam = self._base_distances()
        best = None
        v = 0
        for t in range(len(word) + 1):
            d = len(word) - t + lam[v]
            if best is None or d < best:
                best = d
            if t == len(word):
                break
            v2 = self._adj[v].get(word[t])
            if v2 is None:
                break
            v = v2
        assert best is not None
        return best

    def member_iter(self, radius: int) -> Iterator[Word]:
        """All members of length <= radius (reduced basepoint loops), DFS order."""
        if radius >= 0:
            yield ()
        if radius <= 0 or self.is_trivial:
            return
        word: list[int] = []
        verts = [0]
        iters = [iter(self._ranked[0])]
        while iters:
            nxt = next(iters[-1], None)
            if nxt is None:
                iters.pop()
                if word:
                    word.pop()
                    verts.pop()
                continue
            l, t = nxt
            if word and l == -word[-1]:
                continue
            word.append(l)
            verts.append(t)
            if t == 0:
                yield tuple(word)
            if len(word) < radius:
                iters.append(iter(self._ranked[t]))
            else:
                word.pop()
                verts.pop()

    def oracle(self, descriptor: str = "") -> SetOracle:
        if not descriptor:
            gens = " ".join(self.alphabet.format(w) for w in self.basis()) or "1"
            descriptor = f"subgroup <{gens}>"
        return SetOracle(
            self.alphabet,
            self.contains,
            self.member_iter,
            descriptor,
            nearest_fn=self.nearest_member,
        )

    # -- subgroup algebra --------------------------------------------------

    def index(self) -> tuple[int, "CosetTable"] | None:
        """Index in the ambient free group via the full-degree criterion.

        Finite exactly when every vertex carries all 2k letters; the graph
        is then the full Schreier graph and the index is the vertex count.
        """
        full = 2 * self.alphabet.rank
        if any(len(a) != full for a in self._adj):
            return None
        reps: list[Word] = [()] * self.n_vertices
        seen = [False] * self.n_vertices
        seen[0] = True
        queue = [0]
        while queue:
            v = queue.pop(0)
            for l, t in self._ranked[v]:
                if not seen[t]:
                    seen[t] = True
                    reps[t] = reps[v] + (l,)
                    queue.append(t)
        action = {
            l: tuple(self._adj[v][l] for v in range(self.n_vertices))
            for l in self.alphabet.ranked_letters
        }
        return self.n_vertices, CosetTable(representatives=tuple(reps), action=action)

    def intersect(self, other: "SubgroupGraph") -> "SubgroupGraph":
        """Pullback: the component of the basepoint pair in the product graph."""
        if self.alphabet != other.alphabet:
            raise ValueError("alphabet mismatch between subgroup graphs")
        start = (0, 0)
        numbering = {start: 0}
        queue = [start]
        adj: list[dict[int, int]] = [dict()]
        while queue:
            u, v = queue.pop(0)
            i = numbering[(u, v)]
            for l, t1 in self._adj[u].items():
                t2 = other._adj[v].get(l)
                if t2 is None:
                    continue
                pair = (t1, t2)
                if pair not in numbering:
                    numbering[pair] = len(adj)
                    adj.append({})
                    queue.append(pair)
                adj[i][l] = numbering[pair]
        _trim(adj, 0)
        return SubgroupGraph._canonical(self.alphabet, adj, 0)

    def conjugate(self, g: Word) -> "SubgroupGraph":
        """The graph of g H g^-1: a stem spelling g into the old basepoint."""
        g = tuple(g)
        if not g:
            return self
        edges: list[tuple[int, int, int]] = []
        for v, nb in enumerate(self._adj):
            for l, t in nb.items():
                if l > 0:
                    edges.append((v, l, t))
        n = self.n_vertices
        new_base = n
        prev = new_base
        n += 1
        for i, l in enumerate(g):
            nxt = 0 if i == len(g) - 1 else n
            if nxt:
                n += 1
            edges.append((prev, l, nxt))
            prev = nxt
        adj, (base,) = _fold(n, edges, [new_base])
        _trim(adj, base)
        return SubgroupGraph._canonical(self.alphabet, adj, base)

    def to_text(self) -> str:
        lines = [f"rank {self.alphabet.rank}", "basepoint 0"]
        for v, nb in enumerate(self._adj):
            for l, t in sorted(nb.items(), key=lambda it: letter_rank(it[0])):
                if l > 0:
                    lines.append(f"{v}, {self.alphabet.format((l,))}, {t}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SubgroupGraph":
        rank = None
        base = None
        edges: list[tuple[int, int, int]] = []
        max_v = 0
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("rank "):
                rank = int(line.split()[1])
            elif line.startswith("basepoint "):
                base = int(line.split()[1])
            else:
                u, label, v = (part.strip() for part in line.split(","))
                alphabet = Alphabet(rank if rank else 26)
                (letter,) = alphabet.parse(label)
                edges.append((int(u), letter, int(v)))
                max_v = max(max_v, int(u), int(v))
        if rank is None or base is None:
            raise ValueError("graph text needs 'rank' and 'basepoint' headers")
        alphabet = Alphabet(rank)
        adj: list[dict[int, int]] = [dict() for _ in range(max_v + 1)]
        for u, l, v in edges:
            if l in adj[u] or -l in adj[v]:
                raise ValueError("graph text is not folded")
            adj[u][l] = v
            adj[v][-l] = u
        return cls._canonical(alphabet, adj, base)


@dataclass(frozen=True)
class CosetTable:
    """Shortlex coset representatives and the right generator action."""

    representatives: tuple[Word, ...]
    action: dict[int, tuple[int, ...]]


def relative_index(sub: SubgroupGraph, over: SubgroupGraph) -> int | None:
    """Index |H : K| for K <= H, or None when infinite.

    The based graph morphism from K's core into H's exists exactly when
    K <= H (both graphs are deterministic and co-deterministic, so the
    image of a vertex does not depend on the path).  The index is finite
    exactly when that morphism is locally surjective, in which case the
    fiber cardinality over any vertex is the index.
    """
    if sub.alphabet != over.alphabet:
        raise ValueError("alphabet mismatch between subgroup graphs")
    phi = {0: 0}
    queue = [0]
    while queue:
        v = queue.pop(0)
        for l, t in sub._adj[v].items():
            img = over.step(phi[v], l)
            if img is None:
                raise ValueError("first graph does not describe a subgroup of the second")
            if t in phi:
                if phi[t] != img:
                    raise ValueError("first graph does not describe a subgroup of the second")
            else:
                phi[t] = img
                queue.append(t)
    for v in range(sub.n_vertices):
        if set(sub._adj[v]) != set(over._adj[phi[v]]):
            return None
    fibers = [0] * over.n_vertices
    for v in range(sub.n_vertices):
        fibers[phi[v]] += 1
    assert len(set(fibers)) == 1, "covering of a connected graph has constant fibers"
    return fibers[0]


def _core_edges(G: SubgroupGraph, offset: int) -> list[tuple[int, int, int]]:
    out = []
    for v, nb in enumerate(G._adj):
        for l, t in nb.items():
            if l > 0:
                out.append((offset + v, l, offset + t))
    return out


def _pointed_coset(
    core: SubgroupGraph, stem: Word, core_on_left: bool
) -> tuple[list[dict[int, int]], int, int]:
    """Folded two-pointed graph recognizing H.stem (left) or stem.K (right).

    Reduced words tracing src to dst are exactly the reduced forms of the
    coset's elements: excursions back across the stem or around the core
    telescope into the coset because one side is a subgroup and the other
    end is a single point.
    """
    edges = _core_edges(core, 0)
    n = core.n_vertices
    if stem:
        endpoint = n
        n += 1
        start, finish = (0, endpoint) if core_on_left else (endpoint, 0)
        prev = start
        for i, l in enumerate(stem):
            nxt = finish if i == len(stem) - 1 else n
            if nxt != finish:
                n += 1
            edges.append((prev, l, nxt))
            prev = nxt
        src, dst = (0, endpoint) if core_on_left else (endpoint, 0)
    else:
        src = dst = 0
    adj, (src, dst) = _fold(n, edges, [src, dst])
    return adj, src, dst


def _pointed_intersect(
    a: tuple[list[dict[int, int]], int, int], b: tuple[list[dict[int, int]], int, int]
) -> bool:
    """Do the two recognized cosets share an element?  Product reachability;
    a shortest product path cannot backtrack, so a reaching path gives a
    reduced common word."""
    adj1, s1, d1 = a
    adj2, s2, d2 = b
    seen = {(s1, s2)}
    queue = [(s1, s2)]
    while queue:
        u, v = queue.pop()
        if u == d1 and v == d2:
            return True
        for l, t1 in adj1[u].items():
            t2 = adj2[v].get(l)
            if t2 is not None and (t1, t2) not in seen:
                seen.add((t1, t2))
                queue.append((t1, t2))
    return False


class DoubleCosetClass:
    """Membership test for one double coset H g K.

    A word w lies in H g K exactly when the right coset H w meets the
    translated subgroup g K; both are recognized exactly by two-pointed
    folded graphs, and meeting is product-graph reachability.
    """

    def __init__(self, H: SubgroupGraph, K: SubgroupGraph, rep: Word):
        self.rep = tuple(rep)
        self.alphabet = H.alphabet
        self._H = H
        self._right = _pointed_coset(K, self.rep, core_on_left=False)

    def contains(self, word: Word) -> bool:
        return self._contains_pointed(_pointed_coset(self._H, tuple(word), True))

    def _contains_pointed(self, left: tuple[list[dict[int, int]], int, int]) -> bool:
        return _pointed_intersect(left, self._right)


def _least_trace(adj: list[dict[int, int]], src: int, dst: int) -> Word:
    """Shortlex-least reduced word tracing src to dst: greedy shortest path."""
    dist = {dst: 0}
    queue = [dst]
    while queue:
        v = queue.pop(0)
        for l, t in adj[v].items():
            if t not in dist:
                dist[t] = dist[v] + 1
                queue.append(t)
    if src not in dist:
        raise ValueError("marked vertices are disconnected")
    out: list[int] = []
    v = src
    while v != dst:
        for l, t in sorted(adj[v].items(), key=lambda it: letter_rank(it[0])):
            if dist.get(t, -1) == dist[v] - 1:
                out.append(l)
                v = t
                break
        else:
            raise AssertionError("no descent step on a shortest path")
    return tuple(out)


def double_cosets(
    H: SubgroupGraph, K: SubgroupGraph, radius: int
) -> list[DoubleCosetClass]:
    """Partition ball(radius) into H g K classes, shortlex representatives."""
    if H.alphabet != K.alphabet:
        raise ValueError("alphabet mismatch between subgroup graphs")
    classes: list[DoubleCosetClass] = []
    for g in ball(H.alphabet, radius):
        left = _pointed_coset(H, g, core_on_left=True)
        if any(c._contains_pointed(left) for c in classes):
            continue
        classes.append(DoubleCosetClass(H, K, g))
    return classes


def conjugates_into(word: Word, H: SubgroupGraph) -> bool:
    """Exact test for g w g^-1 in H for some g: the cyclic core of w must
    read a closed path at some vertex (rotations are covered automatically,
    since a rotation closing at one vertex closes the original elsewhere)."""
    from .freewords import cyclic_reduce

    core, _ = cyclic_reduce(tuple(word))
    return any(H.trace(v, core) == v for v in range(H.n_vertices))


def power_conjugates_into(word: Word, H: SubgroupGraph) -> int | None:
    """Least m >= 1 with w^m conjugate into H, or None if no power is.

    Reading the cyclic core of w is a partial injection on H's vertices;
    w^m conjugates into H exactly when that map has an m-periodic point,
    so the least m is the shortest cycle length, bounded by |V(H)|.
    """
    from .freewords import cyclic_reduce

    word = tuple(word)
    if not word:
        raise ValueError("the identity is in every subgroup; power test needs w != 1")
    core, _ = cyclic_reduce(word)
    step = [H.trace(v, core) for v in range(H.n_vertices)]
    best: int | None = None
    done = [False] * H.n_vertices
    for v0 in range(H.n_vertices):
        if done[v0]:
            continue
        seen: dict[int, int] = {}
        v: int | None = v0
        i = 0
        while v is not None and v not in seen:
            seen[v] = i
            done[v] = True
            v = step[v]
            i += 1
        if v is not None:
            cycle = i - seen[v]
            if best is None or cycle < best:
                best = cycle
    return best


@dataclass(frozen=True)
class CommensuratorScan:
    """Elements of ball(radius) passing the two-sided finite-index test.

    ``subgroup`` is generated by the accepted elements; ``closed`` records
    whether that subgroup, inside the same ball, contains no element
    beyond the accepted ones (evidence the scan has stabilized).
    """

    subgroup: SubgroupGraph
    accepted: tuple[Word, ...]
    radius: int
    closed: bool


def commensurator(H: SubgroupGraph, radius: int) -> CommensuratorScan:
    """Scan ball(radius) for g with |H : H n H^g| and |H^g : H n H^g| finite."""
    accepted: list[Word] = []
    for g in ball(H.alphabet, radius):
        Hg = H.conjugate(g)
        I = H.intersect(Hg)
        if relative_index(I, H) is None:
            continue
        if relative_index(I, Hg) is None:
            continue
        accepted.append(g)
    subgroup = SubgroupGraph.from_generators(H.alphabet, accepted)
    members = set(subgroup.member_iter(radius))
    closed = members == set(accepted)
    return CommensuratorScan(
        subgroup=subgroup, accepted=tuple(accepted), radius=radius, closed=closed
    )


@dataclass(frozen=True)
class WidthResult:
    """Largest found family of essentially distinct pairwise-entangled conjugates."""

    count: int
    conjugators: tuple[Word, ...]
    radius: int


def width_lower_bound(H: SubgroupGraph, radius: int) -> WidthResult:
    """Largest family of conjugates of H along distinct right cosets, with
    conjugators in ball(radius), in which every two members intersect in
    an infinite (equivalently nontrivial) subgroup.  Conjugation follows
    the coset: the member for H g is the subgroup fixing it on the right,
    g^-1 H g, so the family is well defined.  Intersections are decided
    exactly by a cycle search in the pairwise product graphs."""
    if H.is_trivial:
        return WidthResult(0, (), radius)
    reps: list[Word] = []
    graphs: list[SubgroupGraph] = []
    for g in ball(H.alphabet, radius):
        if any(H.contains(product(g, inverse(r))) for r in reps):
            continue
        reps.append(g)
        graphs.append(H.conjugate(inverse(g)))
    n = len(reps)
    neighbours = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if _product_nontrivial(graphs[i], graphs[j]):
                neighbours[i] |= 1 << j
                neighbours[j] |= 1 << i
    size, members = _max_clique(n, neighbours)
    return WidthResult(size, tuple(reps[i] for i in members), radius)


def _product_nontrivial(G1: SubgroupGraph, G2: SubgroupGraph) -> bool:
    """Does the basepoint component of the product graph contain a cycle?"""
    seen = {(0, 0)}
    queue = [(0, 0)]
    half_edges = 0
    while queue:
        u, v = queue.pop()
        for l, t1 in G1._adj[u].items():
            t2 = G2._adj[v].get(l)
            if t2 is None:
                continue
            half_edges += 1
            if (t1, t2) not in seen:
                seen.add((t1, t2))
                queue.append((t1, t2))
    return half_edges // 2 >= len(seen)


def _max_clique(n: int, neighbours: list[int]) -> tuple[int, tuple[int, ...]]:
    """Bron-Kerbosch with pivoting over bitset adjacency; deterministic."""
    best_size = 0
    best: tuple[int, ...] = ()
    full = (1 << n) - 1

    def bits(mask: int) -> Iterator[int]:
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def expand(r: int, p: int, x: int) -> None:
        nonlocal best_size, best
        if not p and not x:
            size = bin(r).count("1")
            if size > best_size:
                best_size = size
                best = tuple(sorted(bits(r)))
            return
        if bin(r | p).count("1") <= best_size:
            return
        pivot = next(bits(p | x))
        for v in bits(p & ~neighbours[pivot]):
            bit = 1 << v
            expand(r | bit, p & neighbours[v], x & neighbours[v])
            p &= ~bit
            x |= bit

    expand(0, full, 0)
    return best_size, best


def coset_representative(H: SubgroupGraph, g: Word) -> Word:
    """Shortlex-least element of the right coset H g (exact).

    The pointed coset graph recognizes exactly the reduced forms of H g,
    so the least element is the least shortest trace between its marks.
    """
    adj, src, dst = _pointed_coset(H, tuple(g), core_on_left=True)
    return _least_trace(adj, src, dst)
