"""Rational sets of reduced words as canonical partial automata.

Languages here always consist of reduced words only.  Automata are kept
in a canonical form: trimmed (every state reachable and co-reachable),
minimized, and renumbered breadth-first with letters in ranked order, so
two automata recognize the same language exactly when they are equal.

A trimmed automaton over a reduced language can only trace reduced
words: a state reached by an unreduced prefix would put an unreduced
word in the language through any of its residuals.  That property makes
distance scans and census counts exact without extra bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .freewords import (
    Alphabet,
    Word,
    cyclic_reduce,
    distance,
    letter_rank,
    normalize,
    shortlex_key,
)
from .geometry import SetOracle
from .stallings import SubgroupGraph


class ReducedAutomaton:
    """Canonical minimal partial DFA over reduced words.

    The empty language has zero states; otherwise state 0 is the start.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        transitions: Sequence[dict[int, int]],
        accepting: Iterable[int],
    ):
        # assumes canonical input; use the constructors and operations below
        self.alphabet = alphabet
        self.transitions: tuple[dict[int, int], ...] = tuple(dict(t) for t in transitions)
        self.accepting: frozenset[int] = frozenset(accepting)
        self._ranked: tuple[tuple[tuple[int, int], ...], ...] = tuple(
            tuple(sorted(t.items(), key=lambda it: letter_rank(it[0])))
            for t in self.transitions
        )
        self._mu: list[int] | None = None
        self._infinite: frozenset[int] | None = None

    # -- canonical construction -----------------------------------------

    @classmethod
    def _build(
        cls,
        alphabet: Alphabet,
        n: int,
        start: int | None,
        trans: Sequence[dict[int, int]],
        accepting: Iterable[int],
    ) -> "ReducedAutomaton":
        """Trim, minimize and canonically renumber a partial DFA."""
        acc = set(accepting)
        if start is None or n == 0:
            return cls(alphabet, (), ())
        reach = {start}
        queue = [start]
        while queue:
            q = queue.pop()
            for t in trans[q].values():
                if t not in reach:
                    reach.add(t)
                    queue.append(t)
        back: dict[int, set[int]] = {q: set() for q in reach}
        for q in reach:
            for t in trans[q].values():
                if t in reach:
                    back[t].add(q)
        live = set(acc) & reach
        queue = list(live)
        while queue:
            q = queue.pop()
            for p in back[q]:
                if p not in live:
                    live.add(p)
                    queue.append(p)
        if start not in live:
            return cls(alphabet, (), ())
        states = sorted(live)
        index = {q: i for i, q in enumerate(states)}
        ptrans = [
            {l: index[t] for l, t in trans[q].items() if t in live} for q in states
        ]
        pacc = {index[q] for q in acc & live}
        pstart = index[start]
        m = len(states)

        # Moore refinement; a missing letter is the (implicit) dead state,
        # distinct from every live state because live residuals are nonempty.
        cls_of = [1 if q in pacc else 0 for q in range(m)]
        while True:
            sigs = {}
            new = [0] * m
            for q in range(m):
                sig = (
                    cls_of[q],
                    tuple(
                        sorted((l, cls_of[t]) for l, t in ptrans[q].items())
                    ),
                )
                if sig not in sigs:
                    sigs[sig] = len(sigs)
                new[q] = sigs[sig]
            if new == cls_of:
                break
            cls_of = new
        k = len(set(cls_of))
        qtrans: list[dict[int, int]] = [dict() for _ in range(k)]
        qacc = set()
        for q in range(m):
            c = cls_of[q]
            if q in pacc:
                qacc.add(c)
            for l, t in ptrans[q].items():
                qtrans[c][l] = cls_of[t]
        qstart = cls_of[pstart]

        order = {qstart: 0}
        bfs = [qstart]
        while bfs:
            q = bfs.pop(0)
            for l, t in sorted(qtrans[q].items(), key=lambda it: letter_rank(it[0])):
                if t not in order:
                    order[t] = len(order)
                    bfs.append(t)
        final: list[dict[int, int]] = [dict() for _ in range(len(order))]
        for q, i in order.items():
            for l, t in qtrans[q].items():
                final[i][l] = order[t]
        return cls(alphabet, final, {order[q] for q in qacc})

    @classmethod
    def empty(cls, alphabet: Alphabet) -> "ReducedAutomaton":
        return cls(alphabet, (), ())

    @classmethod
    def epsilon(cls, alphabet: Alphabet) -> "ReducedAutomaton":
        return cls._build(alphabet, 1, 0, [{}], {0})

    @classmethod
    def singleton(cls, alphabet: Alphabet, word: Word) -> "ReducedAutomaton":
        word = normalize(alphabet.check(tuple(word)))
        trans = [{word[i]: i + 1} for i in range(len(word))] + [{}]
        return cls._build(alphabet, len(word) + 1, 0, trans, {len(word)})

    @classmethod
    def from_words(cls, alphabet: Alphabet, words: Iterable[Word]) -> "ReducedAutomaton":
        """Finite language, built as a prefix tree."""
        trans: list[dict[int, int]] = [dict()]
        acc: set[int] = set()
        for w in words:
            w = normalize(alphabet.check(tuple(w)))
            q = 0
            for l in w:
                t = trans[q].get(l)
                if t is None:
                    t = len(trans)
                    trans.append(dict())
                    trans[q][l] = t
                q = t
            acc.add(q)
        return cls._build(alphabet, len(trans), 0, trans, acc)

    @classmethod
    def all_reduced(cls, alphabet: Alphabet) -> "ReducedAutomaton":
        """Every reduced word: states remember the last letter."""
        letters = alphabet.ranked_letters
        idx = {l: i + 1 for i, l in enumerate(letters)}
        n = len(letters) + 1
        trans: list[dict[int, int]] = [dict() for _ in range(n)]
        for l in letters:
            trans[0][l] = idx[l]
        for last in letters:
            for l in letters:
                if l != -last:
                    trans[idx[last]][l] = idx[l]
        return cls._build(alphabet, n, 0, trans, range(n))

    @classmethod
    def from_subgroup(cls, graph: SubgroupGraph) -> "ReducedAutomaton":
        """Membership language of a subgroup.

        The core graph traces unreduced words as well, so it is crossed
        with the reduced-word filter before canonicalization.
        """
        base = cls(
            graph.alphabet,
            [dict(graph._adj[v]) for v in range(graph.n_vertices)],
            {0},
        )
        return boolean("and", base, cls.all_reduced(graph.alphabet))

    @classmethod
    def star(cls, alphabet: Alphabet, word: Word) -> "ReducedAutomaton":
        """All non-negative powers of a word.

        With word = c a c^-1 (cyclically reduced a), the positive powers
        c a^n c^-1 are reduced as written; the zero-power path spells the
        unreduced c c^-1 and is dropped by the reduced filter, with the
        empty word restored by accepting the start state.
        """
        word = normalize(alphabet.check(tuple(word)))
        if not word:
            return cls.epsilon(alphabet)
        core, conj = cyclic_reduce(word)
        n = 0

        def fresh() -> int:
            nonlocal n
            n += 1
            return n - 1

        stem_in = [fresh() for _ in range(len(conj) + 1)]
        cycle = [fresh() for _ in range(len(core))]
        stem_out = [fresh() for _ in range(len(conj) + 1)]
        trans: list[dict[int, set[int]]] = [dict() for _ in range(n)]

        def add(u: int, l: int, v: int) -> None:
            trans[u].setdefault(l, set()).add(v)

        for i, l in enumerate(conj):
            add(stem_in[i], l, stem_in[i + 1])
        for i, l in enumerate(core):
            add(cycle[i], l, cycle[(i + 1) % len(core)])
        for i, l in enumerate(-l2 for l2 in reversed(conj)):
            add(stem_out[i], l, stem_out[i + 1])
        eps = {(stem_in[-1], cycle[0]), (cycle[0], stem_out[0])}
        accepting = {stem_out[-1], stem_in[0]}
        return _from_nfa(
            alphabet, n, {stem_in[0]}, eps, trans, accepting, reduced_filter=True
        )

    # -- structure ---------------------------------------------------------

    @property
    def n_states(self) -> int:
        return len(self.transitions)

    @property
    def is_empty(self) -> bool:
        return self.n_states == 0

    @property
    def key(self) -> tuple:
        return (
            self.alphabet.rank,
            tuple(tuple(sorted(t.items())) for t in self.transitions),
            tuple(sorted(self.accepting)),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ReducedAutomaton) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"ReducedAutomaton({self.n_states} states, {len(self.accepting)} accepting)"

    def accepts(self, word: Word) -> bool:
        if self.is_empty:
            return False
        q = 0
        for l in word:
            q2 = self.transitions[q].get(l)
            if q2 is None:
                return False
            q = q2
        return q in self.accepting

    def iter_words(self, max_len: int) -> Iterator[Word]:
        """Accepted words of length <= max_len, in depth-first order."""
        if self.is_empty or max_len < 0:
            return
        if 0 in self.accepting:
            yield ()
        word: list[int] = []
        iters = [iter(self._ranked[0])]
        states = [0]
        while iters:
            nxt = next(iters[-1], None)
            if nxt is None:
                iters.pop()
                if word:
                    word.pop()
                    states.pop()
                continue
            l, t = nxt
            word.append(l)
            states.append(t)
            if t in self.accepting:
                yield tuple(word)
            if len(word) < max_len:
                iters.append(iter(self._ranked[t]))
            else:
                word.pop()
                states.pop()

    def words(self, max_len: int) -> list[Word]:
        return sorted(self.iter_words(max_len), key=shortlex_key)

    def growth(self, max_len: int) -> tuple[int, ...]:
        """Number of accepted words of each length 0..max_len (exact)."""
        if self.is_empty:
            return tuple([0] * (max_len + 1))
        counts = []
        layer = {0: 1}
        for _ in range(max_len + 1):
            counts.append(sum(c for q, c in layer.items() if q in self.accepting))
            nxt: dict[int, int] = {}
            for q, c in layer.items():
                for t in self.transitions[q].values():
                    nxt[t] = nxt.get(t, 0) + c
            layer = nxt
        return tuple(counts)

    # -- infinite directions ------------------------------------------------

    def infinite_states(self) -> frozenset[int]:
        """States whose residual language is infinite: those from which an
        arbitrarily long path leaves, found by stripping dead ends."""
        if self._infinite is not None:
            return self._infinite
        alive = set(range(self.n_states))
        changed = True
        while changed:
            changed = False
            for q in sorted(alive):
                if not any(t in alive for t in self.transitions[q].values()):
                    alive.discard(q)
                    changed = True
        self._infinite = frozenset(alive)
        return self._infinite

    def limit_prefixes(self, depth: int) -> "LimitPrefixSet":
        """Length-``depth`` prefixes of infinite directions in the language.

        A cylinder meets the limit set exactly when its state has an
        infinite residual, so this census is exact.
        """
        inf = self.infinite_states()
        words: list[Word] = []
        if not self.is_empty:
            if depth == 0:
                if 0 in inf:
                    words.append(())
            else:
                stack: list[tuple[int, Word]] = [(0, ())]
                while stack:
                    q, w = stack.pop()
                    if len(w) == depth:
                        if q in inf:
                            words.append(w)
                        continue
                    for l, t in self._ranked[q]:
                        stack.append((t, w + (l,)))
        return LimitPrefixSet(
            depth=depth, words=tuple(sorted(words, key=shortlex_key)), exact=True
        )

    # -- metric hooks --------------------------------------------------------

    def _min_residual(self) -> list[int]:
        """Shortest accepted continuation from each state (trimmed: finite)."""
        if self._mu is None:
            mu = [-1] * self.n_states
            queue = [q for q in self.accepting]
            for q in queue:
                mu[q] = 0
            back: list[list[tuple[int, int]]] = [[] for _ in range(self.n_states)]
            for q, t in enumerate(self.transitions):
                for l, r in t.items():
                    back[r].append((q, l))
            i = 0
            while i < len(queue):
                q = queue[i]
                i += 1
                for p, _ in back[q]:
                    if mu[p] < 0:
                        mu[p] = mu[q] + 1
                        queue.append(p)
            assert all(m >= 0 for m in mu), "trimmed automata have no dead states"
            self._mu = mu
        return self._mu

    def _least_residual(self, q: int, forbidden: tuple[int, ...]) -> Word | None:
        """Lex-least shortest accepted continuation from q avoiding a
        forbidden first letter; None if every shortest one starts with it."""
        mu = self._min_residual()
        out: list[int] = []
        while mu[q] > 0:
            for l, t in self._ranked[q]:
                if not out and l in forbidden:
                    continue
                if mu[t] == mu[q] - 1:
                    out.append(l)
                    q = t
                    break
            else:
                return None
        return tuple(out)

    def nearest_word(self, word: Word) -> tuple[int, Word]:
        """Exact distance to the language with the shortlex-least witness.

        Same scan as the subgroup case: optimal language words split as a
        traced prefix of the query plus a shortest residual whose first
        letter does not extend the common prefix.  Residuals can never
        cancel into the prefix because trimmed traces are reduced.
        """
        if self.is_empty:
            raise ValueError("distance to the empty language is undefined")
        mu = self._min_residual()
        traced: list[tuple[int, int]] = []
        q = 0
        for t in range(len(word) + 1):
            traced.append((t, q))
            if t == len(word):
                break
            nxt = self.transitions[q].get(word[t])
            if nxt is None:
                break
            q = nxt
        dmin = min(len(word) - t + mu[q] for t, q in traced)
        best: tuple[tuple, Word] | None = None
        for t, q in traced:
            if len(word) - t + mu[q] != dmin:
                continue
            forbidden = (word[t],) if t < len(word) else ()
            suffix = self._least_residual(q, forbidden)
            if suffix is None:
                continue
            member = word[:t] + suffix
            assert distance(word, member) == dmin
            entry = (shortlex_key(member), member)
            if best is None or entry < best:
                best = entry
        assert best is not None
        return dmin, best[1]

    def oracle(self, descriptor: str = "rational set") -> SetOracle:
        return SetOracle(
            self.alphabet,
            self.accepts,
            self.iter_words,
            descriptor,
            nearest_fn=self.nearest_word,
        )

    # -- serialization ---------------------------------------------------

    def to_text(self) -> str:
        lines = [
            f"rank {self.alphabet.rank}",
            f"states {self.n_states}",
            "start 0" if self.n_states else "start -",
            "accepting " + (" ".join(str(q) for q in sorted(self.accepting)) or "-"),
        ]
        for q, t in enumerate(self.transitions):
            for l, r in sorted(t.items(), key=lambda it: letter_rank(it[0])):
                lines.append(f"{q}, {self.alphabet.format((l,))}, {r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ReducedAutomaton":
        rank = None
        n = None
        start: int | None = None
        accepting: set[int] = set()
        raw_edges: list[tuple[str, str, str]] = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("rank "):
                rank = int(line.split()[1])
            elif line.startswith("states "):
                n = int(line.split()[1])
            elif line.startswith("start "):
                tok = line.split()[1]
                start = None if tok == "-" else int(tok)
            elif line.startswith("accepting"):
                toks = line.split()[1:]
                accepting = set() if toks == ["-"] else {int(t) for t in toks}
            else:
                u, label, v = (part.strip() for part in line.split(","))
                raw_edges.append((u, label, v))
        if rank is None or n is None:
            raise ValueError("automaton text needs 'rank' and 'states' headers")
        alphabet = Alphabet(rank)
        trans: list[dict[int, int]] = [dict() for _ in range(n)]
        for u, label, v in raw_edges:
            (letter,) = alphabet.parse(label)
            trans[int(u)][letter] = int(v)
        return cls._build(alphabet, n, start, trans, accepting)


def boolean(op: str, a: ReducedAutomaton, b: ReducedAutomaton) -> ReducedAutomaton:
    """Set operation on languages: 'and', 'or', 'minus' or 'xor'.

    Runs on the completed product; the implicit dead state is pruned away
    again by canonicalization.
    """
    if a.alphabet != b.alphabet:
        raise ValueError("alphabet mismatch between automata")
    alphabet = a.alphabet
    letters = alphabet.ranked_letters

    def accept(qa: int | None, qb: int | None) -> bool:
        ina = qa is not None and qa in a.accepting
        inb = qb is not None and qb in b.accepting
        if op == "and":
            return ina and inb
        if op == "or":
            return ina or inb
        if op == "minus":
            return ina and not inb
        if op == "xor":
            return ina != inb
        raise ValueError(f"unknown boolean op {op!r}")

    sa = 0 if not a.is_empty else None
    sb = 0 if not b.is_empty else None
    if sa is None and sb is None:
        return ReducedAutomaton.empty(alphabet)
    start = (sa, sb)
    numbering = {start: 0}
    queue = [start]
    trans: list[dict[int, int]] = [dict()]
    acc = set()
    if accept(*start):
        acc.add(0)
    while queue:
        qa, qb = queue.pop(0)
        i = numbering[(qa, qb)]
        for l in letters:
            ta = a.transitions[qa].get(l) if qa is not None else None
            tb = b.transitions[qb].get(l) if qb is not None else None
            if ta is None and tb is None:
                continue
            pair = (ta, tb)
            if pair not in numbering:
                numbering[pair] = len(trans)
                trans.append(dict())
                if accept(ta, tb):
                    acc.add(numbering[pair])
                queue.append(pair)
            trans[i][l] = numbering[pair]
    return ReducedAutomaton._build(alphabet, len(trans), 0, trans, acc)


def complement(a: ReducedAutomaton) -> ReducedAutomaton:
    """All reduced words outside the language."""
    return boolean("minus", ReducedAutomaton.all_reduced(a.alphabet), a)


def _from_nfa(
    alphabet: Alphabet,
    n: int,
    starts: set[int],
    eps: set[tuple[int, int]],
    trans: list[dict[int, set[int]]],
    accepting: set[int],
    reduced_filter: bool,
) -> ReducedAutomaton:
    """Determinize an epsilon-NFA and canonicalize.

    With ``reduced_filter`` the result is intersected with the reduced
    filter, for NFAs whose raw language may contain unreduced words.
    """
    closure: list[set[int]] = [set([q]) for q in range(n)]
    changed = True
    while changed:
        changed = False
        for p, q in eps:
            for r in list(closure[q]):
                if r not in closure[p]:
                    closure[p].add(r)
                    changed = True

    def close(states: frozenset[int]) -> frozenset[int]:
        out: set[int] = set()
        for q in states:
            out |= closure[q]
        return frozenset(out)

    start = close(frozenset(starts))
    numbering = {start: 0}
    queue = [start]
    dtrans: list[dict[int, int]] = [dict()]
    dacc = set()
    if start & accepting:
        dacc.add(0)
    while queue:
        cur = queue.pop(0)
        i = numbering[cur]
        moves: dict[int, set[int]] = {}
        for q in cur:
            for l, ts in trans[q].items():
                moves.setdefault(l, set()).update(ts)
        for l, ts in moves.items():
            nxt = close(frozenset(ts))
            if nxt not in numbering:
                numbering[nxt] = len(dtrans)
                dtrans.append(dict())
                if nxt & accepting:
                    dacc.add(numbering[nxt])
                queue.append(nxt)
            dtrans[i][l] = numbering[nxt]
    out = ReducedAutomaton._build(alphabet, len(dtrans), 0, dtrans, dacc)
    if reduced_filter:
        out = boolean("and", out, ReducedAutomaton.all_reduced(alphabet))
    return out


def inverse_automaton(a: ReducedAutomaton) -> ReducedAutomaton:
    """Language of inverses: reverse every transition and negate its letter."""
    if a.is_empty:
        return a
    trans: list[dict[int, set[int]]] = [dict() for _ in range(a.n_states)]
    for q, t in enumerate(a.transitions):
        for l, r in t.items():
            trans[r].setdefault(-l, set()).add(q)
    return _from_nfa(
        a.alphabet,
        a.n_states,
        set(a.accepting),
        set(),
        trans,
        {0},
        reduced_filter=False,
    )


def reduced_product(a: ReducedAutomaton, b: ReducedAutomaton) -> ReducedAutomaton:
    """Language of reduced forms of concatenations u v, u in A, v in B.

    Concatenation followed by saturation: whenever a letter edge can reach,
    through cancellation-free gaps, a matching inverse edge, a silent jump
    is added; at the fixpoint the automaton accepts every reduced form,
    and a final crossing with the reduced filter discards the rest.
    """
    if a.alphabet != b.alphabet:
        raise ValueError("alphabet mismatch between automata")
    if a.is_empty or b.is_empty:
        return ReducedAutomaton.empty(a.alphabet)
    off = a.n_states
    n = off + b.n_states
    trans: list[dict[int, set[int]]] = [dict() for _ in range(n)]
    for q, t in enumerate(a.transitions):
        for l, r in t.items():
            trans[q].setdefault(l, set()).add(r)
    for q, t in enumerate(b.transitions):
        for l, r in t.items():
            trans[off + q].setdefault(l, set()).add(off + r)
    eps: set[tuple[int, int]] = {(q, off) for q in a.accepting}
    accepting = {off + q for q in b.accepting}

    incoming: dict[int, list[tuple[int, int]]] = {}
    for q in range(n):
        for l, ts in trans[q].items():
            for r in ts:
                incoming.setdefault(r, []).append((q, l))

    changed = True
    while changed:
        changed = False
        closure: list[set[int]] = [set([q]) for q in range(n)]
        grow = True
        while grow:
            grow = False
            for p, q in eps:
                add = closure[q] - closure[p]
                if add:
                    closure[p] |= add
                    grow = True
        for r in range(n):
            for p, l in incoming.get(r, ()):
                for q in closure[r]:
                    for s in trans[q].get(-l, ()):
                        if (p, s) not in eps and p != s:
                            eps.add((p, s))
                            changed = True
    return _from_nfa(a.alphabet, n, {0}, eps, trans, accepting, reduced_filter=True)


def translated(a: ReducedAutomaton, g: Word, side: str = "left") -> ReducedAutomaton:
    """The translate gA (left) or Ag (right)."""
    single = ReducedAutomaton.singleton(a.alphabet, g)
    if side == "left":
        return reduced_product(single, a)
    if side == "right":
        return reduced_product(a, single)
    raise ValueError("side must be 'left' or 'right'")


# -- limit sets and hulls ----------------------------------------------------


@dataclass(frozen=True)
class LimitPrefixSet:
    """Census of cylinder prefixes meeting a limit set at one depth."""

    depth: int
    words: tuple[Word, ...]
    exact: bool

    @property
    def count(self) -> int:
        return len(self.words)


def sampled_limit_prefixes(
    oracle: SetOracle, depth: int, radius: int, min_length: int | None = None
) -> LimitPrefixSet:
    """Truncated census for sets given only by an oracle.

    Takes depth-prefixes of members at least ``min_length`` long (default:
    the enumeration radius, so only members on the outermost sphere vote).
    Never exact: a long member need not continue to an infinite direction,
    and directions thinner than the window are missed.  Sets whose member
    lengths all share a parity need an explicit ``min_length`` one below
    the radius or the census can come out empty.
    """
    if min_length is None:
        min_length = max(depth, radius)
    seen = set()
    for m in oracle.members(radius):
        if len(m) >= min_length and len(m) >= depth:
            seen.add(m[:depth])
    return LimitPrefixSet(
        depth=depth, words=tuple(sorted(seen, key=shortlex_key)), exact=False
    )


@dataclass(frozen=True)
class LimitComparison:
    depth: int
    verdict: str  # "equal", "left-subset", "right-subset", "disjoint", "incomparable"
    left_count: int
    right_count: int
    common_count: int
    left_witness: Word | None
    right_witness: Word | None
    exact: bool


def limit_compare(left: LimitPrefixSet, right: LimitPrefixSet) -> LimitComparison:
    """Compare two limit censuses at the same depth."""
    if left.depth != right.depth:
        raise ValueError("censuses must share a depth to be compared")
    ls, rs = set(left.words), set(right.words)
    lonly = sorted(ls - rs, key=shortlex_key)
    ronly = sorted(rs - ls, key=shortlex_key)
    if not lonly and not ronly:
        verdict = "equal"
    elif not lonly:
        verdict = "left-subset"
    elif not ronly:
        verdict = "right-subset"
    elif not ls & rs:
        verdict = "disjoint"
    else:
        verdict = "incomparable"
    return LimitComparison(
        depth=left.depth,
        verdict=verdict,
        left_count=len(ls),
        right_count=len(rs),
        common_count=len(ls & rs),
        left_witness=lonly[0] if lonly else None,
        right_witness=ronly[0] if ronly else None,
        exact=left.exact and right.exact,
    )


@dataclass(frozen=True)
class HullSlice:
    """Ball slice of the union of lines joining limit points.

    A vertex of the ball lies on the line between two ends exactly when
    it extends their last common prefix along one of them, so the slice
    is determined by the census one level past the ball radius: for each
    census word, the prefixes from its shallowest fork outward.
    """

    radius: int
    words: tuple[Word, ...]
    exact: bool

    @property
    def count(self) -> int:
        return len(self.words)


def hull_slice(deeper: LimitPrefixSet, radius: int) -> HullSlice:
    """Vertices of ball(radius) lying on a line between limit directions.

    ``deeper`` must be the census at depth radius + 1.  Raises when the
    census has fewer than two directions, since no line exists then.
    """
    if deeper.depth != radius + 1:
        raise ValueError("hull slice at radius R needs the census at depth R + 1")
    if deeper.count < 2:
        raise ValueError("hull undefined: fewer than 2 limit directions")
    children: dict[Word, set[int]] = {}
    for p in deeper.words:
        for j in range(len(p)):
            children.setdefault(p[:j], set()).add(p[j])
    words: set[Word] = set()
    for p in deeper.words:
        fork = next(j for j in range(len(p)) if len(children[p[:j]]) >= 2)
        for j in range(fork, radius + 1):
            words.add(p[:j])
    return HullSlice(
        radius=radius,
        words=tuple(sorted(words, key=shortlex_key)),
        exact=deeper.exact,
    )


@dataclass(frozen=True)
class TameResult:
    """Outcome of checking members against a window of the hull."""

    nu: int
    radius: int
    hull_radius: int
    holds: bool
    worst_member: Word | None
    worst_distance: int
    certified: bool


def tame_check(
    members: Sequence[Word],
    hull_vertices: Iterable[Word],
    nu: int,
    radius: int,
    hull_radius: int,
) -> TameResult:
    """Is every member within nu of the hull window?

    ``certified`` records whether every computed distance is small enough
    that no hull vertex beyond the window could have been nearer.
    """
    from .geometry import WordTrie

    trie = WordTrie()
    count = 0
    for v in hull_vertices:
        trie.add(v)
        count += 1
    worst: tuple[int, tuple, Word] | None = None
    certified = True
    if count == 0:
        raise ValueError("hull undefined: no hull vertices supplied")
    for m in members:
        d, _ = trie.nearest(m)
        if d > (hull_radius + 1) - len(m):
            certified = False
        entry = (-d, shortlex_key(m), m)
        if worst is None or entry < worst:
            worst = entry
    if worst is None:
        return TameResult(nu, radius, hull_radius, True, None, 0, True)
    return TameResult(
        nu=nu,
        radius=radius,
        hull_radius=hull_radius,
        holds=-worst[0] <= nu,
        worst_member=worst[2],
        worst_distance=-worst[0],
        certified=certified,
    )
