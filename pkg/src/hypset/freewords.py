"""Exact word arithmetic in free groups of finite rank.

Group elements are freely reduced words encoded as tuples of nonzero
ints: ``+i`` is the i-th generator (1-based), ``-i`` its inverse, and
the empty tuple is the identity.  Reduced tuples are canonical, so two
equal group elements always have identical encodings and words can be
used directly as dictionary keys.

The Cayley graph with respect to this basis is a tree.  Word length is
the graph metric, geodesics are unique, and every quantity defined here
(distances, Gromov products, cyclic cores) is computed by exact integer
combinatorics.  No floating point enters at this layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

Word = tuple[int, ...]

_RANK2_NAMES = "xy"
_GENERIC_NAMES = "abcdefghijklmnopqrstuvwxyz"


class ParseError(ValueError):
    """A word string contains a symbol outside the declared alphabet."""


@dataclass(frozen=True)
class Alphabet:
    """A free basis of ``rank`` generators with fixed letter names.

    Rank 1 and 2 use the letters ``x, y`` (matching the usual notation
    for small examples); higher ranks use ``a, b, c, ...``.  A lowercase
    letter is a generator, the corresponding uppercase letter is its
    inverse.  Letters are ordered generator-before-inverse, so shortlex
    order on words is: shorter first, then ``x < x^-1 < y < y^-1 < ...``.
    """

    rank: int

    def __post_init__(self) -> None:
        if not 1 <= self.rank <= 26:
            raise ValueError(f"rank must be between 1 and 26, got {self.rank}")

    @property
    def names(self) -> str:
        if self.rank <= 2:
            return _RANK2_NAMES[: self.rank]
        return _GENERIC_NAMES[: self.rank]

    @property
    def ranked_letters(self) -> tuple[int, ...]:
        """All 2*rank letters in shortlex letter order: +1, -1, +2, -2, ..."""
        out = []
        for i in range(1, self.rank + 1):
            out.append(i)
            out.append(-i)
        return tuple(out)

    def parse(self, text: str) -> Word:
        """Parse a word string, reducing it.  ``1`` or ``""`` is the identity."""
        text = text.strip()
        if text in ("", "1"):
            return ()
        letters = []
        for ch in text:
            low = ch.lower()
            idx = self.names.find(low)
            if idx < 0:
                raise ParseError(
                    f"unknown symbol {ch!r} (alphabet of rank {self.rank} uses {self.names!r})"
                )
            letters.append(idx + 1 if ch.islower() else -(idx + 1))
        return normalize(letters)

    def format(self, word: Iterable[int]) -> str:
        """Render a word; the identity prints as ``1``."""
        word = tuple(word)
        if not word:
            return "1"
        chars = []
        for l in word:
            name = self.names[abs(l) - 1]
            chars.append(name if l > 0 else name.upper())
        return "".join(chars)

    def check(self, word: Word) -> Word:
        """Validate that every letter of ``word`` lies in this alphabet."""
        for l in word:
            if l == 0 or abs(l) > self.rank:
                raise ParseError(f"letter {l} outside alphabet of rank {self.rank}")
        return word


def letter_rank(letter: int) -> int:
    """Position of a letter in shortlex letter order (generator first)."""
    return 2 * (abs(letter) - 1) + (0 if letter > 0 else 1)


def shortlex_key(word: Word) -> tuple:
    """Sort key realizing shortlex order on reduced words."""
    return (len(word), tuple(letter_rank(l) for l in word))


def normalize(letters: Iterable[int]) -> Word:
    """Freely reduce a letter sequence (stack cancellation)."""
    out: list[int] = []
    for l in letters:
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def inverse(word: Word) -> Word:
    return tuple(-l for l in reversed(word))


def product(*words: Word) -> Word:
    """Reduced product of already-reduced words."""
    out: list[int] = []
    for w in words:
        for l in w:
            if out and out[-1] == -l:
                out.pop()
            else:
                out.append(l)
    return tuple(out)


def power(word: Word, n: int) -> Word:
    if n < 0:
        return power(inverse(word), -n)
    out: Word = ()
    for _ in range(n):
        out = product(out, word)
    return out


def conjugated(word: Word, by: Word) -> Word:
    """Reduced form of ``by * word * by^-1``."""
    return product(by, word, inverse(by))


def common_prefix_length(u: Word, v: Word) -> int:
    n = min(len(u), len(v))
    for i in range(n):
        if u[i] != v[i]:
            return i
    return n


def distance(u: Word, v: Word) -> int:
    """Word metric d(u, v) = |u^-1 v|; on a tree this is the path length."""
    t = common_prefix_length(u, v)
    return (len(u) - t) + (len(v) - t)


def gromov_product(x: Word, y: Word, w: Word = ()) -> int:
    """(x|y)_w = (d(x,w) + d(y,w) - d(x,y)) / 2.

    At vertices of the tree the value is always a whole number: by left
    invariance it equals the common prefix length of w^-1 x and w^-1 y.
    """
    num = distance(x, w) + distance(y, w) - distance(x, y)
    assert num % 2 == 0 and num >= 0
    return num // 2


def geodesic(u: Word, v: Word) -> list[Word]:
    """The vertex sequence of the unique geodesic from u to v."""
    t = common_prefix_length(u, v)
    path = [u[:i] for i in range(len(u), t, -1)]
    path.extend(v[:i] for i in range(t, len(v) + 1))
    return path


def sphere(alphabet: Alphabet, length: int) -> Iterator[Word]:
    """All reduced words of exactly this length, in lexicographic order."""
    if length < 0:
        return
    if length == 0:
        yield ()
        return
    order = alphabet.ranked_letters
    word: list[int] = []
    stack = [iter(order)]
    while stack:
        l = next(stack[-1], None)
        if l is None:
            stack.pop()
            if word:
                word.pop()
            continue
        if word and l == -word[-1]:
            continue
        word.append(l)
        if len(word) == length:
            yield tuple(word)
            word.pop()
        else:
            stack.append(iter(order))


def ball(alphabet: Alphabet, radius: int) -> Iterator[Word]:
    """All reduced words of length <= radius, streamed in shortlex order."""
    for m in range(radius + 1):
        yield from sphere(alphabet, m)


def ball_size(alphabet: Alphabet, radius: int) -> int:
    """|B(radius)| = 1 + 2k * ((2k-1)^radius - 1) / (2k - 2) for rank k >= 2."""
    k2 = 2 * alphabet.rank
    if radius < 0:
        return 0
    if k2 == 2:
        return 2 * radius + 1
    return 1 + k2 * ((k2 - 1) ** radius - 1) // (k2 - 2)


def cyclic_reduce(word: Word) -> tuple[Word, Word]:
    """Split ``word = conj * core * conj^-1`` with ``core`` cyclically reduced.

    Returns ``(core, conj)``.  A word is cyclically reduced when its first
    letter is not the inverse of its last.
    """
    lo, hi = 0, len(word)
    while hi - lo >= 2 and word[lo] == -word[hi - 1]:
        lo += 1
        hi -= 1
    return word[lo:hi], word[:lo]


def is_cyclically_reduced(word: Word) -> bool:
    return len(word) < 2 or word[0] != -word[-1]


def rotations(core: Word) -> list[Word]:
    """Distinct cyclic rotations of a cyclically reduced word, sorted shortlex."""
    seen = {core[i:] + core[:i] for i in range(max(len(core), 1))}
    return sorted(seen, key=shortlex_key)


def conjugate_test(u: Word, v: Word) -> bool:
    """Exact conjugacy test: cyclic cores must be rotations of one another."""
    cu, _ = cyclic_reduce(u)
    cv, _ = cyclic_reduce(v)
    if len(cu) != len(cv):
        return False
    if not cu:
        return True
    return cv in {cu[i:] + cu[:i] for i in range(len(cu))}


@dataclass(frozen=True)
class ElementaryData:
    """Primitive-root decomposition of a nontrivial element.

    ``element = root ** exponent`` with ``root`` not a proper power, and
    ``root = conjugator * core * conjugator^-1`` with ``core`` cyclically
    reduced.  The maximal virtually cyclic subgroup containing the element
    is <root>.
    """

    root: Word
    exponent: int
    conjugator: Word
    core: Word

    def reassemble(self) -> Word:
        return product(self.conjugator, power(self.core, self.exponent), inverse(self.conjugator))


def primitive_root(word: Word) -> ElementaryData:
    """Smallest root: the unique r with word = r^n, n >= 1, r not a proper power."""
    if not word:
        raise ValueError("the identity has no primitive root")
    core, conj = cyclic_reduce(word)
    n = len(core)
    for p in range(1, n + 1):
        if n % p:
            continue
        block = core[:p]
        if block * (n // p) == core:
            root = product(conj, block, inverse(conj))
            return ElementaryData(root=root, exponent=n // p, conjugator=conj, core=block)
    raise AssertionError("unreachable: every word is a power of itself")


def conjugacy_class(alphabet: Alphabet, rep: Word, radius: int) -> Iterator[Word]:
    """All elements of the conjugacy class of ``rep`` with length <= radius.

    Every conjugate has the reduced form u c u^-1 where c is a rotation of
    the cyclic core of ``rep`` and the junctions do not cancel, so the class
    is enumerated exactly by wrapping letters around each distinct rotation.
    Each element is produced once; order is not sorted.
    """
    core, _ = cyclic_reduce(rep)
    if not core:
        if radius >= 0:
            yield ()
        return
    if len(core) > radius:
        return
    letters = alphabet.ranked_letters
    stack: list[Word] = list(rotations(core))
    yield from stack
    while stack:
        w = stack.pop()
        if len(w) + 2 > radius:
            continue
        first, last = w[0], w[-1]
        for a in letters:
            if a == -first or a == last:
                continue
            nxt = (a,) + w + (-a,)
            yield nxt
            stack.append(nxt)
