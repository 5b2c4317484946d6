"""Slow, independent reimplementations used as ground truth in tests.

Everything here favours being obviously correct over being fast:
quadratic reduction by repeated scanning, distances by definition,
set predicates by exhaustive search over balls.  None of it imports
algorithmic code paths it is meant to verify beyond basic word types.
"""
from __future__ import annotations

import random
from itertools import product as iproduct

from hypset import Alphabet, Word


def naive_reduce(letters) -> Word:
    """Cancel adjacent inverse pairs by rescanning until stable."""
    out = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(out) - 1):
            if out[i] == -out[i + 1]:
                del out[i : i + 2]
                changed = True
                break
    return tuple(out)


def naive_product(*words) -> Word:
    cat: list[int] = []
    for w in words:
        cat.extend(w)
    return naive_reduce(cat)


def naive_inverse(w) -> Word:
    return tuple(-l for l in reversed(w))


def naive_distance(u, v) -> int:
    return len(naive_product(naive_inverse(u), v))


def all_words(al: Alphabet, max_len: int) -> list[Word]:
    """Every reduced word of length <= max_len, by brute-force filtering."""
    out: list[Word] = [()]
    for n in range(1, max_len + 1):
        for tup in iproduct(al.ranked_letters, repeat=n):
            if all(tup[i] != -tup[i + 1] for i in range(n - 1)):
                out.append(tup)
    return out


def naive_geodesic(u, v) -> list[Word]:
    """Vertices of [u, v]: walk u back to the common prefix, then out to v."""
    u, v = tuple(u), tuple(v)
    k = 0
    while k < len(u) and k < len(v) and u[k] == v[k]:
        k += 1
    path = [u[:j] for j in range(len(u), k - 1, -1)]
    path += [v[:j] for j in range(k + 1, len(v) + 1)]
    return path


def naive_nearest(w, members) -> tuple[int, Word]:
    """Min distance and a shortlex-least realizer, by full scan."""
    from hypset import shortlex_key

    best = None
    for m in members:
        d = naive_distance(w, m)
        key = (d, shortlex_key(m))
        if best is None or key < best[0]:
            best = (key, d, m)
    assert best is not None
    return best[1], best[2]


def naive_conjugate_test(u, v, al: Alphabet, radius: int) -> bool:
    """Search every conjugator in ball(radius)."""
    u, v = tuple(u), tuple(v)
    for g in all_words(al, radius):
        if naive_product(g, u, naive_inverse(g)) == v:
            return True
    return False


class ClosureTooLarge(Exception):
    """The naive closure exceeded its cap; the oracle declines to answer."""


def subgroup_members(generators, max_len: int, cap: int = 200000) -> set[Word]:
    """Closure of the generators under product, truncated to length <= max_len.

    Breadth-first over right multiplication by generators and inverses,
    allowing partial products longer than the window.  A fixed slack has
    no completeness guarantee, so the internal bound doubles until the
    window contents stop changing between rounds; mismatches from a
    still-too-small bound would surface as loud test failures, never as
    silent agreement.
    """
    gens = [tuple(g) for g in generators if g]
    step = gens + [naive_inverse(g) for g in gens]
    previous: set[Word] | None = None
    bound = max_len + 2 * max((len(g) for g in gens), default=1)
    while True:
        seen: set[Word] = {()}
        frontier: list[Word] = [()]
        while frontier:
            if len(seen) >= cap:
                raise ClosureTooLarge(f"bound {bound}: {len(seen)} words")
            nxt: list[Word] = []
            for w in frontier:
                for s in step:
                    p = naive_product(w, s)
                    if len(p) <= bound and p not in seen:
                        seen.add(p)
                        nxt.append(p)
            frontier = nxt
        window = {w for w in seen if w and len(w) <= max_len} | {()}
        if window == previous:
            return window
        previous = window
        bound += 2


def random_reduced_word(rng: random.Random, al: Alphabet, max_len: int) -> Word:
    n = rng.randint(0, max_len)
    letters: list[int] = []
    while len(letters) < n:
        choices = [l for l in al.ranked_letters if not letters or l != -letters[-1]]
        letters.append(rng.choice(choices))
    return tuple(letters)
