"""Command line front end.

Subcommands map onto the library layers: ``word`` for free-group
arithmetic, ``subgroup`` for folded subgroup graphs, ``set`` for
rational sets given as expressions, ``limit`` for limit-prefix censuses
and hulls, ``check`` for the coarse-geometry predicates, and ``audit``
to run a scenario file end to end.

Output is line-oriented ``key: value`` text on stdout.  Timing goes to
stderr so reports stay byte-identical run to run.  Exit codes: 0 for
success / a holding predicate / a verified audit, 2 for a refuted
predicate or audit, 3 for an inconclusive audit, 1 for usage and input
errors.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
import time
from typing import Sequence

from ..freewords import (
    Alphabet,
    ParseError,
    Word,
    conjugate_test,
    distance,
    gromov_product,
    inverse,
    normalize,
    primitive_root,
    product,
)
from ..geometry import (
    TruncationParams,
    conj_witness,
    delta_four_point,
    hausdorff_truncated,
    preceq_check,
    quasiconvexity_constant,
    quasidense_check,
    thin_triangle_defect,
)
from ..ratsets import ReducedAutomaton, hull_slice, limit_compare
from ..stallings import SubgroupGraph, relative_index
from .figures import render_figures
from .report import EXIT_CODES, SelfCheckError
from .audits import run_scenario
from .scenario import ScenarioError, build_expression, load_scenario

__all__ = ["main"]


class CLIError(Exception):
    """Usage or input error; the message goes to stderr, exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors, which collides with
    # the refuted exit code; route errors through CLIError instead.
    def error(self, message: str):  # type: ignore[override]
        raise CLIError(f"{self.prog}: {message}")


def _alphabet(args: argparse.Namespace) -> Alphabet:
    try:
        return Alphabet(args.rank)
    except ValueError as e:
        raise CLIError(str(e))


def _word(al: Alphabet, text: str) -> Word:
    try:
        return al.parse(text)
    except ParseError as e:
        raise CLIError(str(e))


def _expr(al: Alphabet, text: str, name: str) -> ReducedAutomaton:
    try:
        aut, _ = build_expression(al, text, 0, name)
    except ScenarioError as e:
        msg = str(e)
        prefix = "line 0: "
        if msg.startswith(prefix):
            msg = msg[len(prefix):]
        raise CLIError(msg)
    return aut


def _generators(al: Alphabet, text: str) -> list[Word]:
    gens = [_word(al, t) for t in text.split()]
    if not gens:
        raise CLIError("empty generator list")
    return [g for g in gens if g]


def _emit(key: str, value) -> None:
    if isinstance(value, bool):
        value = "yes" if value else "no"
    print(f"{key}: {value}")


# ---------------------------------------------------------------- word


def _cmd_word(args: argparse.Namespace) -> int:
    al = _alphabet(args)
    op = args.op
    words = [_word(al, t) for t in args.words]

    def need(n: int) -> None:
        if len(words) != n:
            raise CLIError(f"word {op} takes exactly {n} word argument(s)")

    if op == "reduce":
        need(1)
        _emit("word", al.format(words[0]))
        _emit("length", len(words[0]))
    elif op == "product":
        if not words:
            raise CLIError("word product needs at least one word")
        w = product(*words)
        _emit("word", al.format(w))
        _emit("length", len(w))
    elif op == "inverse":
        need(1)
        _emit("word", al.format(inverse(words[0])))
    elif op == "distance":
        need(2)
        _emit("distance", distance(words[0], words[1]))
    elif op == "gromov":
        need(2)
        at = _word(al, args.at) if args.at else ()
        _emit("gromov-product", gromov_product(words[0], words[1], at))
    elif op == "conjugate":
        need(2)
        ok = conjugate_test(words[0], words[1])
        _emit("conjugate", ok)
        if words[0]:
            data = primitive_root(words[0])
            _emit("root", al.format(data.root))
            _emit("exponent", data.exponent)
    else:  # pragma: no cover - argparse restricts choices
        raise CLIError(f"unknown word operation {op!r}")
    return 0


# ------------------------------------------------------------ subgroup


def _cmd_subgroup(args: argparse.Namespace) -> int:
    al = _alphabet(args)
    H = SubgroupGraph.from_generators(al, _generators(al, args.generators))
    _emit("vertices", H.n_vertices)
    _emit("edges", H.n_edges)
    _emit("rank", H.graph_rank)
    _emit("basis", " ".join(al.format(b) for b in H.basis()) or "-")
    idx = H.index()
    _emit("index", idx[0] if idx is not None else "infinite")
    if args.contains is not None:
        _emit("contains", H.contains(_word(al, args.contains)))
    if args.nearest is not None:
        d, m = H.nearest_member(_word(al, args.nearest))
        _emit("distance", d)
        _emit("nearest", al.format(m))
    if args.intersect is not None:
        K = SubgroupGraph.from_generators(al, _generators(al, args.intersect))
        M = H.intersect(K)
        _emit("intersection-basis", " ".join(al.format(b) for b in M.basis()) or "-")
        ri = relative_index(M, H)
        _emit("intersection-index", ri if ri is not None else "infinite")
    if args.conjugate is not None:
        C = H.conjugate(_word(al, args.conjugate))
        _emit("conjugate-basis", " ".join(al.format(b) for b in C.basis()) or "-")
    if args.graph:
        sys.stdout.write(H.to_text())
    return 0


# ----------------------------------------------------------------- set


def _cmd_set(args: argparse.Namespace) -> int:
    al = _alphabet(args)
    A = _expr(al, args.expression, "A")
    _emit("states", A.n_states)
    _emit("empty", A.is_empty)
    if args.contains is not None:
        _emit("contains", A.accepts(_word(al, args.contains)))
    if args.nearest is not None:
        d, m = A.nearest_word(_word(al, args.nearest))
        _emit("distance", d)
        _emit("nearest", al.format(m))
    if args.words is not None:
        ws = A.words(args.words)
        _emit(f"words({args.words})", " ".join(al.format(w) for w in ws) or "-")
    if args.growth is not None:
        _emit("growth", " ".join(str(c) for c in A.growth(args.growth)))
    if args.graph:
        sys.stdout.write(A.to_text())
    return 0


# --------------------------------------------------------------- limit


def _cmd_limit(args: argparse.Namespace) -> int:
    al = _alphabet(args)
    A = _expr(al, args.expression, "A")
    census = A.limit_prefixes(args.depth)
    _emit("depth", census.depth)
    _emit("count", census.count)
    _emit("exact", census.exact)
    _emit("census", " ".join(al.format(w) for w in census.words) or "-")
    if args.hull is not None:
        try:
            slice_ = hull_slice(A.limit_prefixes(args.hull + 1), args.hull)
        except ValueError as e:
            raise CLIError(str(e))
        _emit("hull-radius", slice_.radius)
        _emit("hull-count", slice_.count)
        _emit("hull", " ".join(al.format(w) for w in slice_.words))
    if args.compare is not None:
        B = _expr(al, args.compare, "B")
        cmp_ = limit_compare(census, B.limit_prefixes(args.depth))
        _emit("verdict", cmp_.verdict)
        _emit("common", cmp_.common_count)
        if cmp_.left_witness is not None:
            _emit("left-witness", al.format(cmp_.left_witness))
        if cmp_.right_witness is not None:
            _emit("right-witness", al.format(cmp_.right_witness))
    return 0


# --------------------------------------------------------------- check


def _random_word(rng: random.Random, al: Alphabet, max_len: int) -> Word:
    n = rng.randint(0, max_len)
    letters: list[int] = []
    while len(letters) < n:
        options = [l for l in al.ranked_letters if not letters or l != -letters[-1]]
        letters.append(rng.choice(options))
    return normalize(letters)


def _cmd_check(args: argparse.Namespace) -> int:
    al = _alphabet(args)
    op = args.op
    if op == "preceq":
        params = TruncationParams(args.R, args.slack)
        res = preceq_check(
            _expr(al, args.B, "B").oracle("B"),
            _expr(al, args.A, "A").oracle("A"),
            args.c,
            params,
        )
        _emit("preceq", "holds" if res.holds else "fails")
        _emit("c", args.c)
        _emit("radius", args.R)
        if not res.holds:
            assert res.witness is not None
            _emit("witness", al.format(res.witness))
            _emit("witness-distance", res.witness_distance)
        return 0 if res.holds else 2
    if op == "qc":
        est = quasiconvexity_constant(
            _expr(al, args.A, "A").oracle("A"), TruncationParams(args.R, args.slack)
        )
        _emit("epsilon", est.epsilon)
        _emit("point", al.format(est.point))
        _emit("pair", f"{al.format(est.pair[0])} {al.format(est.pair[1])}")
        _emit("method", est.method)
        return 0
    if op == "quasidense":
        res = quasidense_check(
            _expr(al, args.A, "A").oracle("A"),
            args.alpha,
            TruncationParams(args.R, args.slack),
        )
        _emit("quasidense", "holds" if res.holds else "fails")
        _emit("alpha", args.alpha)
        _emit("max-distance", res.max_distance)
        if res.witness is not None:
            _emit("witness", al.format(res.witness))
        return 0 if res.holds else 2
    if op == "hausdorff":
        est = hausdorff_truncated(
            _expr(al, args.A, "A").oracle("A"),
            _expr(al, args.B, "B").oracle("B"),
            TruncationParams(args.R, args.slack),
        )
        _emit("hausdorff", est.value)
        _emit("within-slack", est.within_slack)
        _emit("a-to-b", est.forward.value)
        _emit("b-to-a", est.backward.value)
        return 0
    if op == "conj":
        A = _expr(al, args.A, "A").oracle("A")
        params = TruncationParams(args.R, args.slack)
        epsilon = args.epsilon
        if epsilon is None:
            epsilon = quasiconvexity_constant(A, params).epsilon
        try:
            wit = conj_witness(A, _word(al, args.g), epsilon, params)
        except ValueError as e:
            raise CLIError(str(e))
        _emit("r", al.format(wit.r))
        _emit("a", al.format(wit.a))
        _emit("b", al.format(wit.b))
        _emit("epsilon", wit.epsilon)
        _emit("kappa", wit.kappa)
        _emit("bound", wit.bound)
        ok = len(wit.r) <= wit.bound
        _emit("within-bound", ok)
        return 0 if ok else 2
    if op == "delta":
        rng = random.Random(args.seed)
        worst = 0
        for _ in range(args.samples):
            pts = [_random_word(rng, al, args.R) for _ in range(4)]
            worst = max(worst, delta_four_point(pts, distance).delta)
        _emit("delta", worst)
        _emit("samples", args.samples)
        return 0 if worst == 0 else 2
    if op == "thin":
        rng = random.Random(args.seed)
        worst = 0
        for _ in range(args.samples):
            a, b, c = (_random_word(rng, al, args.R) for _ in range(3))
            worst = max(worst, thin_triangle_defect(a, b, c))
        _emit("thin-defect", worst)
        _emit("samples", args.samples)
        return 0 if worst == 0 else 2
    raise CLIError(f"unknown check {op!r}")  # pragma: no cover


# --------------------------------------------------------------- audit


def _cmd_audit(args: argparse.Namespace) -> int:
    start = time.monotonic()
    try:
        scn = load_scenario(args.scenario)
    except OSError as e:
        raise CLIError(str(e))
    report = run_scenario(scn)
    text = report.to_json() + "\n" if args.json else report.to_text()
    if args.output is None:
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.figures is not None:
        stem = os.path.splitext(os.path.basename(scn.path))[0]
        for path in render_figures(report, args.figures, stem):
            print(f"figure: {path}", file=sys.stderr)
    elapsed = time.monotonic() - start
    print(f"wall-clock: {elapsed:.2f}s", file=sys.stderr)
    return report.exit_code


# ---------------------------------------------------------------- main


def _build_parser() -> _Parser:
    top = _Parser(prog="hypset", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    def add_rank(p: _Parser) -> None:
        p.add_argument("-a", "--rank", type=int, default=2, help="free group rank (default 2)")

    p = sub.add_parser("word", help="free group arithmetic")
    add_rank(p)
    p.add_argument(
        "op", choices=["reduce", "product", "inverse", "distance", "gromov", "conjugate"]
    )
    p.add_argument("words", nargs="*", help="words in letter notation, e.g. xyX")
    p.add_argument("--at", default=None, help="basepoint for the Gromov product")
    p.set_defaults(fn=_cmd_word)

    p = sub.add_parser("subgroup", help="Stallings graph of a finitely generated subgroup")
    add_rank(p)
    p.add_argument("-g", "--generators", required=True, help="space-separated generator words")
    p.add_argument("--contains", default=None, metavar="W")
    p.add_argument("--nearest", default=None, metavar="W")
    p.add_argument("--intersect", default=None, metavar="GENS")
    p.add_argument("--conjugate", default=None, metavar="G")
    p.add_argument("--graph", action="store_true", help="dump the folded graph")
    p.set_defaults(fn=_cmd_subgroup)

    p = sub.add_parser("set", help="rational set given as an expression")
    add_rank(p)
    p.add_argument("-e", "--expression", required=True, help='e.g. "<x> . y* | xy"')
    p.add_argument("--contains", default=None, metavar="W")
    p.add_argument("--nearest", default=None, metavar="W")
    p.add_argument("--words", type=int, default=None, metavar="R")
    p.add_argument("--growth", type=int, default=None, metavar="R")
    p.add_argument("--graph", action="store_true", help="dump the automaton")
    p.set_defaults(fn=_cmd_set)

    p = sub.add_parser("limit", help="limit-prefix census, hull slices, comparisons")
    add_rank(p)
    p.add_argument("-e", "--expression", required=True)
    p.add_argument("-d", "--depth", type=int, required=True)
    p.add_argument("--hull", type=int, default=None, metavar="R")
    p.add_argument("--compare", default=None, metavar="EXPR")
    p.set_defaults(fn=_cmd_limit)

    p = sub.add_parser("check", help="coarse-geometry predicates")
    add_rank(p)
    p.add_argument(
        "op",
        choices=["preceq", "qc", "quasidense", "hausdorff", "conj", "delta", "thin"],
    )
    p.add_argument("--A", default=None, help="set expression")
    p.add_argument("--B", default=None, help="set expression")
    p.add_argument("--c", type=int, default=2)
    p.add_argument("--R", type=int, default=10)
    p.add_argument("--slack", type=int, default=4)
    p.add_argument("--alpha", type=int, default=2)
    p.add_argument("--g", default=None, help="element for conj")
    p.add_argument("--epsilon", type=int, default=None)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("audit", help="run a scenario file and emit its report")
    p.add_argument("scenario", help="path to a .scn scenario file")
    p.add_argument("-o", "--output", default=None, help="report file (default stdout)")
    p.add_argument("--json", action="store_true", help="JSON rendering, identical content")
    p.add_argument("--figures", default=None, metavar="DIR", help="render series plots to DIR")
    p.set_defaults(fn=_cmd_audit)

    return top


def _require(args: argparse.Namespace, names: Sequence[str]) -> None:
    missing = [n for n in names if getattr(args, n.lstrip("-").replace("-", "_")) is None]
    if missing:
        raise CLIError(f"check {args.op} requires {', '.join('--' + m for m in missing)}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "check":
            needed = {
                "preceq": ["A", "B"],
                "qc": ["A"],
                "quasidense": ["A"],
                "hausdorff": ["A", "B"],
                "conj": ["A", "g"],
                "delta": [],
                "thin": [],
            }[args.op]
            _require(args, needed)
        return args.fn(args)
    except CLIError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except ScenarioError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except SelfCheckError as e:
        print(f"error: self-check failed: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
