"""Command line front end.

Every command reads a presentation (from a file, ``-e TEXT`` or stdin), prints
a JSON report on stdout and a one-line summary on stderr.  Exit codes: 0 for a
positive answer, 1 for a negative one, 2 for an inconclusive search and 3 for
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .conditions import Condition, certify, diagram_type_check
from .diagram import (
    Diagram,
    boundary_data,
    curvature_check,
    is_reduced,
    is_vertex_reduced,
    pe_weights,
    random_weights,
    suppressed_view,
    validate_diagram,
)
from .pieces import compute_pieces
from .presentation import PresentationError, parse_presentation, parse_word, validate
from .solvers import NotCertifiedError, solve_conjugacy, solve_word
from .stargraph import (
    CircuitCapExceeded,
    build_star_graph,
    build_whitehead_graph,
    circuit_counts,
    enumerate_reduced_circuits,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3
CONDITION_CHOICES = ["wstar", "w", "vstar", "v"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("source", nargs="?", help="presentation file (default: stdin)")
    p.add_argument("-e", "--expr", help="presentation text, e.g. '<x,y | x*y*x^-1*y^-1>'")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="smallcancel", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--seed", type=int, default=0, help="seed for anything random")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="certify a condition")
    _add_source(p)
    p.add_argument("--condition", choices=CONDITION_CHOICES, default="wstar")

    p = sub.add_parser("stargraph", help="star graph (or Whitehead graph) of the presentation")
    _add_source(p)
    p.add_argument("--dot", action="store_true", help="emit Graphviz DOT instead of JSON")
    p.add_argument("--whitehead", action="store_true", help="use relators instead of roots")

    p = sub.add_parser("pieces", help="pieces and minimal piece decompositions")
    _add_source(p)

    p = sub.add_parser("circuits", help="reduced circuits of the star graph")
    _add_source(p)
    p.add_argument("--max-len", type=int, default=5)

    p = sub.add_parser("solve-word", help="decide whether a word is trivial")
    _add_source(p)
    p.add_argument("--word", required=True)
    p.add_argument("--condition", choices=CONDITION_CHOICES, default="wstar")
    p.add_argument("--max-area", type=int)
    p.add_argument("--max-len", type=int)
    p.add_argument("--max-states", type=int)

    p = sub.add_parser("solve-conj", help="search a conjugator u = w v w^-1")
    _add_source(p)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--condition", choices=CONDITION_CHOICES, default="wstar")
    p.add_argument("--max-conj-len", type=int, default=3)
    p.add_argument("--max-area", type=int)
    p.add_argument("--max-len", type=int)
    p.add_argument("--max-states", type=int, default=20_000)

    p = sub.add_parser("diagram-verify", help="validate a diagram file and evaluate curvature")
    _add_source(p)
    p.add_argument("--file", required=True, help="diagram JSON")
    p.add_argument("--weights", help="JSON object dart id -> 'p/q', or 'random' (default: polygon angles)")
    p.add_argument("--condition", choices=CONDITION_CHOICES, help="also evaluate this condition on the diagram")
    return parser


def _read_presentation(args):
    if args.expr is not None:
        text = args.expr
    elif args.source and args.source != "-":
        try:
            text = Path(args.source).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.source}: {exc.strerror}") from None
    else:
        text = sys.stdin.read()
    P = parse_presentation(text.strip())
    report = validate(P)
    if not report.ok:
        bad = "; ".join(f.message for f in report.violations)
        raise UsageError(f"invalid presentation: {bad}")
    return P, report


def _cmd_check(args, P, validation):
    cond = Condition.parse(args.condition)
    outcome = certify(P, cond)
    result = outcome.to_json()
    result["validation"] = validation.to_json()
    code = EXIT_OK if outcome.certified else EXIT_NEGATIVE
    return result, code, f"{cond.value}: {outcome.verdict}"


def _cmd_stargraph(args, P, validation):
    S = build_whitehead_graph(P) if args.whitehead else build_star_graph(P)
    if args.dot:
        return S.to_dot(), EXIT_OK, f"{len(S.edges)} edges"
    return S.to_json(), EXIT_OK, f"{len(S.edges)} edges"


def _cmd_pieces(args, P, validation):
    table = compute_pieces(P)
    return table.to_json(), EXIT_OK, f"longest piece has length {table.max_length}"


def _cmd_circuits(args, P, validation):
    S = build_star_graph(P)
    try:
        circuits = enumerate_reduced_circuits(S, args.max_len)
    except CircuitCapExceeded as exc:
        raise UsageError(str(exc)) from None
    counts = circuit_counts(circuits)
    result = {
        "max_len": args.max_len,
        "counts": {str(k): counts.get(k, 0) for k in range(1, args.max_len + 1)},
        "circuits": [c.to_json(S) for c in circuits],
    }
    summary = ", ".join(f"{k}: {v}" for k, v in result["counts"].items())
    return result, EXIT_OK, f"reduced circuits by length {{{summary}}}"


def _word(text: str, P):
    return parse_word(text, P.generators)


def _cmd_solve_word(args, P, validation):
    w = _word(args.word, P)
    verdict = solve_word(P, w, args.condition, args.max_area, args.max_len, args.max_states)
    result = verdict.to_json(P)
    result["word"] = P.format(w)
    return result, verdict.exit_code, f"{P.format(w)}: {verdict.kind}"


def _cmd_solve_conj(args, P, validation):
    u, v = _word(args.u, P), _word(args.v, P)
    verdict = solve_conjugacy(P, u, v, args.condition, args.max_conj_len, args.max_area, args.max_len, args.max_states)
    result = verdict.to_json(P)
    result["u"], result["v"] = P.format(u), P.format(v)
    return result, verdict.exit_code, f"{P.format(u)} ~ {P.format(v)}: {verdict.kind}"


def _load_weights(args, M: Diagram):
    if args.weights is None:
        return pe_weights(M), "polygon"
    if args.weights == "random":
        return random_weights(M, random.Random(args.seed)), "random"
    try:
        raw = json.loads(Path(args.weights).read_text())
        return {int(k): Fraction(str(v)) for k, v in raw.items()}, "file"
    except (OSError, ValueError, AttributeError) as exc:
        raise UsageError(f"cannot read weights: {exc}") from None


def _cmd_diagram_verify(args, P, validation):
    try:
        M = Diagram.from_json(json.loads(Path(args.file).read_text()))
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed diagram file: {exc}") from None
    report = validate_diagram(P, M)
    result = {"valid": report.ok, "findings": list(report.findings), "tau": report.tau}
    if not report.ok:
        return result, EXIT_NEGATIVE, "invalid diagram: " + "; ".join(report.findings)
    view = suppressed_view(M)
    vr, vr_w = is_vertex_reduced(P, M)
    red, red_w = is_reduced(P, M)
    result.update(
        {
            "cells": M.num_cells,
            "vertices": M.num_vertices,
            "edges": M.num_edges,
            "inner_vertices": len(view.inner_vertices),
            "degrees": [view.degree(f) for f in M.relator_faces],
            "vertex_reduced": vr,
            "vertex_reduced_witness": vr_w.to_json() if vr_w else None,
            "reduced": red,
            "reduced_witness": red_w.to_json() if red_w else None,
        }
    )
    if M.tau:
        words, length = boundary_data(M)
        result["boundary"] = {"words": [P.format(w) for w in words], "length": length}
    g, source = _load_weights(args, M)
    try:
        lhs, rhs = curvature_check(M, g)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result["curvature"] = {"weights": source, "lhs": str(lhs), "rhs": str(rhs), "equal": lhs == rhs}
    if args.condition:
        result["condition"] = {
            "condition": Condition.parse(args.condition).value,
            "holds": diagram_type_check(P, M, args.condition),
        }
    code = EXIT_OK if lhs == rhs else EXIT_NEGATIVE
    return result, code, f"valid diagram, tau={M.tau}, curvature {lhs} = {rhs}" if lhs == rhs else "curvature mismatch"


COMMANDS = {
    "check": _cmd_check,
    "stargraph": _cmd_stargraph,
    "pieces": _cmd_pieces,
    "circuits": _cmd_circuits,
    "solve-word": _cmd_solve_word,
    "solve-conj": _cmd_solve_conj,
    "diagram-verify": _cmd_diagram_verify,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    presentation = None
    try:
        P, validation = _read_presentation(args)
        presentation = str(P)
        result, code, summary = COMMANDS[args.command](args, P, validation)
    except (UsageError, PresentationError, NotCertifiedError, ValueError) as exc:
        report = {"command": args.command, "exit_code": EXIT_USAGE, "error": str(exc)}
        if presentation:
            report["presentation"] = presentation
        print(json.dumps(report, indent=2), file=stdout)
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    if isinstance(result, str):
        stdout.write(result)
    else:
        report = {"command": args.command, "exit_code": code, "presentation": presentation, "result": result}
        print(json.dumps(report, indent=2), file=stdout)
    print(summary, file=stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
