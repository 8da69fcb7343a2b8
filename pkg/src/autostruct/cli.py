"""Command-line front end.

Every command reads a structure-definition file and writes a stream of JSON
records to standard output, one per line, with the final verdict record
last.  Progress records are emitted at fixed word-count strides so output
for a given input is byte-identical across runs.  Exit codes: 0 the checked
property HOLDS (or the command simply succeeded), 1 FAILS with a witness in
the report, 2 UNKNOWN, 3 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .checkers import (INVERSE_RIGHT_FT, RIGHT_FT, TWO_SIDED_FT, Status,
                       Structure, Verdict, certify_ft,
                       check_biautomatic_bounded, check_finite_to_one,
                       check_right_ft_bounded, check_two_sided_ft_bounded,
                       length_difference_bound, propagate_constants,
                       search_witness)
from .errors import AutostructError
from .structfile import parse_structure_file, write_structure_file
from .svgplot import plot_svg

_EXIT = {Status.HOLDS: 0, Status.FAILS: 1, Status.UNKNOWN: 2}
_USAGE_ERROR = 3


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors.
        return 0 if exc.code == 0 else _USAGE_ERROR
    try:
        return args.run(args)
    except AutostructError as exc:
        _emit({"event": "error", "message": str(exc)})
        return _USAGE_ERROR


def console_main() -> None:
    raise SystemExit(main())


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="autostruct",
        description="Fellow-traveler checks for automatic structures on "
                    "finitely generated groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser(
        "check", help="run a bounded or certified check on a structure file")
    check.add_argument("condition",
                       choices=["automatic", "two-sided", "biautomatic",
                                "finite-to-one"])
    check.add_argument("file")
    check.add_argument("--k", type=int, default=None,
                       help="fellow-traveler constant")
    check.add_argument("--max-len", type=int, default=16,
                       help="word length budget for bounded scans")
    check.add_argument("--certify", action="store_true",
                       help="use the ball-bounded certifier instead of a "
                            "bounded scan")
    check.add_argument("--ball-cutoff", type=int, default=None,
                       help="certifier ball radius (default 2k+2)")
    check.set_defaults(run=_cmd_check)

    witness = sub.add_parser(
        "witness", help="search for a violating witness of a condition")
    witness.add_argument("file")
    witness.add_argument("--condition", required=True,
                         choices=[RIGHT_FT, TWO_SIDED_FT, INVERSE_RIGHT_FT])
    witness.add_argument("--k", type=int, required=True)
    witness.add_argument("--max-len", type=int, default=16)
    witness.set_defaults(run=_cmd_witness)

    bound = sub.add_parser(
        "bound", help="compute the pigeonhole length-difference bound")
    bound_sub = bound.add_subparsers(dest="which", required=True)
    length = bound_sub.add_parser("length-diff")
    length.add_argument("file")
    length.add_argument("--k", type=int, required=True)
    length.set_defaults(run=_cmd_bound)

    constants = sub.add_parser(
        "constants", help="propagate a fellow-traveler constant through the "
                          "length-difference bound")
    constants_sub = constants.add_subparsers(dest="which", required=True)
    propagate = constants_sub.add_parser("propagate")
    propagate.add_argument("file", nargs="?")
    propagate.add_argument("--k", type=int, required=True)
    propagate.add_argument("--n", type=int, default=None,
                           help="length-difference bound N; computed from "
                                "the file when omitted")
    propagate.set_defaults(run=_cmd_constants)

    lang = sub.add_parser("lang", help="language-level operations")
    lang_sub = lang.add_subparsers(dest="which", required=True)
    invert = lang_sub.add_parser("invert")
    invert.add_argument("file")
    invert.add_argument("--out", required=True)
    invert.set_defaults(run=_cmd_invert)

    enum = sub.add_parser("enumerate",
                          help="list language words up to a length")
    enum.add_argument("file")
    enum.add_argument("--max-len", type=int, default=16)
    enum.set_defaults(run=_cmd_enumerate)

    plot = sub.add_parser("plot", help="draw word paths as an SVG")
    plot.add_argument("file")
    plot.add_argument("--words", required=True,
                      help="2-3 comma-separated words")
    plot.add_argument("--out", required=True)
    plot.set_defaults(run=_cmd_plot)
    return parser


def _emit(record: dict) -> None:
    sys.stdout.write(json.dumps(record) + "\n")


def _progress(condition: str):
    def callback(done: int, total: int) -> None:
        _emit({"event": "progress", "condition": condition,
               "words_scanned": done, "words_total": total})
    return callback


def _emit_verdict(verdict: Verdict) -> int:
    _emit({"event": "verdict", **verdict.to_json()})
    return _EXIT[verdict.status]


def _require_k(args) -> int:
    if args.k is None:
        raise AutostructError(f"check {args.condition} requires --k")
    return args.k


def _cmd_check(args) -> int:
    structure = parse_structure_file(args.file)
    if args.condition == "finite-to-one":
        return _emit_verdict(check_finite_to_one(structure))
    k = _require_k(args)
    if args.condition == "automatic":
        if args.certify:
            verdict = certify_ft(structure, k, args.ball_cutoff, RIGHT_FT)
        else:
            verdict = check_right_ft_bounded(structure, k, args.max_len,
                                             _progress(RIGHT_FT))
        return _emit_verdict(verdict)
    if args.condition == "two-sided":
        if args.certify:
            verdict = certify_ft(structure, k, args.ball_cutoff,
                                 TWO_SIDED_FT)
        else:
            verdict = check_two_sided_ft_bounded(structure, k, args.max_len,
                                                 _progress(TWO_SIDED_FT))
        return _emit_verdict(verdict)
    if args.certify:
        sides = (certify_ft(structure, k, args.ball_cutoff, RIGHT_FT),
                 certify_ft(structure, k, args.ball_cutoff,
                            INVERSE_RIGHT_FT))
    else:
        sides = check_biautomatic_bounded(structure, k, args.max_len,
                                          _progress("biautomatic"))
    for verdict in sides:
        _emit({"event": "verdict", **verdict.to_json()})
    statuses = [v.status for v in sides]
    if Status.FAILS in statuses:
        combined = Status.FAILS
    elif Status.UNKNOWN in statuses:
        combined = Status.UNKNOWN
    else:
        combined = Status.HOLDS
    _emit({"event": "verdict", "condition": "biautomatic", "k": k,
           "status": combined.value})
    return _EXIT[combined]


def _cmd_witness(args) -> int:
    structure = parse_structure_file(args.file)
    verdict = search_witness(structure, args.condition, args.k, args.max_len,
                             _progress(args.condition))
    return _emit_verdict(verdict)


def _cmd_bound(args) -> int:
    structure = parse_structure_file(args.file)
    bound = length_difference_bound(structure, args.k)
    _emit({"event": "bound", "condition": "length-difference",
           **bound.to_json()})
    return 0


def _cmd_constants(args) -> int:
    if args.n is not None:
        n_bound = args.n
    elif args.file is not None:
        structure = parse_structure_file(args.file)
        n_bound = length_difference_bound(structure, args.k).bound
    else:
        raise AutostructError("constants propagate needs --n or a file")
    _emit({"event": "constants", **propagate_constants(args.k,
                                                       n_bound).to_json()})
    return 0


def _cmd_invert(args) -> int:
    structure = parse_structure_file(args.file)
    inverted = structure.inverted()
    name = f"{structure.name}-inverted" if structure.name else "inverted"
    write_structure_file(inverted, args.out, name=name)
    _emit({"event": "written", "path": args.out,
           "states": inverted.dfa.n_states})
    return 0


def _cmd_enumerate(args) -> int:
    structure = parse_structure_file(args.file)
    index = structure.index(args.max_len)
    backend = structure.backend
    for word in index.words:
        _emit({"event": "word", "word": word,
               "image": backend.canon(index.elems[word])})
    _emit({"event": "summary", "count": len(index.words),
           "max_len": args.max_len})
    return 0


def _cmd_plot(args) -> int:
    structure = parse_structure_file(args.file)
    words = args.words.split(",")
    if not 2 <= len(words) <= 3:
        raise AutostructError("plot needs 2-3 comma-separated words")
    svg = plot_svg(structure.backend, words)
    Path(args.out).write_text(svg)
    _emit({"event": "written", "path": args.out,
           "bytes": len(svg.encode("utf-8"))})
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
