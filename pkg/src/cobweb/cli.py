"""``cobweb`` command-line entry point.

Exit status: 0 on success, 1 on a domain error, 2 on a usage error.  Output
is deterministic: identical arguments give byte-identical stdout, whatever
``--threads`` is.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from . import combinatorics, poset, properties, tiling
from .exceptions import CobwebError, InvalidParameter
from .sequences import FSequence, load_seq_file, parse_seq_spec

SUBCOMMANDS = (
    "triangle",
    "admissible",
    "gcd-morphic",
    "search",
    "poset",
    "chains",
    "mobius",
    "charpoly",
    "domatic",
    "tile",
)


@dataclass
class RunReport:
    exit_status: int
    output: str = ""
    error: str = ""
    elapsed: float = 0.0
    truncated: bool = False


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # raise instead of exiting so run() can report usage errors
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise InvalidParameter(f"{name} must be an integer, got {raw!r}") from None


def _common(formats: Sequence[str] = ("text", "json")) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--threads", type=int, default=1, help="worker processes (output is unaffected)")
    p.add_argument("--budget-cells", type=int, default=None, help="tiling enumeration cell budget")
    p.add_argument(
        "--budget-vertices", type=int, default=poset.DEFAULT_VERTEX_BUDGET, help="poset vertex budget"
    )
    return p


def _seq_args() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--seq", help="natural|even|odd|mult:k|fibonacci|gauss:q|const:c")
    g.add_argument("--seq-file", help="file with one positive integer per line")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cobweb", description="Cobweb posets, F-nomials and layer tilings.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser, metavar="SUBCOMMAND")
    seq = _seq_args()

    p = sub.add_parser("triangle", parents=[seq, _common(("text", "csv", "json"))], help="F-nomial triangle")
    p.add_argument("--rows", type=int, required=True)

    for name, helptext in (("admissible", "cobweb-admissibility verdict"), ("gcd-morphic", "GCD-morphism verdict")):
        p = sub.add_parser(name, parents=[seq, _common()], help=helptext)
        p.add_argument("--upto", type=int, required=True)

    p = sub.add_parser("search", parents=[_common()], help="bounded search for admissible / GCD-morphic prefixes")
    p.add_argument("--property", choices=("admissible", "gcd-morphic"), required=True)
    p.add_argument("--len", type=int, required=True, dest="length")
    p.add_argument("--max-term", type=int, required=True)
    p.add_argument("--prefix", default="", help="comma-separated starting terms")
    p.add_argument("--max-len-ceiling", type=int, default=properties.DEFAULT_MAX_LEN)
    p.add_argument("--max-term-ceiling", type=int, default=properties.DEFAULT_MAX_TERM)

    p = sub.add_parser("poset", parents=[seq, _common()], help="export P_n")
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--export", choices=poset.EXPORT_FORMATS, required=True)

    p = sub.add_parser("chains", parents=[seq, _common()], help="maximal chain counts")
    p.add_argument("--from", type=int, required=True, dest="k")
    p.add_argument("--to", type=int, required=True, dest="n")
    p.add_argument("--mode", choices=poset.CHAIN_MODES, default="formula")

    p = sub.add_parser("mobius", parents=[seq, _common(("text", "csv", "json"))], help="Moebius matrix of P_n")
    p.add_argument("--levels", type=int, required=True)

    p = sub.add_parser("charpoly", parents=[seq, _common()], help="characteristic polynomial of P_n")
    p.add_argument("--levels", type=int, required=True)

    p = sub.add_parser("domatic", parents=[seq, _common()], help="mod-m level partition domination check")
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--mod", type=int, required=True)

    p = sub.add_parser("tile", help="layer tilings by sigma-P_m blocks")
    tsub = p.add_subparsers(dest="tile_command", required=True, parser_class=_Parser, metavar="ACTION")
    actions = {
        "exists": "first tiling of the layer, if any",
        "count": "number of tilings of the layer",
        "enumerate": "every tiling, one per line",
    }
    for action, helptext in actions.items():
        t = tsub.add_parser(action, parents=[seq, _common()], help=helptext)
        t.add_argument("--from", type=int, required=True, dest="k")
        t.add_argument("--to", type=int, required=True, dest="n")
        t.add_argument("--policy", choices=("identity", "any"), default="any")
        if action == "enumerate":
            t.add_argument("--limit", type=int, default=None)
    t = tsub.add_parser(
        "triangle", parents=[seq, _common(("text", "csv", "json"))], help="bound, count or existence per layer"
    )
    t.add_argument("--rows", type=int, required=True)
    t.add_argument("--mode", choices=tiling.TRIANGLE_MODES, default="bound")
    t.add_argument("--policy", choices=("identity", "any"), default="any")
    return parser


def _sequence(args) -> FSequence:
    if args.seq_file:
        try:
            return load_seq_file(args.seq_file)
        except OSError as exc:
            raise InvalidParameter(f"cannot read {args.seq_file}: {exc.strerror}") from None
    return parse_seq_spec(args.seq)


def _num(value) -> Any:
    """JSON form of an exact number: int when integral, ``"p/q"`` otherwise."""
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else combinatorics.format_fraction(value)


def _dump(payload: Any) -> str:
    return json.dumps(payload) + "\n"


def _table(rows: list[list[Any]], fmt: str, render=str) -> str:
    if fmt == "json":
        return _dump(rows)
    sep = "," if fmt == "csv" else " "
    return "".join(sep.join(render(x) for x in row) + "\n" for row in rows)


def _triangle_cell(x) -> str:
    if x is None:
        return "?"
    if isinstance(x, bool):
        return "yes" if x else "no"
    return str(x)


# -- subcommand handlers: each returns (stdout text, truncated flag) ------


def _cmd_triangle(args):
    rows = combinatorics.fnomial_triangle(_sequence(args), args.rows)
    if args.format == "json":
        return _dump([[_num(x) for x in row] for row in rows]), False
    return _table(rows, args.format, combinatorics.format_fraction), False


def _verdict_text(v: properties.PropertyVerdict) -> str:
    d = v.to_dict()
    head = f"{d['property']} through N={d['bound']}: {'holds' if d['holds'] else 'fails'}"
    if d["witness"]:
        head += " (" + ", ".join(f"{k}={val}" for k, val in d["witness"].items()) + ")"
    return head + "\n"


def _cmd_admissible(args):
    v = properties.check_admissible(_sequence(args), args.upto)
    return (_dump(v.to_dict()) if args.format == "json" else _verdict_text(v)), False


def _cmd_gcd(args):
    v = properties.check_gcd_morphic(_sequence(args), args.upto)
    return (_dump(v.to_dict()) if args.format == "json" else _verdict_text(v)), False


def _cmd_search(args):
    prefix = [int(x) for x in args.prefix.split(",") if x.strip()] if args.prefix else []
    fn = properties.search_admissible if args.property == "admissible" else properties.search_gcd_morphic
    report = fn(
        args.length,
        args.max_term,
        prefix,
        max_len_ceiling=args.max_len_ceiling,
        max_term_ceiling=args.max_term_ceiling,
        workers=args.threads,
    )
    if args.format == "json":
        return _dump(report.to_dict()), not report.exhausted
    lines = [",".join(map(str, seq)) for seq in report.found]
    lines.append(f"# {len(report.found)} found, exhausted={str(report.exhausted).lower()}")
    return "\n".join(lines) + "\n", not report.exhausted


def _cmd_poset(args):
    P = poset.build(_sequence(args), args.levels, args.budget_vertices)
    return poset.export(P, args.export), False


def _cmd_chains(args):
    F = _sequence(args)
    count = poset.count_chains(F, args.k, args.n, args.mode, max_vertices=args.budget_vertices)
    if args.format == "json":
        return _dump({"sequence": F.name, "from": args.k, "to": args.n, "mode": args.mode, "chains": count}), False
    return f"{count}\n", False


def _cmd_mobius(args):
    P = poset.build(_sequence(args), args.levels, args.budget_vertices)
    mu = poset.mobius_matrix(P)
    return _table([[int(x) for x in row] for row in mu], args.format), False


def _cmd_charpoly(args):
    P = poset.build(_sequence(args), args.levels, args.budget_vertices)
    coeffs = poset.characteristic_polynomial(P)
    if args.format == "json":
        return _dump({"sequence": P.sequence.name, "levels": args.levels, "coefficients": coeffs}), False
    return poset.format_polynomial(coeffs) + "\n", False


def _cmd_domatic(args):
    P = poset.build(_sequence(args), args.levels, args.budget_vertices)
    v = poset.domatic_mod_check(P, args.mod)
    if args.format == "json":
        return _dump(v.to_dict()), False
    lines = [f"mod {v.modulus} level partition: {'domatic' if v.holds else 'not domatic'}"]
    for r, levels in enumerate(v.classes):
        status = "dominating"
        if r in v.failures:
            status = f"fails, {v.failures[r]} uncovered"
        lines.append(f"  class {r} levels {','.join(map(str, levels))}: {status}")
    return "\n".join(lines) + "\n", False


def _cmd_tile(args):
    F = _sequence(args)
    budget = args.budget_cells
    if budget is None:
        budget = _env_int("COBWEB_BUDGET_CELLS", tiling.DEFAULT_CELL_BUDGET)
    action = args.tile_command
    if action == "triangle":
        rows = tiling.tiling_triangle(
            F, args.rows, args.policy, args.mode, budget_cells=budget, workers=args.threads
        )
        truncated = any(x is None for row in rows for x in row)
        if args.format == "json":
            return _dump({"mode": args.mode, "policy": args.policy, "rows": rows, "truncated": truncated}), truncated
        out = _table(rows, args.format, _triangle_cell)
        if truncated and args.format == "text":
            out += "# ? = unresolved within budget\n"
        return out, truncated

    grid = tiling.make_problem(F, args.k, args.n, args.policy)
    if action == "exists":
        found, witness = tiling.exists_tiling(grid, budget_cells=budget)
        if args.format == "json":
            return _dump({"grid": grid.to_dict(), "exists": found,
                          "witness": witness.to_json_obj() if witness else None}), False
        out = "yes\n" if found else "no\n"
        if witness:
            out += json.dumps(witness.to_json_obj()) + "\n"
        return out, False
    if action == "count":
        count = tiling.count_tilings(grid, budget_cells=budget, workers=args.threads)
        if args.format == "json":
            return _dump({"grid": grid.to_dict(), "count": count}), False
        return f"{count}\n", False
    limit = args.limit
    found = tiling.enumerate_tilings(
        grid, limit=None if limit is None else limit + 1, budget_cells=budget, workers=args.threads
    )
    truncated = limit is not None and len(found) > limit
    if truncated:
        found = found[:limit]
    if args.format == "json":
        return _dump({"grid": grid.to_dict(), "tilings": [t.to_json_obj() for t in found],
                      "truncated": truncated}), truncated
    out = "".join(json.dumps(t.to_json_obj()) + "\n" for t in found)
    out += f"# {len(found)} tilings" + (" (truncated)" if truncated else "") + "\n"
    return out, truncated


_HANDLERS = {
    "triangle": _cmd_triangle,
    "admissible": _cmd_admissible,
    "gcd-morphic": _cmd_gcd,
    "search": _cmd_search,
    "poset": _cmd_poset,
    "chains": _cmd_chains,
    "mobius": _cmd_mobius,
    "charpoly": _cmd_charpoly,
    "domatic": _cmd_domatic,
    "tile": _cmd_tile,
}


def run(argv: Sequence[str] | None = None) -> RunReport:
    """Parse ``argv``, dispatch to one operation, and capture the rendered output."""
    start = time.perf_counter()
    parser = build_parser()
    captured = io.StringIO()
    try:
        with contextlib.redirect_stdout(captured):
            args = parser.parse_args(argv)
    except _UsageError as exc:
        return RunReport(2, error=f"{parser.format_usage()}{exc}\n")
    except SystemExit as exc:  # --help
        return RunReport(int(exc.code or 0), output=captured.getvalue())
    try:
        output, truncated = _HANDLERS[args.command](args)
    except CobwebError as exc:
        return RunReport(1, error=f"cobweb: {type(exc).__name__}: {exc}\n",
                         elapsed=time.perf_counter() - start)
    return RunReport(0, output, elapsed=time.perf_counter() - start, truncated=truncated)


def main(argv: Sequence[str] | None = None) -> int:
    report = run(argv)
    sys.stdout.write(report.output)
    sys.stderr.write(report.error)
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
