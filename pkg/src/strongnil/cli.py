"""Command-line front end.

Commands: analyze-matrix, analyze-map, triangularize, check-qt, equivalence,
fixtures, nc-check.  Input is JSON ({"n", "m", "M", "ring"} for matrices,
{"n", "H"} for maps) or a built-in fixture name.  Output is deterministic
JSON (default) or a text rendering; exit codes: 0 analysis done (including
negative verdicts), 1 input error, 2 fixture regression mismatch, 3 term
budget exceeded (STRONGNIL_MAX_TERMS).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, is_dataclass
from fractions import Fraction

from . import fixtures
from .freealg import FreePoly, FreePolyMatrix, nc_counterexample_report
from .linalg import QMatrix
from .maps import (
    PolyMap,
    analyze_map,
    equivalence_suite,
    equivalent_statement_holds,
    is_quasi_translation,
    qt_index2_suite,
)
from .parser import ParseError, parse_poly
from .poly import NEG_INFINITY, Monomial, Polynomial, TermLimitError, set_term_limit
from .polymat import PolyMatrix, nilpotency_index
from .rings import QQ, QQ_EPS, RINGS_BY_NAME
from .strong import (
    StrongNilpotencyVerdict,
    TriangularizationCertificate,
    index_bounds_report,
    pair_trace_obstruction,
    strong_index_direct,
    triangularize,
)
from .variables import xvars

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_MISMATCH = 2
EXIT_BUDGET = 3


class InputError(ValueError):
    """Malformed input file, schema violation, or bad flag combination."""


def _jsonable(value):
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, float):
        return None if value == NEG_INFINITY else value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (Polynomial, Monomial, FreePoly)):
        return str(value)
    if isinstance(value, QMatrix):
        return value.to_strings()
    if isinstance(value, (PolyMatrix, FreePolyMatrix)):
        return value.to_strings()
    if isinstance(value, PolyMap):
        return value.to_strings()
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if is_dataclass(value):
        return {k: _jsonable(v) for k, v in asdict(value).items()}
    return str(value)


def _emit(report: dict, fmt: str) -> None:
    payload = _jsonable(report)
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        _print_text(payload)


def _print_text(payload, indent: int = 0) -> None:
    pad = "  " * indent
    if isinstance(payload, dict):
        for key in payload:
            value = payload[key]
            if isinstance(value, (dict, list)):
                print(f"{pad}{key}:")
                _print_text(value, indent + 1)
            else:
                print(f"{pad}{key}: {value}")
    elif isinstance(payload, list):
        if all(isinstance(v, (str, int, bool, type(None))) for v in payload):
            print(f"{pad}[{', '.join(str(v) for v in payload)}]")
        else:
            for v in payload:
                _print_text(v, indent)
    else:
        print(f"{pad}{payload}")


def _format_block_matrix(matrix: PolyMatrix, blocks) -> str:
    """Column-aligned rendering with separators at the block boundaries."""
    cells = matrix.to_strings()
    m = matrix.size
    widths = [max(len(cells[i][j]) for i in range(m)) for j in range(m)]
    cuts = set()
    acc = 0
    for b in blocks[:-1]:
        acc += b
        cuts.add(acc)
    lines = []
    for i in range(m):
        if i in cuts:
            segments = []
            for j in range(m):
                segments.append("-" * widths[j])
                if j + 1 in cuts:
                    segments.append("-+-")
                elif j + 1 < m:
                    segments.append("---")
            lines.append("".join(segments))
        row = []
        for j in range(m):
            row.append(cells[i][j].rjust(widths[j]))
            if j + 1 in cuts:
                row.append(" | ")
            elif j + 1 < m:
                row.append("   ")
        lines.append("".join(row))
    return "\n".join(lines)


# -- input loading -------------------------------------------------------


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _load_matrix(args) -> tuple[PolyMatrix, dict]:
    if args.fixture:
        if args.input:
            raise InputError("give either --input or --fixture, not both")
        name = args.fixture
        if name not in fixtures.FIXTURE_NAMES:
            raise InputError(f"unknown fixture {name!r}")
        matrix = fixtures.fixture_matrix(name, d=args.d, m=args.m)
        meta = {"fixture": name}
        if name == "H5":
            meta["d"] = args.d
        if name == "DUAL":
            meta["m"] = args.m
        return matrix, meta
    if not args.input:
        raise InputError("an input file or a fixture name is required")
    data = _read_json(args.input)
    if not isinstance(data, dict) or "M" not in data or "m" not in data or "n" not in data:
        raise InputError('matrix files need the keys "n", "m" and "M"')
    ring_name = data.get("ring", "Q")
    ring = RINGS_BY_NAME.get(ring_name)
    if ring is None:
        raise InputError(f'unknown ring {ring_name!r}; use "Q" or "Q[eps]"')
    n, m = data["n"], data["m"]
    if not isinstance(n, int) or not isinstance(m, int) or n < 0 or m < 1:
        raise InputError('"n" must be >= 0 and "m" must be >= 1')
    grid = data["M"]
    if (
        not isinstance(grid, list)
        or len(grid) != m
        or any(not isinstance(row, list) or len(row) != m for row in grid)
    ):
        raise InputError('"M" must be an m x m array of polynomial strings')
    allowed = xvars(n)
    rows = [[parse_poly(text, ring, allowed) for text in row] for row in grid]
    return PolyMatrix(rows, ring), {"input": args.input}


def _load_map(args) -> tuple[PolyMap, dict]:
    if args.fixture:
        if args.input:
            raise InputError("give either --input or --fixture, not both")
        name = args.fixture
        try:
            h = fixtures.fixture_map(name, d=args.d)
        except KeyError as exc:
            raise InputError(f"{name!r} is not a map fixture") from exc
        meta = {"fixture": name}
        if name == "H5":
            meta["d"] = args.d
        return h, meta
    if not args.input:
        raise InputError("an input file or a fixture name is required")
    data = _read_json(args.input)
    if not isinstance(data, dict) or "n" not in data or "H" not in data:
        raise InputError('map files need the keys "n" and "H"')
    n = data["n"]
    comps = data["H"]
    if not isinstance(n, int) or n < 1:
        raise InputError('"n" must be a positive integer')
    if not isinstance(comps, list) or len(comps) != n:
        raise InputError('"H" must list exactly n polynomial strings')
    allowed = xvars(n)
    return PolyMap(n, [parse_poly(text, QQ, allowed) for text in comps]), {"input": args.input}


# -- commands ---------------------------------------------------------------


def _certificate_dict(cert: TriangularizationCertificate) -> dict:
    return {
        "T": cert.T.to_strings(),
        "blocks": list(cert.blocks),
        "subdiagonal": [
            [[str(entry) for entry in row] for row in block] for block in cert.subdiag
        ],
        "index": cert.index,
    }


def _verdict_dict(verdict: StrongNilpotencyVerdict) -> dict:
    out = {"strongly_nilpotent": verdict.strongly_nilpotent, "index": verdict.index}
    w = verdict.witness
    if w is not None:
        if hasattr(w, "stage"):
            out["witness"] = {"stage": w.stage, "submatrix_size": w.submatrix_size}
        else:
            out["witness"] = {
                "row": w.row,
                "col": w.col,
                "monomial": str(w.monomial),
                "coefficient": str(w.coefficient),
            }
    return out


def _cmd_analyze_matrix(args) -> int:
    matrix, meta = _load_matrix(args)
    if args.max_r is not None and matrix.ring is not QQ_EPS:
        raise InputError("--max-r only applies to dual-ring matrices")
    report: dict = dict(meta)
    report["m"] = matrix.size
    report["ring"] = matrix.ring.name
    report["regular"] = nilpotency_index(matrix, max_r=args.max_r)
    if matrix.ring is QQ:
        verdict = strong_index_direct(matrix)
        report["strong"] = verdict.index
        report["strongly_nilpotent"] = verdict.strongly_nilpotent
        if verdict.strongly_nilpotent:
            cert = triangularize(matrix)
            assert isinstance(cert, TriangularizationCertificate)
            report["blocks"] = list(cert.blocks)
            bounds = index_bounds_report(matrix)
            report["bounds_ok"] = bounds.bounds_ok
            if args.format == "text":
                from .polymat import conjugate

                print(_format_block_matrix(conjugate(matrix, cert.T), cert.blocks))
        else:
            report.update(_verdict_dict(verdict))
            obstruction = pair_trace_obstruction(matrix)
            if obstruction is not None:
                report["pair_trace_obstruction"] = str(obstruction)
    _emit(report, args.format)
    return EXIT_OK


def _cmd_triangularize(args) -> int:
    matrix, meta = _load_matrix(args)
    if matrix.ring is not QQ:
        raise InputError("triangularization requires the rational ring")
    result = triangularize(matrix)
    if isinstance(result, TriangularizationCertificate):
        report = dict(meta)
        report.update(_certificate_dict(result))
        if args.format == "text":
            from .polymat import conjugate

            print(_format_block_matrix(conjugate(matrix, result.T), result.blocks))
        _emit(report, args.format)
    else:
        report = dict(meta)
        report.update(_verdict_dict(result))
        _emit(report, args.format)
    return EXIT_OK


def _cmd_analyze_map(args) -> int:
    h, meta = _load_map(args)
    analysis = analyze_map(h, r=args.r)
    report = dict(meta)
    report["n"] = h.n
    report["H"] = h.to_strings()
    report["degree"] = analysis.degree
    report["homogeneous"] = analysis.homogeneous
    report["jacobian"] = analysis.jacobian.to_strings()
    report["rank"] = analysis.rank
    report["det_jf"] = str(analysis.det_jf)
    report["keller"] = analysis.keller
    report["regular"] = analysis.regular_index
    report["strong"] = analysis.strong.index
    report["strongly_nilpotent"] = analysis.strong.strongly_nilpotent
    if analysis.certificate is not None:
        report["blocks"] = list(analysis.certificate.blocks)
    report["is_quasi_translation"] = analysis.quasi_translation
    if analysis.equivalence is not None:
        report["equivalence"] = {
            "r": analysis.equivalence.r,
            "statements": analysis.equivalence.statements,
            "agree": analysis.equivalence.agree,
        }
    if analysis.qt_suite is not None:
        report["qt_index2"] = _qt_dict(analysis.qt_suite)
    if analysis.rank1 is not None:
        report["rank1"] = analysis.rank1
    _emit(report, args.format)
    return EXIT_OK


def _qt_dict(report) -> dict:
    return {
        "anchor": report.anchor,
        "statements": {
            "1": report.statement1,
            "2": report.statement2,
            "3": report.statement3,
            "4": report.statement4,
        },
        "s": report.s,
        "T": report.T.to_strings() if report.T is not None else None,
        "all_agree": report.all_agree,
    }


def _cmd_check_qt(args) -> int:
    h, meta = _load_map(args)
    report = dict(meta)
    qt = is_quasi_translation(h)
    report["is_quasi_translation"] = qt
    if qt:
        report["qt_index2"] = _qt_dict(qt_index2_suite(h))
    _emit(report, args.format)
    return EXIT_OK


def _cmd_equivalence(args) -> int:
    h, meta = _load_map(args)
    if args.r is None:
        raise InputError("--r is required for the equivalence command")
    report = dict(meta)
    report["r"] = args.r
    if args.statement is None:
        suite = equivalence_suite(h, args.r)
        report["statements"] = suite.statements
        report["agree"] = suite.agree
    else:
        result = equivalent_statement_holds(h, args.r, args.statement, j=args.j)
        report["statement"] = result.statement
        report["holds"] = result.holds
        report["info"] = result.info
    _emit(report, args.format)
    return EXIT_OK


def _cmd_fixtures(args) -> int:
    result = fixtures.run_fixture_suite(seed=args.seed)
    report = {"all_ok": result.all_ok, "results": list(result.rows)}
    if args.seed is not None:
        report["seed"] = args.seed
    _emit(report, args.format)
    return EXIT_OK if result.all_ok else EXIT_MISMATCH


def _cmd_nc_check(args) -> int:
    rep = nc_counterexample_report()
    report = {
        "matrix": rep.matrix.to_strings(),
        "nilpotency_index": rep.nilpotency_index,
        "commutative_nilpotency_index": rep.commutative_nilpotency_index,
        "pair_trace": str(rep.pair_trace),
        "pair_trace_nonzero": bool(rep.pair_trace),
        "nc_pair_trace": str(rep.nc_pair_trace),
        "strongly_nilpotent": rep.strongly_nilpotent,
        "fresh_products_nonzero": rep.fresh_products_nonzero,
    }
    _emit(report, args.format)
    return EXIT_OK


def _add_io_flags(sub, with_map_opts=False, with_matrix_opts=False):
    sub.add_argument("--input", help="path to a JSON input file")
    sub.add_argument("--fixture", help="built-in fixture name")
    sub.add_argument("--d", type=int, default=2, help="parameter for the H5 family")
    sub.add_argument("--format", choices=("json", "text"), default="json")
    if with_matrix_opts:
        sub.add_argument("--m", type=int, default=3, help="size for the DUAL fixture")
        sub.add_argument("--max-r", type=int, default=None, dest="max_r",
                         help="override the nilpotency search bound (dual ring only)")
    if with_map_opts:
        sub.add_argument("--r", type=int, default=None, help="index bound for the equivalence suite")
        sub.add_argument("--statement", type=int, choices=(1, 2, 3, 4), default=None)
        sub.add_argument("--j", type=int, default=None, help="tuple level for statements 3 and 4")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="strongnil",
        description="Exact analysis of strongly nilpotent polynomial matrices and polynomial maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze-matrix", help="indices, blocks and obstructions of a matrix")
    _add_io_flags(p, with_matrix_opts=True)
    p.set_defaults(func=_cmd_analyze_matrix)

    p = sub.add_parser("triangularize", help="produce a triangularization certificate")
    _add_io_flags(p, with_matrix_opts=True)
    p.set_defaults(func=_cmd_triangularize)

    p = sub.add_parser("analyze-map", help="full analysis of a polynomial map")
    _add_io_flags(p, with_map_opts=True)
    p.set_defaults(func=_cmd_analyze_map)

    p = sub.add_parser("check-qt", help="quasi-translation check and index-two suite")
    _add_io_flags(p)
    p.set_defaults(func=_cmd_check_qt)

    p = sub.add_parser("equivalence", help="the four equivalent index characterizations")
    _add_io_flags(p, with_map_opts=True)
    p.set_defaults(func=_cmd_equivalence)

    p = sub.add_parser("fixtures", help="run the built-in regression corpus")
    p.add_argument("--seed", type=int, default=None,
                   help="add deterministic random oracle-equivalence checks")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=_cmd_fixtures)

    p = sub.add_parser("nc-check", help="noncommutative counterexample report")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=_cmd_nc_check)

    return parser


def main(argv=None) -> int:
    try:
        raw_cap = os.environ.get("STRONGNIL_MAX_TERMS")
        if raw_cap:
            try:
                set_term_limit(int(raw_cap))
            except ValueError as exc:
                print(f"error: STRONGNIL_MAX_TERMS: {exc}", file=sys.stderr)
                return EXIT_INPUT
        parser = build_parser()
        args = parser.parse_args(argv)
        try:
            return args.func(args)
        except TermLimitError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BUDGET
        except (InputError, ParseError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    finally:
        set_term_limit(None)


if __name__ == "__main__":
    sys.exit(main())
