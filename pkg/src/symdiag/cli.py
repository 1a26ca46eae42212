"""Command-line front end.

Subcommands: ``classify``, ``asymptotics``, ``diagonal``, ``growth``,
``sweep`` and ``verify``.  Single jobs print a JSON record; sweeps print
CSV.  Exit codes: 0 success, 1 verification failure, 2 parse or usage
error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import critical, oracle, smoothasm, verify
from . import symmlin as sl
from .errors import BudgetExceeded, CriticalParameter, OracleUnavailable, ParseError, SymDiagError
from .polyroots import find_roots, minimal_modulus_roots
from .symmlin import SymPoly

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
MAX_GRID = 10**6


# -- families ----------------------------------------------------------------

@dataclass(frozen=True)
class Family:
    kind: str  # "m3", "grz" or "poly"
    params: dict
    poly: SymPoly

    def describe(self) -> dict:
        out = {"kind": self.kind, "polynomial": self.poly.to_text()}
        out.update({k: _num(v) for k, v in self.params.items()})
        return out


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a number: {text!r}") from exc


def _keyvals(items, names) -> dict:
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep or key.strip() not in names:
            raise ParseError(f"expected {'/'.join(n + '=...' for n in names)}, got {item!r}")
        out[key.strip()] = val
    missing = [n for n in names if n not in out]
    if missing:
        raise ParseError(f"missing {', '.join(missing)}")
    return out


def family_from_args(args) -> Family:
    if args.m3 is not None:
        kv = _keyvals(args.m3, ("a", "b"))
        a, b = _fraction(kv["a"]), _fraction(kv["b"])
        return Family("m3", {"a": a, "b": b}, SymPoly.m3(a, b))
    if args.grz is not None:
        kv = _keyvals(args.grz, ("c", "d"))
        c, d = _fraction(kv["c"]), _fraction(kv["d"])
        if d.denominator != 1 or d < 2:
            raise ParseError("d must be an integer >= 2")
        return Family("grz", {"c": c, "d": int(d)}, SymPoly.grz(c, int(d)))
    if args.poly is not None:
        return Family("poly", {}, SymPoly.parse(args.poly))
    raise ParseError("one of --m3, --grz, --poly is required")


def default_n(fam: Family, method: str = "auto") -> int:
    d = fam.poly.d
    if d == 4:
        recurrent = fam.kind == "grz" and method != "convolution"
        return 200 if recurrent else 12
    return {2: 30, 3: 30}.get(d, 6)


# -- JSON helpers ----------------------------------------------------------

def _num(v):
    """Exact numbers as decimal strings, floats as JSON numbers."""
    if isinstance(v, bool):
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else str(v)
    if isinstance(v, complex):
        return [_num(v.real), _num(v.imag)]
    if isinstance(v, (mpmath.mpf, mpmath.mpc)):
        return _num(complex(v) if isinstance(v, mpmath.mpc) else float(v))
    if isinstance(v, float):
        return v if math.isfinite(v) else None
    return v


def _dump(record: dict) -> str:
    return json.dumps(record, indent=2, sort_keys=True) + "\n"


def _inputs(args, fam: Family, n_max: int | None = None) -> dict:
    out = {"command": args.command, "family": fam.describe(), "seed": args.seed}
    if n_max is not None:
        out["n_max"] = n_max
    return out


def _regime(fam: Family) -> smoothasm.RegimeLabel | None:
    if fam.kind == "m3":
        return smoothasm.classify_m3(fam.params["a"], fam.params["b"])
    if fam.kind == "grz":
        return smoothasm.classify_grz(fam.params["c"], fam.params["d"])
    return None


def _boundary_distance(fam: Family):
    if fam.kind == "grz":
        return fam.params["c"] - critical.critical_parameter(fam.params["d"])
    if fam.kind == "m3":
        a, b = fam.params["a"], fam.params["b"]
        if a <= -3:
            return b + 9 * a
        if a >= 1:
            return b + a**3
        return smoothasm.m3_boundary_distance(a, b)
    return None


def _estimate(fam: Family) -> smoothasm.AsymptoticEstimate:
    if fam.kind == "m3":
        return smoothasm.asm_m3(fam.params["a"], fam.params["b"])
    if fam.kind == "grz":
        try:
            return smoothasm.asm_grz(fam.params["c"], fam.params["d"])
        except CriticalParameter as exc:
            return smoothasm.AsymptoticEstimate((), False, f"BoundaryDegenerate({exc})")
    return smoothasm.diagonal_estimate(fam.poly)


def _term_record(t: smoothasm.AsymptoticTerm) -> dict:
    return {
        "base": _num(complex(t.base)),
        "power": _num(t.power),
        "constant": _num(complex(t.constant)),
        "source_point": [_num(complex(v)) for v in t.source_point],
    }


def _sequence(fam: Family, n_max: int, method: str = "auto") -> list:
    return oracle.diagonal_sequence(fam.poly, n_max, method)


def _empirical_growth(seq) -> float | None:
    if len(seq) < 3 or all(v == 0 for v in seq[1:]):
        return None
    return math.exp(smoothasm.extrapolated_log_growth(seq))


# -- commands ----------------------------------------------------------------

def cmd_classify(args) -> dict:
    fam = family_from_args(args)
    label = _regime(fam)
    rec = _inputs(args, fam)
    if label is None:
        # general polynomial: the leading terms decide the regime
        est = smoothasm.diagonal_estimate(fam.poly)
        if not est.valid:
            label = smoothasm.RegimeLabel(smoothasm.Regime.BOUNDARY, est.degenerate_reason)
        elif any(abs(complex(t.base).imag) > 1e-12 * abs(t.base) for t in est.terms):
            label = smoothasm.RegimeLabel(smoothasm.Regime.SIGN_CHANGES)
        elif all(complex(t.constant).real > 0 and complex(t.base).real > 0 for t in est.terms):
            label = smoothasm.RegimeLabel(smoothasm.Regime.EVENTUALLY_POSITIVE)
        else:
            label = smoothasm.RegimeLabel(smoothasm.Regime.SIGN_CHANGES)
        rec["warnings"] = ["label read from the leading terms only; " + w for w in est.warnings]
    rec["regime"] = str(label)
    rec["boundary_distance"] = _num(_boundary_distance(fam))
    return rec


def cmd_asymptotics(args) -> dict:
    fam = family_from_args(args)
    n_max = args.n or default_n(fam)
    est = _estimate(fam)
    label = _regime(fam)
    seq = _sequence(fam, n_max)
    rec = _inputs(args, fam, n_max)
    rec["regime"] = str(label) if label else None
    rec["valid"] = est.valid
    rec["degenerate_reason"] = est.degenerate_reason
    rec["terms"] = [_term_record(t) for t in est.terms]
    rec["oracle"] = [_num(v) for v in seq]
    rec["oracle_sign_changes"] = oracle.sign_changes(seq)
    rec["warnings"] = list(est.warnings)
    rec["empirical_growth"] = _num(_empirical_growth(seq))
    if est.valid and est.terms:
        lo = min(15, n_max)
        table = []
        for n in range(1, n_max + 1):
            err = est.relative_error(n, seq[n])
            table.append({"n": n, "exact": _num(seq[n]),
                          "estimate": _num(float(mpmath.re(est.evaluate(n)))), "rel_error": err})
        window = [row for row in table if row["n"] >= lo]
        rec["comparison"] = table
        rec["agreement"] = {
            "n_from": lo,
            "max_rel_error": max(row["rel_error"] for row in window),
            "rel_error_at_n_max": window[-1]["rel_error"],
            "max_n_times_error": max(row["n"] * row["rel_error"] for row in window),
        }
    return rec


def cmd_diagonal(args) -> str:
    fam = family_from_args(args)
    n_max = args.n or default_n(fam, args.method)
    return oracle.format_sequence(_sequence(fam, n_max, args.method))


def cmd_growth(args) -> dict:
    fam = family_from_args(args)
    n_max = args.n or default_n(fam, args.method)
    d = fam.poly.d
    rec = _inputs(args, fam, n_max)
    if fam.kind == "grz":
        c = fam.params["c"]
        try:
            predicted = smoothasm.growth_rate(c, d, per_step=True)
        except CriticalParameter:
            predicted = None
            rec["warnings"] = ["critical parameter: no smooth prediction; limiting value is (d-1)^d"]
            rec["limiting_growth"] = float((d - 1) ** d)
        scan = smoothasm.growth_drop_scan(c, d, n_max, args.method)
        rec.update({
            "predicted_growth": predicted,
            "empirical_growth": scan.per_step,
            "empirical_growth_per_coordinate": scan.empirical_growth,
            "raw_growth": scan.raw_growth ** d,
            "drop_detected": scan.drop_detected,
            "method": scan.method,
        })
        return rec
    rs = find_roots(sl.codiagonal(fam.poly))
    rho = abs(minimal_modulus_roots(rs)[0][0])
    seq = _sequence(fam, n_max, args.method)
    g = _empirical_growth(seq)
    rec.update({
        "predicted_growth": rho ** -d,
        "empirical_growth": g,
        "empirical_growth_per_coordinate": g ** (1 / d) if g else None,
        "method": "convolution",
    })
    return rec


def _sweep_row(point) -> list:
    a, b = point
    label = smoothasm.classify_m3(a, b)
    red = "" if a > 1 else repr(2 - 3 * float(a) + 2 * float(1 - a) ** 1.5)
    return [_csv_num(a), _csv_num(b), str(label), _csv_num(-9 * a), red, _csv_num(-a**3)]


def _csv_num(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else repr(float(v))


def linspace(lo: Fraction, hi: Fraction, steps: int) -> list[Fraction]:
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def cmd_sweep(args) -> str:
    na, nb = (args.steps * 2)[:2]
    if na < 1 or nb < 1 or na * nb > MAX_GRID:
        raise ParseError(f"grid must have between 1 and {MAX_GRID} points")
    a_vals = linspace(_fraction(args.a_range[0]), _fraction(args.a_range[1]), na)
    b_vals = linspace(_fraction(args.b_range[0]), _fraction(args.b_range[1]), nb)
    points = [(a, b) for a in a_vals for b in b_vals]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_sweep_row, points, chunksize=256))
    else:
        rows = [_sweep_row(p) for p in points]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "b", "regime", "bound_blue", "bound_red", "bound_green"])
    w.writerows(rows)
    return buf.getvalue()


def cmd_verify(args) -> int:
    results = verify.run_checks(args.seed, args.inject_fault)
    text = verify.format_report(results)
    _emit(text, args.output)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(verify.json_report(results, args.seed, args.inject_fault))
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


# -- argument parsing ----------------------------------------------------------

def _add_family(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--m3", nargs=2, metavar="K=V", help="1 - e1 + a e2 + b e3, e.g. a=0 b=4")
    g.add_argument("--grz", nargs=2, metavar="K=V", help="1 - e1 + c e_d, e.g. c=23 d=4")
    g.add_argument("--poly", metavar="TEXT", help='e-basis text, e.g. "d=3; e0=1, e1=-1, e3=4"')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symdiag", description=__doc__.split("\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-o", "--output", help="write to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="positivity regime")
    _add_family(p)
    p = sub.add_parser("asymptotics", parents=[common], help="leading terms vs the oracle")
    _add_family(p)
    p.add_argument("--n", type=int, help="largest index compared")
    for name, helptext in (("diagonal", "exact diagonal coefficients"),
                           ("growth", "exponential growth and drop detection")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        _add_family(p)
        p.add_argument("--n", type=int)
        p.add_argument("--method", choices=("auto", "recurrence", "convolution"), default="auto")

    p = sub.add_parser("sweep", parents=[common], help="M3 regime map as CSV")
    p.add_argument("--a-range", nargs=2, default=["-5", "4"], metavar=("LO", "HI"))
    p.add_argument("--b-range", nargs=2, default=["-30", "45"], metavar=("LO", "HI"))
    p.add_argument("--steps", nargs="+", type=int, default=[10], metavar="N",
                   help="grid points per axis (one value for both, or two)")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("verify", parents=[common], help="run the self-check suite")
    p.add_argument("--json", metavar="PATH", help="also write a JSON report")
    p.add_argument("--inject-fault", choices=verify.FAULTS, help="corrupt an input on purpose")
    return parser


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        handler = {"classify": cmd_classify, "asymptotics": cmd_asymptotics,
                   "diagonal": cmd_diagonal, "growth": cmd_growth, "sweep": cmd_sweep}[args.command]
        out = handler(args)
        _emit(out if isinstance(out, str) else _dump(out), args.output)
        return EXIT_OK
    except ParseError as exc:
        print(f"symdiag: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetExceeded, OracleUnavailable) as exc:
        print(f"symdiag: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SymDiagError as exc:
        print(f"symdiag: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
