"""
Command-line interface.

    tpsig construct gauss --p 2 --m 3 [--out set.json]
    tpsig construct cyclotomic --p 13 --m 1 --e 3
    tpsig eval --in set.json [--format json|table]
    tpsig bounds --n 3 --m 1 [--alphabet qary] [--k 3] [--lam 0.6667] [--format table|json|csv]
    tpsig bridge --in set.json --kind full|phase --out big.json [--check]
    tpsig sweep --construction gauss|cyclotomic --q-max 64 [--e-max 4] --out sweep.csv [--timing]

Exit codes: 0 success, 2 usage/parameter error, 3 input-data violation,
4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from types import SimpleNamespace

from . import __version__
from ._json import dumps17, format_float
from .bounds import ALPHABETS, BoundQuery, evaluate_bounds, judge
from .constructions import (
    BadDivisor,
    construct_cyclotomic,
    construct_gauss,
    cyclotomic_parameters,
    lambda_formula,
    prime_powers,
)
from .finite_field import FieldTooLarge, NonPrimeP
from .signals import (
    LAMBDA_GUARD,
    DegenerateLambda,
    DuplicateSignals,
    MalformedSetFile,
    NonUnitSignal,
    PeriodMismatch,
    _threads,
    bridge_full,
    bridge_phase,
    nu_of,
    profile,
    set_from_json,
    set_to_json,
    theta_of,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_VERIFY = 0, 2, 3, 4
SWEEP_Q_LIMIT = 512
BRIDGE_TOL = 1e-9
SWEEP_SCHEMA = "tpsig-sweep/1"
SWEEP_COLUMNS = [
    "p", "m", "e", "n", "M", "lambda_measured", "lambda_formula",
    "bound_best_name", "bound_best_value", "verdict", "runtime_ms",
]


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_USAGE, message)


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load_set(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_USAGE, f"cannot read {path}: {exc.strerror}") from exc
    try:
        return set_from_json(text)
    except MalformedSetFile as exc:
        raise CliError(EXIT_USAGE, str(exc)) from exc
    except NonUnitSignal as exc:
        raise CliError(EXIT_DATA, f"non-unit signal: index {exc.index}, norm {exc.norm:.12g}") from exc
    except (DuplicateSignals, PeriodMismatch, ValueError) as exc:
        raise CliError(EXIT_DATA, str(exc)) from exc


def alphabet_for(meta: dict) -> str:
    """Alphabet class of a stored set: Gauss-sum sets carry p-th roots of unity."""
    fld = meta.get("field") if isinstance(meta, dict) else None
    if not fld:
        return "complex"
    return "binary" if int(fld["p"]) == 2 else "qary"


# --- subcommands ---

def cmd_construct(args) -> int:
    try:
        if args.kind == "gauss" or args.e == 1:
            S = construct_gauss(args.p, args.m)
        else:
            if args.e is None:
                raise CliError(EXIT_USAGE, "cyclotomic construction needs --e")
            S = construct_cyclotomic(args.p, args.m, args.e)
    except (NonPrimeP, FieldTooLarge, BadDivisor) as exc:
        raise CliError(EXIT_USAGE, str(exc)) from exc
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from exc
    _emit(set_to_json(S), args.out)
    return EXIT_OK


def _profile_table(d: dict) -> str:
    lines = [f"n          {d['n']}", f"M          {d['M']}"]
    for key in ("nu", "theta", "lambda", "papr_max"):
        lines.append(f"{key:<10} {d[key]:.9f}")
    for key in ("witness_nu", "witness_theta", "witness_lambda"):
        w = d[key]
        lines.append(f"{key:<15} {'-' if w is None else tuple(w)}")
    return "\n".join(lines) + "\n"


def cmd_eval(args) -> int:
    S = _load_set(args.inp)
    d = profile(S).to_dict()
    _emit(dumps17(d) + "\n" if args.format == "json" else _profile_table(d), None)
    return EXIT_OK


def cmd_bounds(args) -> int:
    try:
        q = BoundQuery(args.n, args.m, args.alphabet, args.k)
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from exc
    if args.lam is not None and not 0 <= args.lam <= 1:
        raise CliError(EXIT_USAGE, "--lam must lie in [0, 1]")
    rep = evaluate_bounds(q) if args.lam is None else judge(SimpleNamespace(lam=args.lam), q)
    text = {"json": rep.to_json, "csv": rep.to_csv, "table": rep.to_table}[args.format]()
    _emit(text, None)
    return EXIT_OK


def cmd_bridge(args) -> int:
    S = _load_set(args.inp)
    lam = profile(S).lam
    try:
        T = bridge_full(S, lam) if args.kind == "full" else bridge_phase(S, lam)
    except DegenerateLambda as exc:
        raise CliError(EXIT_DATA, str(exc)) from exc
    _emit(set_to_json(T), args.out)
    if args.check:
        target, label = (nu_of(T)[0], "nu") if args.kind == "full" else (theta_of(T)[0], "theta")
        diff = abs(target - lam)
        sys.stdout.write(
            f"source_lambda {lam:.12f}\ntarget_{label} {target:.12f}\nabs_diff {diff:.3e}\n"
            f"size {T.M} (n = {T.n})\n"
        )
        if diff > BRIDGE_TOL:
            sys.stderr.write(f"bridge check failed: |{label} - lambda| = {diff:.3e} > {BRIDGE_TOL}\n")
            return EXIT_VERIFY
    return EXIT_OK


def sweep_cells(construction: str, q_max: int, e_max: int | None = None) -> list[tuple[int, int, int]]:
    if construction == "gauss":
        q_min = 4 if q_max >= 4 else 3
        return [(p, m, 1) for _, p, m in prime_powers(q_min, q_max)]
    return cyclotomic_parameters(q_max, e_max)


def sweep_row(p: int, m: int, e: int, timing: bool = False) -> dict:
    t0 = time.perf_counter()
    S = construct_gauss(p, m) if e == 1 else construct_cyclotomic(p, m, e)
    prof = profile(S)
    rep = judge(prof, BoundQuery(S.n, S.M, alphabet_for(S.meta)))
    ms = (time.perf_counter() - t0) * 1e3
    best = rep.best_lower
    return {
        "p": p, "m": m, "e": e, "n": S.n, "M": S.M,
        "lambda_measured": prof.lam,
        "lambda_formula": lambda_formula(S.n, e),
        "bound_best_name": best.name if best else "",
        "bound_best_value": best.value if best else None,
        "verdict": rep.verdict,
        "runtime_ms": ms if timing else None,
        "violations": rep.violations,
    }


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write(f"# {SWEEP_SCHEMA}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        out = []
        for c in SWEEP_COLUMNS:
            v = r[c]
            if v is None:
                out.append("")
            elif isinstance(v, float):
                out.append(f"{v:.3f}" if c == "runtime_ms" else format_float(v))
            else:
                out.append(str(v))
        w.writerow(out)
    return buf.getvalue()


def cmd_sweep(args) -> int:
    if args.q_max > SWEEP_Q_LIMIT:
        raise CliError(EXIT_USAGE, f"--q-max {args.q_max} exceeds the runtime guard {SWEEP_Q_LIMIT}")
    if args.q_max < 3:
        raise CliError(EXIT_USAGE, "--q-max must be >= 3")
    cells = sweep_cells(args.construction, args.q_max, args.e_max)
    workers = min(_threads(), max(1, len(cells)))
    with ThreadPoolExecutor(workers) as ex:
        rows = list(ex.map(lambda c: sweep_row(*c, timing=args.timing), cells))
    rows.sort(key=lambda r: (r["p"] ** r["m"], r["e"]))
    _emit(sweep_csv(rows), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="tpsig", description="Unit time-phase signal sets from Gauss sums.")
    ap.add_argument("--version", action="version", version=f"tpsig {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="build a Gauss-sum signal set")
    c.add_argument("kind", choices=["gauss", "cyclotomic"])
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--e", type=int)
    c.add_argument("--out")
    c.set_defaults(func=cmd_construct)

    e = sub.add_parser("eval", help="correlation profile of a stored set")
    e.add_argument("--in", dest="inp", required=True)
    e.add_argument("--format", choices=["json", "table"], default="table")
    e.set_defaults(func=cmd_eval)

    b = sub.add_parser("bounds", help="bound table for (n, M)")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--m", type=int, required=True, help="set size M")
    b.add_argument("--alphabet", choices=list(ALPHABETS), default="complex")
    b.add_argument("--k", type=int)
    b.add_argument("--lam", type=float, help="measured lambda, enables the LP bounds on M")
    b.add_argument("--format", choices=["json", "table", "csv"], default="table")
    b.set_defaults(func=cmd_bounds)

    r = sub.add_parser("bridge", help="expand a set with the full or phase bridge")
    r.add_argument("--in", dest="inp", required=True)
    r.add_argument("--kind", choices=["full", "phase"], required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--check", action="store_true")
    r.set_defaults(func=cmd_bridge)

    s = sub.add_parser("sweep", help="construct, profile and judge a parameter grid")
    s.add_argument("--construction", choices=["gauss", "cyclotomic"], required=True)
    s.add_argument("--q-max", type=int, required=True)
    s.add_argument("--e-max", type=int)
    s.add_argument("--out", required=True)
    s.add_argument("--timing", action="store_true", help="fill runtime_ms (makes output non-reproducible)")
    s.set_defaults(func=cmd_sweep)
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"tpsig: error: {exc}\n")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
