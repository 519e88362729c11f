"""Command-line interface: ``regprop exact|bound|verify|table|oracle``.

Exit codes: 0 on success, 1 when a verified inequality or fixture fails,
2 on invalid input.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .arith import is_prime_power, to_ratio
from .bounds import (
    TABLE_ROWS,
    BoundResult,
    corollary_constants,
    h_table,
    lower_bound,
    upper_bound_p2,
)
from .engine import proportion
from .errors import BudgetExceeded, OutOfRange, RegPropError, Unsupported, UnsupportedExact
from .sweeps import SUITES, adversarial_case, run_suite
from .tori import Family, GroupSpec

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2

CORO_FAMILIES = [Family.Sp, Family.SOodd, Family.OmegaOdd, Family.SOplus, Family.SOminus,
                 Family.OmegaPlus, Family.OmegaMinus]


def parse_q(text: str) -> int:
    """An integer, or ``p^e`` for large prime powers."""
    text = text.strip()
    if "^" in text:
        base, exp = text.split("^", 1)
        return int(base) ** int(exp)
    return int(text)


def _ratio_json(x) -> dict:
    if isinstance(x, Fraction):
        return {"num": str(x.numerator), "den": str(x.denominator), "approx": float(x)}
    return {"num": None, "den": None, "approx": float(x)}


def _family_arg(text: str) -> tuple[Family, bool]:
    """Family name, with a leading ``P`` (PSL, PSU, PSp) meaning the projective group."""
    projective = text in ("PSL", "PSU", "PSp")
    return Family.parse(text), projective


def _spec_from_args(args, need_q: bool = True) -> GroupSpec | None:
    family, projective = _family_arg(args.family)
    projective = projective or bool(getattr(args, "projective", False))
    if args.n is None and args.d is None:
        raise OutOfRange("give --n (rank) or --d (dimension)")
    n = args.n if args.n is not None else family.rank_from_dimension(args.d)
    if args.n is not None and args.d is not None and family.dimension(n) != args.d:
        raise OutOfRange(f"--n {args.n} and --d {args.d} disagree for {family.value}")
    if args.q is None:
        if need_q:
            raise OutOfRange("--q is required")
        return None
    return GroupSpec(family, n, args.q, projective)


def _rank_from_args(args) -> tuple[Family, int, bool]:
    family, projective = _family_arg(args.family)
    if args.n is None and args.d is None:
        raise OutOfRange("give --n (rank) or --d (dimension)")
    n = args.n if args.n is not None else family.rank_from_dimension(args.d)
    return family, n, projective


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


# ---------------------------------------------------------------- subcommands


def cmd_exact(args) -> int:
    spec = _spec_from_args(args)
    try:
        result = proportion(spec, args.r, args.method)
    except UnsupportedExact as exc:
        raise UnsupportedExact(f"{exc}. Try: regprop bound --family {args.family} --n {spec.n} "
                               f"--q {spec.q} --r {args.r} --kind lower") from None
    _emit({
        "group": spec.label,
        "spec": {"family": spec.family.value, "n": spec.n, "d": spec.d, "q": str(spec.q),
                 "projective": spec.projective},
        "r": args.r,
        "proportion": {"num": str(result.value.numerator), "den": str(result.value.denominator),
                       "approx": float(result.value)},
        "method": result.method,
        "note": result.note,
    })
    return EXIT_OK


def _bound_record(res: BoundResult) -> dict:
    cond = {k: (str(v) if isinstance(v, Fraction) else v)
            for k, v in res.conditions.items()}
    return {"kind": res.kind, "value": _ratio_json(res.value), "source": res.source, "conditions": cond}


def cmd_bound(args) -> int:
    family, n, projective = _rank_from_args(args)
    source = args.source or ("lemma" if args.q is not None else "table1")
    if source == "corollary":
        res = corollary_constants(family, n, args.r, args.kind)
    elif args.kind == "lower" and source == "table1":
        res = h_table(family, args.r, n)
    elif args.kind == "lower":
        spec = _spec_from_args(args)
        res = lower_bound(spec, args.r)
    else:
        if source == "table1":
            raise Unsupported("the table holds lower bounds only; use --source lemma or corollary for upper bounds")
        if args.r != 2:
            raise Unsupported(f"no upper bound for odd r={args.r}; upper bounds cover r=2 only")
        spec = _spec_from_args(args)
        if spec.family.is_linear_type and not spec.projective:
            spec = GroupSpec(spec.family, spec.n, spec.q, True)
        res = upper_bound_p2(spec)
    record = {"family": family.value, "n": n, "r": args.r, "source_kind": source, **_bound_record(res)}
    if args.q is not None:
        record["q"] = str(args.q)
    _emit(record)
    return EXIT_OK


def _int_set(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        values = tuple(sorted({int(x) for x in text.split(",") if x.strip()}))
    except ValueError:
        raise OutOfRange(f"bad integer list {text!r}") from None
    if not values:
        raise OutOfRange("empty list")
    return values


def _suite_kwargs(args) -> dict:
    suite = args.suite
    qset, rset, pset = _int_set(args.qset), _int_set(args.rset), _int_set(args.pset)
    for q in qset or ():
        is_prime_power(q)
    kw: dict = {}
    if suite in ("table1", "engines"):
        if args.nmax is not None:
            if args.nmax < 2 or args.nmax > 200:
                raise OutOfRange("--nmax must lie in 2..200 for this suite")
            kw["nmax"] = args.nmax
        if qset:
            kw["qset"] = qset
        if rset:
            kw["rset"] = rset
    elif suite == "adversarial":
        if args.nmax is not None:
            kw["dmax"] = args.nmax
        if rset:
            kw["rset"] = rset
        if pset:
            kw["pset"] = pset
        if args.eps is not None:
            kw["eps"] = to_ratio(args.eps)
    elif suite == "upper":
        if args.nmax is not None:
            kw["dmax"] = args.nmax
        if qset:
            if any(q % 2 == 0 for q in qset):
                raise OutOfRange("upper bounds need odd q")
            kw["qset"] = qset
    elif suite == "alpha":
        if args.nmax is not None:
            kw["dmax"] = args.nmax
    elif suite == "bounds-identities":
        if args.nmax is not None:
            kw["form_nmax"] = kw["godd_nmax"] = min(args.nmax, 200)
            kw["product_nmax"] = min(args.nmax, 100)
            kw["npi_nmax"] = min(args.nmax, 500)
    return kw


def cmd_verify(args) -> int:
    if args.suite == "adversarial" and args.family is not None:
        # a single (family, dimension, r, p) case
        family, n, _ = _rank_from_args(args)
        if args.r is None or args.p is None:
            raise OutOfRange("a single adversarial case needs --r and --p")
        eps = to_ratio(args.eps or "1/100")
        from .sweeps import SweepReport

        report = SweepReport("adversarial", {"family": family.value, "n": n, "r": args.r, "p": args.p,
                                             "eps": str(eps)})
        report.records.append(adversarial_case(family, n, args.r, args.p, eps))
    else:
        kw = _suite_kwargs(args)
        grid = {k: (list(v) if isinstance(v, tuple) else str(v) if isinstance(v, Fraction) else v)
                for k, v in kw.items()}
        report = run_suite(args.suite, grid=grid or {"default": True}, **kw)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    stem = args.suite
    report.write(out / f"{stem}.csv", out / f"{stem}.json")
    counts = report.counts
    print(f"{args.suite}: {len(report.records)} points, {counts['pass']} pass, {counts['fail']} fail, "
          f"{counts['skip']} skip, {counts['info']} info -> {out / (stem + '.csv')}")
    for v in report.violations[:20]:
        print(f"VIOLATION {v.check} {v.group or v.family} n={v.n} q={v.q} r={v.r}: {v.value} {v.relation} {v.reference}")
    return report.exit_code


def _table_main(nmax: int) -> list[dict]:
    rows = []
    seen = []
    for fam, *_ in TABLE_ROWS:
        if fam in seen:
            continue
        seen.append(fam)
        for rclass, r in (("r=2", 2), ("r odd", 3)):
            for n in range(fam.min_rank, nmax + 1):
                res = h_table(fam, r, n)
                rows.append({"family": fam.value, "r": rclass, "n": n, "value": float(res.value),
                             "exact": str(res.value), "source": res.source})
    return rows


def _table_corollaries(nmax: int) -> list[dict]:
    rows = []
    for fam in CORO_FAMILIES:
        for rclass, r in (("r=2", 2), ("r odd", 3)):
            for kind in ("lower", "upper"):
                for n in range(2, nmax + 1):
                    res = corollary_constants(fam, n, r, kind)
                    rows.append({"family": f"{fam.value} {kind}", "r": rclass, "n": n, "value": float(res.value),
                                 "exact": "", "source": res.source})
    return rows


def cmd_table(args) -> int:
    if args.nmax < 1:
        raise OutOfRange("--nmax must be at least 1")
    rows = _table_main(args.nmax) if args.which == "main" else _table_corollaries(args.nmax)
    ns = list(range(1, args.nmax + 1))
    keys = []
    grid: dict = {}
    for row in rows:
        key = (row["family"], row["r"])
        if key not in grid:
            keys.append(key)
            grid[key] = {}
        grid[key][row["n"]] = row["value"]
    label_w = max([len(f"{f} ({r})") for f, r in keys] + [10])
    print(" " * label_w + "".join(f"{('n=' + str(n)):>12}" for n in ns))
    for f, r in keys:
        cells = "".join(f"{grid[f, r][n]:>12.6g}" if n in grid[f, r] else f"{'':>12}" for n in ns)
        print(f"{f + ' (' + r + ')':<{label_w}}" + cells)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=["family", "r", "n", "value", "exact", "source"], lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracle import dump_fixtures, fixture_spec, fixtures_path, load_fixtures, regenerate_fixtures

    path = Path(args.fixtures) if args.fixtures else Path(str(fixtures_path()))
    stored = load_fixtures(path) if path.exists() else []
    budget = args.budget
    if budget not in ("tiny", "small", "default"):
        try:
            budget = int(budget)
        except ValueError:
            raise OutOfRange(f"bad budget {args.budget!r}") from None
    if not args.regen:
        bad = 0
        for rec in stored:
            spec, r, value = fixture_spec(rec)
            engine = proportion(spec, r).value
            ok = engine == value
            bad += not ok
            print(f"{rec['group']:<12} r={r}  fixture {value}  engine {engine}  {'ok' if ok else 'MISMATCH'}")
        return EXIT_VIOLATION if bad else EXIT_OK
    start = time.perf_counter()
    failures: list = []
    fresh = regenerate_fixtures(budget, failures=failures)
    elapsed = time.perf_counter() - start
    for label, exc in failures:
        print(f"BudgetExceeded for {label}: {exc}", file=sys.stderr)
    old = {(r["group"], r["r"]): r for r in stored}
    mismatches = 0
    for rec in fresh:
        prev = old.get((rec["group"], rec["r"]))
        value = f"{rec['num']}/{rec['den']}"
        if prev is not None and (prev["num"], prev["den"]) != (rec["num"], rec["den"]):
            mismatches += 1
            print(f"MISMATCH {rec['group']} r={rec['r']}: stored {prev['num']}/{prev['den']}, brute force {value}")
        else:
            print(f"{rec['group']:<12} r={rec['r']}  {value}")
    print(f"{len(fresh)} fixtures regenerated in {elapsed:.1f}s")
    if mismatches:
        return EXIT_VIOLATION
    if failures:
        print("regprop: budget exhausted; fixture file left unchanged", file=sys.stderr)
        return EXIT_INPUT
    out = Path(args.out) if args.out else path
    dump_fixtures(fresh, out)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _add_group_flags(p: argparse.ArgumentParser, q_required: bool = False) -> None:
    p.add_argument("--family", required=True, help="SL, SU, Sp, SOodd, SOplus, SOminus, OmegaOdd, OmegaPlus, "
                                                    "OmegaMinus (PSL/PSU/PSp for projective groups)")
    p.add_argument("--n", type=int, help="Lie rank")
    p.add_argument("--d", type=int, help="dimension of the natural module")
    p.add_argument("--q", type=parse_q, required=q_required, help="field size, an integer or p^e")
    p.add_argument("--projective", action="store_true", help="quotient by the centre")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="regprop", description="Proportions of r-regular elements "
                                                                 "in finite classical groups")
    parser.add_argument("--version", action="version", version=f"regprop {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="exact proportion as a JSON record")
    _add_group_flags(p, q_required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--method", choices=["enum", "dp", "auto"], default="auto")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("bound", help="lower or upper bound as a JSON record")
    _add_group_flags(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--kind", choices=["lower", "upper"], required=True)
    p.add_argument("--source", choices=["table1", "lemma", "corollary"])
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="run a verification sweep, writing CSV and JSON")
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.add_argument("--nmax", type=int)
    p.add_argument("--qset")
    p.add_argument("--rset")
    p.add_argument("--pset")
    p.add_argument("--eps")
    p.add_argument("--family")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--outdir", default=".", help="directory for <suite>.csv and <suite>.json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", help="print the lower-bound table or the power-law envelopes")
    p.add_argument("--which", choices=["main", "corollaries"], default="main")
    p.add_argument("--nmax", type=int, default=10)
    p.add_argument("--csv", help="also write the values to this CSV file")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("oracle", help="check or regenerate the brute-force fixtures")
    p.add_argument("--regen", action="store_true", help="rebuild every fixture by brute force")
    p.add_argument("--budget", default="default", help="tiny, small, default or a maximum group order")
    p.add_argument("--fixtures", help="fixture file to compare against (default: the packaged file)")
    p.add_argument("--out", help="where to write regenerated fixtures (default: the compared file)")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"regprop: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (RegPropError, ValueError) as exc:
        print(f"regprop: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
