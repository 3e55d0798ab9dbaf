"""Command-line front end: ``wkit {surface,check,eval,table1,asymptotics,cache}``."""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from .errors import (
    CapabilityError,
    ConfigurationError,
    IncompleteRuleSetError,
    MissingEntryError,
    RuleSetError,
    UnsupportedError,
    WkitError,
)
from .expr import Expr
from .invariants import (
    InvariantDescriptor,
    InvariantValue,
    Provenance,
    closed_form_equal_genus,
    closed_form_pencil,
    descriptor,
    gw_bound_check,
    validate_hypotheses,
)
from .lattice import DivisorClass, SurfaceLattice, arithmetic_genus, intersect, minus_one_curves, parse_class
from .real import RealSurfaceModel, catalog, enumerate_distributions, parse_rx
from .reductions import asymptotic_probe, normalize_to_degree2, table1_descriptor, transfer_to_pair
from .store import BundledData, CacheFile, InvariantLedger, RunReport, cache_dir
from .wnumbers import Memo, RuleSet, evaluate, load_bundled_rules, load_rule_spec

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVALID = 2
EXIT_MISMATCH = 3
EXIT_CAPABILITY = 4


# -- argument helpers ------------------------------------------------------


def parse_class_arg(text: str, lattice: SurfaceLattice) -> DivisorClass:
    """Coordinates ``"d;m1,..."`` or an expression such as ``"-2K-E6"`` or ``"3L-E1"``."""
    if ";" in text or re.fullmatch(r"\s*-?\d+\s*", text):
        return parse_class(text, lattice.k)
    src = re.sub(r"(\d)\s*([KLE])", r"\1*\2", text)
    env: dict[str, Any] = {"K": lattice.K, "L": lattice.L}
    env.update({f"E{i}": lattice.E(i) for i in range(1, lattice.k + 1)})
    try:
        value = Expr(src)(env)
    except RuleSetError as exc:
        raise ConfigurationError(f"cannot read class {text!r}: {exc}") from None
    if not isinstance(value, DivisorClass):
        raise ConfigurationError(f"{text!r} does not describe a divisor class")
    return value


def resolve_model(args: argparse.Namespace, bundled: BundledData) -> RealSurfaceModel:
    if args.degree is None:
        raise ConfigurationError("--degree is required")
    if args.rx is None:
        options = [m for m in catalog() if m.degree == args.degree]
        if len(options) != 1:
            labels = ", ".join(m.rx for m in options) or "none"
            raise ConfigurationError(f"degree {args.degree} needs --rx (catalogued: {labels})")
        args.rx = options[0].rx
    parse_rx(args.rx)
    return bundled.model(args.degree, args.rx)


def build_descriptor(args: argparse.Namespace, bundled: BundledData) -> InvariantDescriptor:
    model = resolve_model(args, bundled)
    if args.D is None:
        raise ConfigurationError("--D is required")
    D = parse_class_arg(args.D, model.lattice)
    if args.F is None:
        g = 1 if args.g is None else args.g
        selection: Any = tuple(range(g + 1))
    else:
        selection = args.F
    r = [int(x) for x in args.r.split(",")] if args.r else None
    desc = descriptor(model, D, selection, args.eps, r, args.m or 0, args.phi)
    if args.g is not None and desc.g != args.g:
        raise ConfigurationError(f"--g {args.g} disagrees with --F {args.F} (genus {desc.g})")
    return desc


def load_rules(spec: str) -> RuleSet:
    path = Path(spec)
    if path.exists():
        return load_rule_spec(path.read_text())
    if spec.endswith(".json") or "/" in spec:
        raise ConfigurationError(f"rule file {spec} does not exist")
    return load_bundled_rules(spec)


def make_memo(args: argparse.Namespace, rules: RuleSet) -> tuple[Memo, CacheFile | None]:
    directory = cache_dir(args.cache)
    if directory is None:
        return Memo(), None
    cache = CacheFile(directory)
    return Memo(cache.load(rules.hash), cache.sink(rules.hash)), cache


def load_oracle(spec: str | None, bundled: BundledData) -> InvariantLedger:
    if spec is None or spec == "bundled":
        return bundled.table1_ledger()
    return InvariantLedger.load(spec)


# -- output ----------------------------------------------------------------


def emit(rows: list[dict[str, Any]], fmt: str, out=None, title: str | None = None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(rows if title is None else {title: rows}, indent=2) + "\n")
        return
    if not rows:
        return
    fields = list(rows[0])
    if fmt == "csv":
        writer = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _cell(v) for k, v in row.items()})
        return
    widths = {f: max(len(f), *(len(_cell(r[f])) for r in rows)) for f in fields}
    out.write("  ".join(f.ljust(widths[f]) for f in fields).rstrip() + "\n")
    for row in rows:
        out.write("  ".join(_cell(row[f]).ljust(widths[f]) for f in fields).rstrip() + "\n")


def _cell(v: Any) -> str:
    if isinstance(v, (list, tuple)):
        return ";".join(_cell(x) for x in v)
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return "" if v is None else str(v)


# -- commands --------------------------------------------------------------


def cmd_surface(args, bundled: BundledData) -> int:
    models = catalog() if args.degree is None else [resolve_model(args, bundled)]
    rows = []
    for m in models:
        S = m.lattice
        rows.append({
            "degree": m.degree,
            "rx": m.rx,
            "components": [f"F{i}:{c.topo_type.value}(chi={c.euler_char})" for i, c in enumerate(m.components)],
            "k": S.k,
            "K": str(S.K),
            "minus_one_curves": len(minus_one_curves(S)),
        })
    emit(rows, args.format, title="surfaces")
    return EXIT_OK


def cmd_check(args, bundled: BundledData) -> int:
    desc = build_descriptor(args, bundled)
    rep = validate_hypotheses(desc)
    D, K = desc.D, desc.model.lattice.K
    info = {
        "descriptor": desc.key(),
        "D2": intersect(D, D),
        "DK": intersect(D, K),
        "p_a": arithmetic_genus(D),
        **{k: v for k, v in rep.flags().items()},
        "ok": rep.ok,
        "unverified_bh": rep.unverified_bh,
        "issues": rep.issues,
    }
    if rep.structural and rep.parity_congruence is not None and desc.distribution is None:
        try:
            info["distributions"] = [
                ",".join(map(str, d.as_tuple())) for d in enumerate_distributions(desc.model, desc.selection, D)
            ]
        except ConfigurationError:
            pass
    if args.format == "json":
        sys.stdout.write(json.dumps(info, indent=2) + "\n")
    else:
        emit([{"field": k, "value": v} for k, v in info.items()], args.format)
    return EXIT_OK if rep.ok else EXIT_INVALID


def _recursion_value(desc: InvariantDescriptor, rules: RuleSet, memo: Memo) -> int:
    normal, _ = normalize_to_degree2(desc)
    state = transfer_to_pair(normal)
    try:
        return evaluate(state, rules, memo)
    except IncompleteRuleSetError as exc:
        raise CapabilityError(
            f"rule set {rules.version!r} cannot reduce {exc.state_key}; "
            "load a rule file with the full splitting formula (--ruleset FILE)"
        ) from None


def evaluate_descriptor(
    desc: InvariantDescriptor,
    *,
    rules: RuleSet | None = None,
    memo: Memo | None = None,
    oracle: InvariantLedger | None = None,
    half_parity: int = 0,
) -> InvariantValue:
    """Route by regime: closed forms, then recursion, then oracle lookup."""
    pa = arithmetic_genus(desc.D)
    if pa == desc.g:
        return closed_form_equal_genus(desc, half_parity)
    if pa == desc.g + 1:
        return closed_form_pencil(desc)
    if rules is not None:
        return InvariantValue(_recursion_value(desc, rules, memo or Memo()), Provenance.RECURSION, desc)
    if oracle is not None:
        try:
            return InvariantValue(oracle.lookup(desc), Provenance.ORACLE, desc)
        except MissingEntryError:
            raise CapabilityError(f"oracle has no entry for {desc.key()}") from None
    raise CapabilityError(
        f"p_a(D) = {pa} lies outside the closed-form regimes for g = {desc.g}; "
        "pass --ruleset FILE or --oracle FILE"
    )


def cmd_eval(args, bundled: BundledData) -> int:
    desc = build_descriptor(args, bundled)
    start = time.perf_counter()
    rep = validate_hypotheses(desc)
    report = RunReport(desc.key(), None, None, rep.flags(), issues=list(rep.issues))
    code = EXIT_OK
    if not rep.ok:
        code = EXIT_INVALID
    else:
        rules = load_rules(args.ruleset) if args.ruleset else None
        memo = make_memo(args, rules)[0] if rules else None
        oracle = InvariantLedger.load(args.oracle) if args.oracle else None
        try:
            val = evaluate_descriptor(desc, rules=rules, memo=memo, oracle=oracle, half_parity=args.half_parity)
            report.value, report.provenance = val.value, val.provenance.value
        except (CapabilityError, UnsupportedError) as exc:
            report.issues.append(str(exc))
            code = EXIT_CAPABILITY
        if memo is not None:
            report.cache = memo.stats()
    report.timing = time.perf_counter() - start
    _emit_report(report, args.format)
    return code


def _emit_report(report: RunReport, fmt: str):
    if fmt == "json":
        sys.stdout.write(report.to_json() + "\n")
    else:
        emit([{"field": k, "value": v} for k, v in report.to_dict().items()], fmt)


def cmd_table1(args, bundled: BundledData) -> int:
    rules = load_rules(args.ruleset) if args.ruleset else None
    oracle = None if rules else load_oracle(args.oracle, bundled)
    memo = make_memo(args, rules)[0] if rules else None
    rows, code = [], EXIT_OK
    for col in bundled.table1:
        desc = table1_descriptor(col.model)
        row = {"model": col.label, "expected": col.w1, "computed": None, "GW1": col.gw1,
               "provenance": None, "bound": None, "status": "FAIL", "note": ""}
        try:
            if rules is not None:
                value, prov = _recursion_value(desc, rules, memo), Provenance.RECURSION
            else:
                value, prov = oracle.lookup(desc), Provenance.ORACLE
        except (CapabilityError, MissingEntryError) as exc:
            row["status"] = "UNAVAILABLE"
            row["note"] = str(exc)
            code = max(code, EXIT_CAPABILITY)
            rows.append(row)
            continue
        row.update(computed=value, provenance=prov.value, bound=gw_bound_check(value, col.gw1))
        if value == col.w1 and row["bound"]:
            row["status"] = "PASS"
        else:
            code = EXIT_MISMATCH
        rows.append(row)
    if args.format == "text":
        for row in rows:
            tail = f"  ({row['note']})" if row["note"] else ""
            sys.stdout.write(
                f"{row['status']:<11} {row['model']:<20} W1={_cell(row['computed']):<6} "
                f"expected={row['expected']:<4} GW1={row['GW1']}{tail}\n"
            )
    else:
        # integers go out as decimal strings
        for row in rows:
            for f in ("expected", "computed", "GW1"):
                if row[f] is not None:
                    row[f] = str(row[f])
        emit(rows, args.format, title="table1")
    # a mismatch is more informative than a missing capability
    if any(r["status"] == "FAIL" for r in rows):
        code = EXIT_MISMATCH
    return code


def cmd_asymptotics(args, bundled: BundledData) -> int:
    model = resolve_model(args, bundled)
    D = parse_class_arg(args.D or "-K", model.lattice)
    rules = load_rules(args.ruleset) if args.ruleset else None
    memo = make_memo(args, rules)[0] if rules else None
    oracle = InvariantLedger.load(args.oracle) if args.oracle else None

    def W(C: DivisorClass) -> int:
        desc = descriptor(model, C, (0, 1), (1, 1), phi="ZERO")
        return evaluate_descriptor(desc, rules=rules, memo=memo, oracle=oracle).value

    series = asymptotic_probe(D, args.kmax, W)
    slopes = dict(series.slopes)
    a_n = dict(series.a_n)
    rows = [
        {
            "k": k,
            "W": str(v),
            "slope": "" if k not in slopes else f"{float(slopes[k]):.12g}",
            "a_n": str(a_n[k]),
        }
        for k, v in series.values
    ]
    if args.format == "json":
        doc = {
            "D": str(D),
            "minus_DK": series.minus_dk,
            "precision_digits": series.precision,
            "rows": rows,
            "slopes_exact": {str(k): f"{s.numerator}/{s.denominator}" for k, s in series.slopes},
            "lambda_est": None if series.lambda_est is None else str(series.lambda_est),
            "nonpositive": series.nonpositive,
            "slopes_nondecreasing": series.slopes_nondecreasing(),
        }
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        emit(rows, args.format)
        if args.format == "text":
            sys.stdout.write(f"lambda_est = {series.lambda_est}\n")
            if series.nonpositive:
                sys.stdout.write(f"nonpositive W at k = {series.nonpositive} (data or rule defect)\n")
    return EXIT_INVALID if series.nonpositive else EXIT_OK


def cmd_cache(args, bundled: BundledData) -> int:
    directory = cache_dir(args.cache)
    if directory is None:
        raise ConfigurationError("no cache directory: pass --cache DIR or set WKIT_CACHE")
    cache = CacheFile(directory)
    if args.action == "stats":
        info: dict[str, Any] = {"path": str(cache.path), **cache.stats()}
    else:
        ruleset_hash = load_rules(args.ruleset).hash if args.ruleset else None
        info = {"path": str(cache.path), "removed": cache.clear(ruleset_hash)}
    if args.format == "json":
        sys.stdout.write(json.dumps(info, indent=2) + "\n")
    else:
        emit([{"field": k, "value": v} for k, v in info.items()], args.format)
    return EXIT_OK


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wkit", description="Welschinger-type invariants of real del Pezzo surfaces")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--cache", metavar="DIR", help="persistent memo directory (WKIT_CACHE overrides)")

    surface = argparse.ArgumentParser(add_help=False)
    surface.add_argument("--degree", type=int)
    surface.add_argument("--rx", help="real part, e.g. 'RP2+S2' or '3S2'")

    inv = argparse.ArgumentParser(add_help=False)
    inv.add_argument("--D", help="class 'd;m1,...' or expression like '-2K-E6'")
    inv.add_argument("--g", type=int)
    inv.add_argument("--F", help="selected components, e.g. '0,1'")
    inv.add_argument("--r", help="real point counts, e.g. '2,3'")
    inv.add_argument("--m", type=int, help="number of conjugate point pairs")
    inv.add_argument("--eps", help="signs, e.g. '1,-1' ('pm' sums both)")
    inv.add_argument("--phi", default="ZERO", help="ZERO, COMPLEMENT or CUSTOM:<id>")
    inv.add_argument("--half-parity", type=int, default=0, choices=(0, 1),
                     help="parity of C_1/2 . phi for the equal-genus closed form")

    backends = argparse.ArgumentParser(add_help=False)
    backends.add_argument("--ruleset", metavar="FILE", help="w-number rule file (or bundled name)")
    backends.add_argument("--oracle", metavar="FILE", help="ledger of known values (JSON or CSV)")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("surface", parents=[common, surface], help="list catalogued real surfaces").set_defaults(func=cmd_surface)
    sub.add_parser("check", parents=[common, surface, inv], help="validate hypotheses").set_defaults(func=cmd_check)
    sub.add_parser("eval", parents=[common, surface, inv, backends], help="evaluate an invariant").set_defaults(func=cmd_eval)
    sub.add_parser("table1", parents=[common, backends], help="elliptic invariants of -2K vs bundled values").set_defaults(func=cmd_table1)
    asym = sub.add_parser("asymptotics", parents=[common, surface, inv, backends], help="W_1(kD) for k <= kmax")
    asym.add_argument("--kmax", type=int, default=6)
    asym.set_defaults(func=cmd_asymptotics)
    cache = sub.add_parser("cache", parents=[common], help="inspect or clear the memo cache")
    cache.add_argument("action", choices=("stats", "clear"))
    cache.add_argument("--ruleset", metavar="FILE", help="clear only entries of this rule set")
    cache.set_defaults(func=cmd_cache)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, BundledData.load())
    except CapabilityError as exc:
        print(f"wkit: capability error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (WkitError, ValueError, KeyError) as exc:
        print(f"wkit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
