"""Command-line front end: ``koszul-plane {curve-check,sections,betti,verify}``.

Exit status: 0 on success (and, for ``verify``, every applicable prediction
matching); 1 on input errors; 2 when a verification or property check fails.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from typing import Optional

from . import __version__
from .bundles import BundleError
from .cache import RunManifest, ResultCache, atomic_write, cache_key
from .curve import CurveError, SingularCurveError
from .field import FieldError
from .pipeline import checks_passed, run_betti, run_curve_check, run_sections, run_verify
from .specfile import SpecError, read_spec

log = logging.getLogger("koszul_plane")

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH = 0, 1, 2


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _kv_lines(d: dict, prefix: str = "") -> list[str]:
    out = []
    for k, v in d.items():
        if isinstance(v, dict):
            out += _kv_lines(v, f"{prefix}{k}.")
        else:
            out.append(f"{prefix}{k}: {v}")
    return out


def _render_curve_check(res: dict, fmt: str) -> str:
    if fmt == "json":
        return _dump(res)
    rows = [(k, json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in res.items()]
    if fmt == "csv":
        return "key,value\n" + "".join(f"{k},\"{str(v).replace(chr(34), chr(39))}\"\n" for k, v in rows)
    return "".join(f"{k:<16} {v}\n" for k, v in rows)


def _render_sections(res: dict, fmt: str) -> str:
    if fmt == "json":
        return _dump(res)
    if fmt == "csv":
        lines = ["name,label,degree,h0,h1,h1_route,riemann_roch_ok"]
        for b in res["bundles"]:
            lines.append(f"{b['name']},{b['bundle']['label']},{b['bundle']['degree']},{b['h0']},{b['h1']},"
                         f"{b['h1_route']},{b['riemann_roch_ok']}")
        return "\n".join(lines) + "\n"
    lines = [f"curve {res['curve']} over GF({res['prime']}), genus {res['genus']}"]
    for b in res["bundles"]:
        lines.append(f"{b['name']} = {b['bundle']['label']}: deg {b['bundle']['degree']}, h0 {b['h0']}, "
                     f"h1 {b['h1']} ({b['h1_route']})")
        lines += [f"  {f}" for f in b["basis"]]
        if "very_ample" in b:
            lines.append(f"  very ample: {b['very_ample']}")
    return "\n".join(lines) + "\n"


def _named(role: str, label: str) -> str:
    return label if label.startswith(role + "=") else f"{role}={label}"


def _render_betti(table, fmt: str, timing: bool) -> str:
    if fmt == "json":
        return _dump(table.to_json(include_timing=timing))
    if fmt == "csv":
        return table.render_csv() + "\n"
    lines = [f"{table.curve}  {_named('B', table.bundle_B)}  {_named('L', table.bundle_L)}  GF({table.prime})  r = {table.r}",
             table.render_table()]
    for name, c in table.checks.items():
        state = {True: "pass", False: "FAIL", None: "n/a"}[c.get("passed")]
        lines.append(f"check {name}: {state}" + (f" ({c['reason']})" if c.get("reason") else ""))
    return "\n".join(lines) + "\n"


def _render_verify(report, fmt: str, timing: bool) -> str:
    if fmt == "json":
        out = report.to_json()
        cells = report.table.to_json(include_timing=timing)["cells"] if report.table is not None and report.table.cells else []
        out["cells"] = cells
        return _dump(out)
    if fmt == "csv":
        lines = ["theorem,verdict,tag,reason"]
        for p in report.predictions:
            lines.append(f"{p.theorem},{p.verdict},\"{p.tag}\",\"{p.reason}\"")
        return "\n".join(lines) + "\n"
    lines = [f"{report.curve}  {_named('B', report.bundle_B)}  {_named('L', report.bundle_L)}  overall: {report.verdict}"]
    for p in report.predictions:
        extra = p.tag or p.reason
        lines.append(f"  {p.theorem:<32} {p.verdict:<15} {extra}")
        for m in p.mismatches:
            lines.append(f"      mismatch at (p,q) = ({m['p']},{m['q']}): predicted {m}, computed {m['computed']}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="koszul-plane",
                                 description="Koszul cohomology of smooth plane curves over prime fields.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, helptext in [("curve-check", "smoothness certificate, invariants and rational points"),
                           ("sections", "bases of H^0 for the bundles in the file"),
                           ("betti", "Betti table of R(C, B; L) with property checks"),
                           ("verify", "compare theorem predictions with computed dimensions")]:
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--input", required=True, help="curve specification file")
        sp.add_argument("--prime", type=int, help="field characteristic (overrides the file)")
        sp.add_argument("--second-prime", type=int, help="prime for the two-prime check (default: seeded)")
        sp.add_argument("--pmax", type=int, help="largest p (default r(L))")
        sp.add_argument("--qmax", type=int, default=3, help="largest q (default 3)")
        sp.add_argument("--cache-dir", help="directory for cached results")
        sp.add_argument("--format", choices=["json", "csv", "table"], default="json")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="write the result here (atomically) instead of stdout")
        sp.add_argument("--no-timing", action="store_true", help="omit wall-clock fields from the output")
        if name == "sections":
            sp.add_argument("--bundle", action="append", help="bundle name (repeatable; default all)")
            sp.add_argument("--very-ample", type=int, metavar="P", help="also certify p-very ampleness")
    return ap


def _command_record(args) -> dict:
    rec = {k: v for k, v in vars(args).items() if k not in ("input", "out", "cache_dir")}
    rec["tool_version"] = __version__
    return rec


def _execute(args, spec) -> tuple[str, int, list[int]]:
    fmt, timing = args.format, not args.no_timing
    if args.command == "curve-check":
        res = run_curve_check(spec, args.prime)
        return _render_curve_check(res, fmt), EXIT_OK, [res["prime"]]
    if args.command == "sections":
        res = run_sections(spec, args.prime, args.bundle, args.very_ample)
        return _render_sections(res, fmt), EXIT_OK, [res["prime"]]
    if args.command == "betti":
        table = run_betti(spec, args.prime, args.second_prime, args.pmax, args.qmax, args.seed)
        primes = [table.prime]
        tp = table.checks.get("two_prime", {})
        if tp.get("second_prime"):
            primes.append(tp["second_prime"])
        code = EXIT_OK if checks_passed(table) else EXIT_MISMATCH
        return _render_betti(table, fmt, timing), code, primes
    report = run_verify(spec, args.prime, args.pmax, args.qmax, args.seed)
    code = EXIT_MISMATCH if report.verdict == "mismatch" else EXIT_OK
    return _render_verify(report, fmt, timing), code, [report.table.prime]


def main(argv: Optional[list[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        spec = read_spec(args.input)
    except OSError as e:
        print(f"error: cannot read {args.input}: {e}", file=sys.stderr)
        return EXIT_INPUT
    except SpecError as e:
        print(f"error: {args.input}: {e}", file=sys.stderr)
        return EXIT_INPUT

    cache = ResultCache(args.cache_dir)
    command = _command_record(args)
    key = cache_key(spec.digest, command)
    hit = cache.lookup(key)
    if hit is not None:
        payload, code, primes, state = hit["payload"], hit["exit_code"], [], "hit"
    else:
        try:
            payload, code, primes = _execute(args, spec)
        except SingularCurveError as e:
            print(f"error: {e} (witness {e.witness})", file=sys.stderr)
            return EXIT_INPUT
        except (SpecError, CurveError, BundleError, FieldError) as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_INPUT
        state = "miss" if cache.enabled else "off"

    manifest = RunManifest(__version__, spec.digest, primes, args.seed, command,
                           {"total_seconds": round(time.perf_counter() - t0, 3)},
                           [args.out] if args.out else [], state)
    if hit is None:
        cache.store(key, payload, code, manifest)
    if args.out:
        atomic_write(args.out, payload)
        atomic_write(args.out + ".manifest.json", manifest.to_json())
    else:
        sys.stdout.write(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
