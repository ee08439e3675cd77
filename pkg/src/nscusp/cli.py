"""Command line front end.

Exit codes: 0 success, 1 verification mismatch, 2 invalid input,
3 internal hard error.  Errors are printed to stderr as a JSON object.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from .classnumber import HardError
from .factor import factorize, is_prime
from .padic import InsufficientPrecision
from .report import (
    REFERENCE_TABLE,
    ResultCache,
    cached_report,
    load_fixture,
    resolve_cache_dir,
)

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
ANALYTIC_LIMIT = 200

log = logging.getLogger("nscusp")


class InvalidInput(ValueError):
    pass


def _error(kind: str, message: str, code: int, **extra) -> int:
    obj = {"error": {"type": kind, "message": message, "exit_code": code, **extra}}
    print(json.dumps(obj, sort_keys=True), file=sys.stderr)
    return code


def _prime_arg(p: int) -> int:
    if p < 5 or not is_prime(p):
        raise InvalidInput(f"{p} is not a prime >= 5")
    return p


def _cache(args) -> ResultCache | None:
    if getattr(args, "no_cache", False):
        return None
    return ResultCache(resolve_cache_dir(args.cache_dir))


def cmd_compute(args) -> int:
    p = _prime_arg(args.p)
    if args.precision < 1:
        raise InvalidInput("--precision must be >= 1")
    rep, _ = cached_report(p, _cache(args), analytic=args.analytic, precision=args.precision)
    text = json.dumps(rep.to_json(), sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_verify_table(args) -> int:
    rows = load_fixture(args.fixture) if args.fixture else REFERENCE_TABLE
    if args.only:
        rows = tuple(r for r in rows if r.p in set(args.only))
    cache = _cache(args)
    passed = 0
    for row in rows:
        rep, hit = cached_report(row.p, cache)
        got = sorted((q, e) for q, e, _ in rep.factors)
        marker = " [cache]" if hit else ""
        uncertified = [q for q, _, c in rep.factors if not c]
        if got == sorted(row.factors) and not uncertified:
            passed += 1
            print(f"p={row.p:<4} PASS{marker}")
        else:
            print(f"p={row.p:<4} FAIL{marker}")
            print(f"    expected: {_fmt(row.factors)}")
            print(f"    computed: {_fmt(got)}")
            if uncertified:
                print(f"    uncertified: {uncertified}")
    print(f"{passed}/{len(rows)} PASS")
    return EXIT_OK if passed == len(rows) else EXIT_MISMATCH


def _fmt(pairs) -> str:
    return " * ".join(str(q) if e == 1 else f"{q}^{e}" for q, e in sorted(pairs)) or "1"


def _scan_one(task):
    p, cache_dir, analytic = task
    cache = ResultCache(cache_dir) if cache_dir else None
    try:
        rep, _ = cached_report(p, cache, analytic=analytic)
        return p, rep, None
    except (HardError, InsufficientPrecision) as exc:
        return p, None, {"type": type(exc).__name__, "message": str(exc)}


def cmd_scan(args) -> int:
    if args.min > args.max:
        raise InvalidInput("--min exceeds --max")
    if args.jobs < 1:
        raise InvalidInput("--jobs must be >= 1")
    primes = [p for p in range(max(args.min, 5), args.max + 1) if is_prime(p)]
    cache = _cache(args)
    tasks = [(p, str(cache.directory) if cache else None, args.analytic) for p in primes]
    if args.jobs == 1:
        results = map(_scan_one, tasks)
    else:
        pool = ProcessPoolExecutor(max_workers=args.jobs)
        results = pool.map(_scan_one, tasks)
    counts: dict[str, int] = {}
    irregular, failures = [], []
    # map() yields in submission order, so output is independent of scheduling
    for p, rep, err in results:
        if err:
            failures.append({"p": str(p), **err})
            print(json.dumps({"p": str(p), "error": err}, sort_keys=True))
            continue
        counts[rep.classification] = counts.get(rep.classification, 0) + 1
        if rep.irr:
            irregular.append(str(p))
        print(rep.dumps(timings=not args.no_timings))
    if args.jobs != 1:
        pool.shutdown()
    summary = {
        "summary": {
            "primes": str(len(primes)),
            "classification_counts": {k: str(v) for k, v in sorted(counts.items())},
            "irregular_primes": irregular,
            "failures": failures,
        }
    }
    print(json.dumps(summary, sort_keys=True))
    return EXIT_INTERNAL if failures else EXIT_OK


def cmd_growth(args) -> int:
    from .analytic import growth_report
    from .classnumber import compute

    if args.max > ANALYTIC_LIMIT:
        raise InvalidInput(f"--max is limited to {ANALYTIC_LIMIT}")
    rows = []
    for p in range(5, args.max + 1):
        if not is_prime(p):
            continue
        order = compute(p).order
        r = growth_report(p, order, fe=p <= args.fe_max)
        band = (math.log(order) - p * math.log(p)) / p
        rows.append(
            {
                "p": str(p),
                "lower_ok": r.lower_ok,
                "full_lower_ok": r.full_lower_ok,
                "upper_ok": r.upper_ok,
                "product_abs": r.product_abs,
                "full_product": r.full_product,
                "gauss_err": r.gauss_moduli_max_err,
                "fe_residual": r.fe_max_residual if p <= args.fe_max else None,
                "pv_ratio": r.pv_max_ratio,
                "ln_order_residual": r.ln_order_residual,
                "ln_order_ok": r.ln_order_ok,
                "band": band,
            }
        )
    bands = [r["band"] for r in rows]
    out = {
        "rows": rows,
        "band": {"min": min(bands), "max": max(bands)} if bands else None,
    }
    if args.json:
        print(json.dumps(out, sort_keys=True, indent=2))
        return EXIT_OK
    print(f"{'p':>4} {'lower':>5} {'full':>5} {'upper':>5} {'prod':>8} {'fe':>9} "
          f"{'pv':>6} {'ln-resid':>10} {'band':>8}")
    for r in rows:
        fe = "-" if r["fe_residual"] is None else f"{r['fe_residual']:.1e}"
        print(
            f"{r['p']:>4} {_yn(r['lower_ok']):>5} {_yn(r['full_lower_ok']):>5} "
            f"{_yn(r['upper_ok']):>5} {r['product_abs']:8.5f} {fe:>9} {r['pv_ratio']:6.3f} "
            f"{r['ln_order_residual']:10.1e} {r['band']:8.4f}"
        )
    if bands:
        print(f"(ln order - p ln p)/p in [{min(bands):.4f}, {max(bands):.4f}]")
    return EXIT_OK


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def cmd_factor(args) -> int:
    try:
        n = int(args.n)
    except ValueError:
        raise InvalidInput(f"not an integer: {args.n!r}") from None
    if n < 1:
        raise InvalidInput("n must be >= 1")
    fo = factorize(n)
    print(json.dumps(
        {
            "n": str(n),
            "factors": [[str(q), str(e), c] for q, e, c in fo.factors],
            "complete": fo.complete,
            "text": str(fo),
        },
        sort_keys=True,
    ))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nscusp", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def cache_opts(sp):
        sp.add_argument("--cache-dir", help="result cache directory (overrides $CACHE_DIR)")
        sp.add_argument("--no-cache", action="store_true")

    sp = sub.add_parser("compute", help="full report for one prime")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("--analytic", action="store_true")
    sp.add_argument("--precision", type=int, default=4, help="initial p-adic digits")
    sp.add_argument("--out")
    cache_opts(sp)
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("verify-table", help="recompute the reference table")
    sp.add_argument("--fixture", help="alternate table as JSON (harness self-test)")
    sp.add_argument("--only", type=int, nargs="+", help="restrict to these primes")
    cache_opts(sp)
    sp.set_defaults(func=cmd_verify_table)

    sp = sub.add_parser("scan", help="reports for every prime in a range")
    sp.add_argument("--min", type=int, required=True)
    sp.add_argument("--max", type=int, required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--analytic", action="store_true")
    sp.add_argument("--no-timings", action="store_true", help="blank timings for diffable output")
    cache_opts(sp)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("growth", help="analytic flags and log-order residuals")
    sp.add_argument("--max", type=int, required=True)
    sp.add_argument("--fe-max", type=int, default=31, help="largest p for functional-equation checks")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_growth)

    sp = sub.add_parser("factor", help="factor an integer")
    sp.add_argument("n")
    sp.set_defaults(func=cmd_factor)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.ERROR)
    try:
        return args.func(args)
    except InvalidInput as exc:
        return _error("InvalidInput", str(exc), EXIT_INPUT)
    except (HardError, InsufficientPrecision) as exc:
        return _error(type(exc).__name__, str(exc), EXIT_INTERNAL)


if __name__ == "__main__":
    sys.exit(main())
