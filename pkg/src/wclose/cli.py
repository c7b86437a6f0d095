"""Command-line interface: ``wclose <command> PROBLEM [options]``.

Exit codes: 0 success, 1 computational failure (budget, truncation cap,
failed check; a partial JSON trace is still written), 2 usage or parse
error.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
import time
from typing import List, Optional

from . import bench as bench_mod
from . import trace
from .closure import BUDGET, COMPLETED, CertificationError, ClosureConfig, partial_weyl_closure
from .groebner import Budget, BudgetExceeded, buchberger, is_finite_rank
from .holonomy import format_witness, is_holonomic
from .parser import ParseError, format_problem, load_problem, parse_function, parse_loc_poly, parse_polynomial
from .symbol import NotFiniteRankError, pick_loc_poly, singular_locus
from .weyl import act_on_rational, format_element

log = logging.getLogger("wclose")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _budget(args) -> Budget:
    return Budget(max_pairs=args.max_pairs, max_terms=args.max_terms,
                  timeout=args.timeout if args.timeout > 0 else None)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write a machine-readable trace")
    common.add_argument("--order", help="monomial order, e.g. 'grevlex' or 'grevlex(x,y,Dx,Dy)'")
    common.add_argument("--field", help="override the coefficient field: QQ or Fp(p)")
    common.add_argument("--max-pairs", type=int, default=10**6, help="S-pair budget")
    common.add_argument("--max-terms", type=int, default=40_000_000, help="term-count budget")
    common.add_argument("--timeout", type=float, default=1800.0, help="seconds; 0 disables")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="wclose", description="Gröbner bases and partial Weyl closure of D-modules.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_):
        c = sub.add_parser(name, parents=[common], help=help_)
        if name != "bench":
            c.add_argument("problem", help="problem file")
        return c

    cmd("gb", "reduced Gröbner basis of the input module")
    c = cmd("closure", "partial Weyl closure by truncated saturation")
    c.add_argument("--criterion", default="holonomic",
                   help="holonomic | stable-and-holonomic | holonomic-plus-extra(N)")
    c.add_argument("--max-T-degree", type=int, default=20, dest="max_T_degree")
    c.add_argument("--loc", help="localization polynomial (default: problem file, else computed)")
    c.add_argument("--strict", action="store_true",
                   help="check finite rank first and T-degree monotonicity; fail unless holonomic")
    c.add_argument("--output", metavar="PATH", help="write the output module as a problem file")
    cmd("holcheck", "holonomicity test of the input module")
    cmd("singlocus", "singular locus of the input module")
    cmd("rank", "finite-rank test and holonomic rank")
    c = cmd("check-annihilates", "check every generator kills a function")
    c.add_argument("--function", help="rational function (default: problem file)")
    c.add_argument("--exp", help="polynomial g: check against function * exp(g)")
    c = cmd("bench", "run a benchmark suite")
    c.add_argument("suite", choices=bench_mod.SUITES)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--count", type=int, default=3, help="instances for random suites")
    c.add_argument("--format", choices=("csv", "markdown"), default="markdown")
    return p


def _load(args):
    pf = load_problem(args.problem, args.field)
    if not pf.generators:
        raise ParseError("problem file has no generators")
    try:
        return pf, pf.order(args.order)
    except (ValueError, KeyError) as exc:
        raise _Usage(f"bad order: {exc}") from None


def _gb(args, out):
    pf, order = _load(args)
    t0 = time.monotonic()
    G = buchberger(pf.generators, order, budget=_budget(args).start())
    for g in G:
        out(format_element(g))
    out(f"# {len(G)} generators, order {order.describe(pf.sig)}")
    return EXIT_OK, "ok", trace.gb_dict(G), pf, time.monotonic() - t0


def _closure(args, out):
    pf, order = _load(args)
    t0 = time.monotonic()
    f = "auto"
    if args.loc:
        f = parse_loc_poly(args.loc, pf.sig)
    elif pf.loc_poly is not None:
        f = pf.loc_poly
    try:
        config = ClosureConfig(order=order, criterion=args.criterion, max_T_degree=args.max_T_degree,
                               budget=_budget(args), verify_input=args.strict,
                               check_T_monotone=args.strict)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    if not order.eliminate_T:
        raise _Usage("closure needs an order that eliminates T")
    r = partial_weyl_closure(pf.generators, f, config)
    for g in r.generators:
        out(format_element(g))
    verdict = "holonomic" if r.holonomic else "NOT holonomic"
    out(f"# {len(r.generators)} generators; {verdict}; status {r.status}; "
        f"f = {r.f.to_str()}; stopped at s = {r.trace[-1].s if r.trace else '-'}")
    if r.fired_criterion:
        out(f"# criterion {r.fired_criterion}; saturation exponents {r.saturation_exponents}")
    if args.output and r.generators:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(format_problem(dataclasses.replace(pf, loc_poly=None), r.generators))
    code = EXIT_OK if r.status == COMPLETED else EXIT_FAIL
    if args.strict and not (r.holonomic and r.certified):
        code = EXIT_FAIL
    return code, r.status, trace.closure_dict(r), pf, time.monotonic() - t0


def _holcheck(args, out):
    pf, order = _load(args)
    t0 = time.monotonic()
    G = buchberger(pf.generators, order, budget=_budget(args).start())
    hol, wit = is_holonomic(G)
    out("holonomic" if hol else f"NOT holonomic; {format_witness(wit)}")
    w = None if wit is None else {"variables": list(wit[0]), "position": wit[1]}
    return EXIT_OK, "ok", {"holonomic": hol, "witness": w, "gb_size": len(G)}, pf, time.monotonic() - t0


def _singlocus(args, out):
    pf, _ = _load(args)
    t0 = time.monotonic()
    gens = singular_locus(pf.generators, _budget(args).start())
    f = None
    if not gens:
        out("singular locus is the whole space (input is not of finite rank)")
    else:
        f = pick_loc_poly(gens)
        out("ideal <" + ", ".join(g.to_str() for g in gens) + ">")
        out(f"# f = {f.to_str()}")
    res = {"generators": [g.to_str() for g in gens], "f": None if f is None else f.to_str()}
    return EXIT_OK, "ok", res, pf, time.monotonic() - t0


def _rank(args, out):
    pf, _ = _load(args)
    t0 = time.monotonic()
    ok, r = is_finite_rank(pf.generators, pf.sig, budget=_budget(args).start())
    out(f"finite rank {r}" if ok else "not of finite rank")
    return EXIT_OK, "ok", {"finite": ok, "rank": r}, pf, time.monotonic() - t0


def _check(args, out):
    pf, _ = _load(args)
    t0 = time.monotonic()
    ring = pf.sig.function_ring
    if args.function:
        func = parse_function(args.function, ring)
    elif pf.function is not None:
        func = pf.function
    elif args.exp or pf.exp_poly is not None:
        func = parse_function("1", ring)
    else:
        raise _Usage("no function given (use --function or a 'function:' line)")
    g = parse_polynomial(args.exp, ring) if args.exp else pf.exp_poly
    flags = [all(not v for v in act_on_rational(P, func, g)) for P in pf.generators]
    if all(flags):
        out(f"all {len(flags)} generators annihilate")
    else:
        for i, ok in enumerate(flags, 1):
            if not ok:
                out(f"generator {i} does not annihilate: {format_element(pf.generators[i - 1])}")
    res = {"function": func.to_str(), "exp": None if g is None else g.to_str(),
           "generators": [format_element(P) for P in pf.generators], "annihilates": flags}
    return (EXIT_OK if all(flags) else EXIT_FAIL), ("ok" if all(flags) else "failed"), res, pf, \
        time.monotonic() - t0


def _bench(args, out):
    t0 = time.monotonic()
    rows = bench_mod.run_suite(args.suite, args.field, args.seed, args.jobs, _budget(args), args.count)
    out((bench_mod.to_csv if args.format == "csv" else bench_mod.to_markdown)(rows).rstrip("\n"))
    bad = [r for r in rows if r["status"] != COMPLETED]
    return (EXIT_FAIL if bad else EXIT_OK), ("failed" if bad else "ok"), \
        {"suite": args.suite, "rows": rows}, None, time.monotonic() - t0


_COMMANDS = {
    "gb": _gb, "closure": _closure, "holcheck": _holcheck, "singlocus": _singlocus,
    "rank": _rank, "check-annihilates": _check, "bench": _bench,
}


def run_cli(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except _Usage as exc:
        print(f"wclose: error: {exc}", file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=stderr)

    def out(line):
        print(line, file=stdout)

    pf = None
    doc = None
    try:
        code, status, result, pf, seconds = _COMMANDS[args.command](args, out)
        problem = trace.problem_dict(pf, args.order) if pf is not None else None
        doc = trace.envelope(args.command, status, result, problem, seconds)
    except (_Usage, ParseError, FileNotFoundError) as exc:
        print(f"wclose: error: {exc}", file=stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"wclose: budget exceeded: {exc}", file=stderr)
        code = EXIT_FAIL
        doc = trace.envelope(args.command, BUDGET, None, None, error=str(exc))
    except (NotFiniteRankError, CertificationError, ValueError) as exc:
        print(f"wclose: {exc}", file=stderr)
        code = EXIT_FAIL
        doc = trace.envelope(args.command, "error", None, None, error=str(exc))
    if args.json and doc is not None:
        trace.dump(doc, args.json)
    return code


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
