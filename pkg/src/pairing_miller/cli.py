"""Command line: pair, bench, verify, validate-curve.

Results go to stdout as JSON Lines, diagnostics and tables to stderr.
Exit codes: 0 ok, 1 a verification failed, 2 bad usage or an engine
that does not fit the curve, 3 random sampling gave up.
"""
import argparse
import json
import random
import sys

from . import suites
from .bench import ratios, run_bench
from .catalog import ParseError, load_entry, validate_params
from .counting import COST_ROWS, PRINTED_ROWS, OpCounter
from .curve import random_point
from .field import final_exponentiation
from .miller import ENGINES, EVEN_ONLY, VALUE_EXACT, DegenerateEvaluation, UnsupportedEngine, run_with_divisor
from .pairing import (
    PairingContext,
    SamplingError,
    context,
    miller_value,
    point_pool,
    sample_g1,
    sample_g2,
    tate_reduced,
    weil,
)
from .suites import encode

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SAMPLING = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(obj):
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _say(msg):
    print(msg, file=sys.stderr)


def _context(args):
    if getattr(args, "curve_file", None):
        try:
            return PairingContext(load_entry(args.curve_file))
        except (OSError, ParseError) as exc:
            raise UsageError("cannot load curve file: %s" % exc) from exc
    try:
        return context(args.curve)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc


def _check_engine(ctx, engine, pairing):
    if engine not in ENGINES:
        raise UsageError("unknown engine %r" % engine)
    if engine in EVEN_ONLY and ctx.k % 2:
        raise UsageError("%s needs an even embedding degree; %s has k = %d" % (engine, ctx.name, ctx.k))
    if pairing == "weil" and engine not in VALUE_EXACT:
        raise UsageError("the Weil pairing needs a value-exact engine (%s), not %s" % (", ".join(VALUE_EXACT), engine))


def _pow_r(ctx, v):
    w = v ** ctx.r
    return 1 if w.is_one() else encode(w)


def cmd_pair(args):
    ctx = _context(args)
    _check_engine(ctx, args.engine, args.pairing)
    if args.divisor_mode and args.engine not in VALUE_EXACT:
        raise UsageError("divisor mode needs a value-exact engine")
    ordered = ctx.trace is not None
    if not ordered:
        if args.pairing == "weil":
            raise UsageError("%s has no known group order, so order-r points cannot be built" % ctx.name)
        _say("warning: %s has no known group order; using arbitrary points" % ctx.name)
    rng = random.Random(args.seed)
    for index in range(args.count):
        if ordered:
            P, Q = sample_g1(ctx, rng), sample_g2(ctx, rng)
        else:
            P, Q = random_point(ctx.curve, rng), point_pool(ctx, rng, 1)[0]
        rec = {"curve": ctx.name, "engine": args.engine, "pairing": args.pairing, "index": index,
               "seed": args.seed, "P": encode(P), "Q": encode(Q)}
        counter = OpCounter()
        if args.pairing == "weil":
            value = weil(ctx, P, Q, args.engine, rng)
            counter = None
        elif args.divisor_mode:
            value = _divisor_eval(ctx, P, Q, args.engine, rng, counter, args.pairing == "tate")
            if args.pairing == "tate":
                rec["reduced"] = encode(value)
        elif args.pairing == "tate":
            f = miller_value(ctx, P, Q, args.engine, counter)
            value = final_exponentiation(f, ctx.r)
            rec["miller"] = encode(f)
            rec["reduced"] = encode(value)
        else:
            value = miller_value(ctx, P, Q, args.engine, counter)
        rec["result"] = encode(value)
        if args.pairing != "miller-only":
            rec["result_pow_r"] = _pow_r(ctx, value)
        if counter is not None:
            rec["counts"] = {"M": counter.M, "S": counter.S, "I": counter.I, "frobenius": counter.frobenius}
        _emit(rec)
    return EXIT_OK


def _divisor_eval(ctx, P, Q, engine, rng, counter, reduce, retries=32):
    """f_{r,P}((Q+S) - (S)) for a random shift S, optionally reduced."""
    for _ in range(retries):
        S = random_point(ctx.ext_curve, rng)
        try:
            if reduce:
                return tate_reduced(ctx, P, Q, engine, counter, S=S)
            return run_with_divisor(engine, ctx.curve, P, ctx.r, Q, S, counter).value(counter)
        except (DegenerateEvaluation, ZeroDivisionError):
            continue
    raise SamplingError("no usable shift point after %d tries" % retries)


def cmd_bench(args):
    ctx = _context(args)
    engines = [e.strip() for e in args.engines.split(",") if e.strip()] if args.engines else suites.engines_for(ctx)
    for e in engines:
        _check_engine(ctx, e, "tate")
    if args.trials < 1 or args.warmup < 0:
        raise UsageError("--trials must be >= 1 and --warmup >= 0")
    results = run_bench(ctx, engines, args.trials, args.warmup, args.seed)
    for res in results:
        _emit(res.as_dict())
    rat = ratios(results)
    _emit({"type": "ratios", "curve": ctx.name, "statistic": "median", "ratios": rat})
    _say("%-14s %10s %10s %10s %6s %6s" % ("engine", "median ms", "mean ms", "min ms", "M", "S"))
    for res in results:
        _say("%-14s %10.2f %10.2f %10.2f %6d %6d" % (res.engine, res.median_s * 1e3, res.mean_s * 1e3,
                                                    res.min_s * 1e3, res.counts["M"], res.counts["S"]))
    for key, value in rat.items():
        _say("%-28s %.3f" % (key, value))
    return EXIT_OK


def _suite_list(ctx, name, trials, seed):
    if name == "catalog":
        return [suites.catalog_suite(seed)]
    rng = random.Random(seed)
    small = ctx.p.bit_length() <= 64
    if name == "identities":
        return [suites.identity_suite(ctx, trials or 1000, rng)]
    if name == "engines":
        out = [suites.engine_suite(ctx, trials or 100, rng)]
        if ctx.trace is not None:
            pairs = suites.subgroup_pairs(ctx) if small else [
                (sample_g1(ctx, rng), sample_g2(ctx, rng)) for _ in range(trials or 20)]
            out.append(suites.reduced_agreement_suite(ctx, pairs, rng))
        if small and ctx.trace is not None:
            out.append(suites.bilinearity_suite(ctx, None, rng))
            out.append(suites.weil_suite(ctx, rng))
        return out
    if name == "costs":
        out = [suites.cost_suite(ctx, trials or 100, rng)]
        if not small:
            out.append(suites.savings_suite(ctx, trials or 100, rng))
        return out
    raise UsageError("unknown suite %r" % name)


def cmd_verify(args):
    ctx = _context(args) if args.suite != "catalog" else None
    names = ["identities", "engines", "costs", "catalog"] if args.suite == "all" else [args.suite]
    status = EXIT_OK
    for name in names:
        for res in _suite_list(ctx, name, args.trials, args.seed):
            out = res.as_dict()
            if name == "costs" and res.name == "costs":
                out["table_rows"] = {e: {lab: COST_ROWS[e][lab] for lab in PRINTED_ROWS[e]}
                                     for e in out.get("per_engine", {})}
            if res.name == "savings":
                runs = out.pop("runs")
                out["min_saved_M"] = min(r["saved_M"] for r in runs)
                out["min_margin"] = min(r["saved_M"] - r["bound"] for r in runs)
            _emit(out)
            _say("%-18s %s (%d checked)" % (res.name, "pass" if res.passed else "FAIL", res.checked))
            if not res.passed:
                _say("counterexample: %s" % json.dumps(res.counterexample, sort_keys=True))
                status = EXIT_FAIL
    return status


def cmd_validate(args):
    if args.curve_file:
        try:
            entry = load_entry(args.curve_file)
        except (OSError, ParseError) as exc:
            raise UsageError("cannot load curve file: %s" % exc) from exc
    else:
        try:
            entry = load_entry(args.curve)
        except OSError as exc:
            raise UsageError("unknown curve %r" % args.curve) from exc
    rep = validate_params(entry, args.seed)
    _emit(rep.as_dict())
    for c in rep.checks:
        _say("%-26s %-5s %s" % (c["check"], c["outcome"], c["detail"]))
    _say("status: %s" % rep.status)
    return EXIT_FAIL if rep.failures else EXIT_OK


def _add_curve(p, default="toy-11"):
    p.add_argument("--curve", default=default, help="builtin curve name (default %(default)s)")
    p.add_argument("--curve-file", help="curve file in key = value format")


def build_parser():
    parser = argparse.ArgumentParser(prog="pairing-miller", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pair", help="compute Tate/Weil pairings or raw Miller values")
    _add_curve(p)
    p.add_argument("--engine", default="classic", choices=list(ENGINES))
    p.add_argument("--pairing", default="tate", choices=["tate", "weil", "miller-only"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--divisor-mode", action="store_true", help="Tate at (Q+S) - (S) instead of at Q")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("bench", help="time Miller loops")
    _add_curve(p, "bn254")
    p.add_argument("--engines", help="comma-separated engines (default: all that fit the curve)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--warmup", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="run invariant suites")
    _add_curve(p)
    p.add_argument("--suite", default="all", choices=["identities", "engines", "costs", "catalog", "all"])
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("validate-curve", help="check curve parameters")
    _add_curve(p)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, UnsupportedEngine) as exc:
        _say("error: %s" % exc)
        return EXIT_USAGE
    except SamplingError as exc:
        _say("error: %s" % exc)
        return EXIT_SAMPLING


if __name__ == "__main__":
    sys.exit(main())
