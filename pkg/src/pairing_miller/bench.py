"""Miller-loop timing harness.

Only the Miller function is timed (no final exponentiation).  For engines
returning a ``Fraction`` the single closing inversion is part of the
timed region.  All engines of one run see the same point sequence.
"""
import gc
import random
import statistics
import time
from dataclasses import asdict, dataclass

from .counting import OpCounter
from .curve import random_point
from .miller import DegenerateEvaluation, Fraction, get_engine
from .pairing import SamplingError, point_pool, sample_g1


@dataclass
class BenchResult:
    curve: str
    engine: str
    trials: int
    warmup: int
    median_s: float
    mean_s: float
    min_s: float
    counts: dict
    seed: int

    def as_dict(self):
        return {"type": "bench", **asdict(self)}


def bench_points(ctx, n, rng, tries=32):
    """n (P, Q) pairs; P has order r when the group order is known."""
    ordered = ctx.trace is not None
    Ps = [sample_g1(ctx, rng) if ordered else random_point(ctx.curve, rng) for _ in range(n)]
    Qs = point_pool(ctx, rng, n)
    pairs = list(zip(Ps, Qs))
    if ctx.p.bit_length() > 64:
        return pairs
    # small fields: drop pairs that hit a line zero, with a bounded refill
    good = []
    classic = get_engine("classic")
    for _ in range(tries):
        for P, Q in pairs:
            try:
                classic(ctx.curve, P, ctx.r, [Q])
                good.append((P, Q))
            except DegenerateEvaluation:
                pass
        if len(good) >= n:
            return good[:n]
        pairs = list(zip([sample_g1(ctx, rng) for _ in range(n)], point_pool(ctx, rng, n)))
    raise SamplingError("could not find %d usable benchmark points" % n)


def _once(fn, ctx, P, Q, counter=None):
    out = fn(ctx.curve, P, ctx.r, [Q], counter=counter)[0]
    return out.value(counter) if isinstance(out, Fraction) else out


def run_bench(ctx, engines, trials=100, warmup=3, seed=0):
    """Time each engine on the same points.

    Engines are interleaved within every trial so that load spikes on a
    shared machine hit all of them alike; the collector is paused while
    timing.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = random.Random(seed)
    points = bench_points(ctx, trials + warmup, rng)
    fns = [(name, get_engine(name)) for name in engines]
    for P, Q in points[:warmup]:
        for _, fn in fns:
            _once(fn, ctx, P, Q)
    times = {name: [] for name in engines}
    gc_was_on = gc.isenabled()
    gc.disable()
    try:
        for P, Q in points[warmup:]:
            for name, fn in fns:
                t0 = time.perf_counter()
                _once(fn, ctx, P, Q)
                times[name].append(time.perf_counter() - t0)
    finally:
        if gc_was_on:
            gc.enable()
    results = []
    for name, fn in fns:
        c = OpCounter()
        _once(fn, ctx, *points[warmup], counter=c)
        counts = {"M": c.M, "S": c.S, "I": c.I, "frobenius": c.frobenius}
        t = times[name]
        results.append(BenchResult(ctx.name, name, trials, warmup, statistics.median(t),
                                   statistics.fmean(t), min(t), counts, seed))
    return results


def ratios(results):
    """median(a) / median(b) for every later engine a against every earlier b."""
    out = {}
    for i, a in enumerate(results):
        for b in results[:i]:
            out["%s/%s" % (a.engine, b.engine)] = a.median_s / b.median_s
    return out
