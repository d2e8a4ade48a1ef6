"""Operation counter and per-iteration step log for Miller loops."""
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction


@dataclass(frozen=True)
class StepRecord:
    index: int
    digit: int
    label: str
    dM: int
    dS: int
    dI: int
    terminal: bool = False
    points: int = 1


@dataclass
class OpCounter:
    """Tallies of full-extension M, S, I plus conjugations.

    Engines go through ``mul``/``sq``/``inv``/``conj`` so that only the
    accumulator updates are charged; line evaluation stays uncounted.
    """

    M: int = 0
    S: int = 0
    I: int = 0
    frobenius: int = 0
    steps: list = field(default_factory=list)
    factors: Counter = field(default_factory=Counter)

    def mul(self, a, b, factor=None):
        self.M += 1
        if factor is not None:
            self.factors[factor] += 1
        return a * b

    def sq(self, a):
        self.S += 1
        return a.square()

    def inv(self, a):
        self.I += 1
        return a.inverse()

    def conj(self, a):
        self.frobenius += 1
        return a.conjugate()

    def totals(self):
        return (self.M, self.S, self.I)

    def mark(self):
        return (self.M, self.S, self.I)

    def record(self, mark, index, digit, label, terminal=False, points=1):
        m, s, i = mark
        rec = StepRecord(index, digit, label, self.M - m, self.S - s, self.I - i, terminal, points)
        self.steps.append(rec)
        return rec


# cost model: per-step (M, S, I) for one evaluation point

COST_ROWS = {
    "classic": {"dbl": (2, 2, 0), "dbl+add": (4, 2, 0)},
    "bmx_binary": {"b=0": (2, 2, 0), "b=1": (2, 2, 0)},
    # the printed rows are per bit; one base-4 digit is two bits
    "bmx_radix4": {"q=0": (2, 4, 0), "q=1": (4, 4, 0), "q=2": (4, 4, 0), "q=3": (6, 4, 0)},
    "novel_generic": {"b=0,m=0": (1, 2, 0), "b=0,m=1": (1, 2, 0),
                      "b=1,m=1": (2, 2, 0), "b=1,m=0/parabola": (1, 2, 0)},
    "novel_even": {"b=0,m=0": (1, 1, 0), "b=0,m=1": (1, 1, 0),
                   "b=1,m=1": (2, 1, 0), "b=1,m=0/parabola": (1, 1, 0)},
    "bls_even": {"dbl": (1, 1, 0), "dbl+add": (2, 1, 0)},
}

# reference rows; the radix-4 q=1, q=2 rows are a model extension
PRINTED_ROWS = {
    "classic": ("dbl", "dbl+add"),
    "bmx_binary": ("b=0", "b=1"),
    "bmx_radix4": ("q=0", "q=3"),
    "novel_generic": ("b=0,m=0", "b=0,m=1", "b=1,m=1", "b=1,m=0/parabola"),
    "novel_even": ("b=0,m=0", "b=0,m=1", "b=1,m=1", "b=1,m=0/parabola"),
    "bls_even": ("dbl", "dbl+add"),
}

S_WEIGHT = Fraction(4, 5)


def weighted_cost(M, S, I=0):
    """M + 0.8 S as an exact rational; I is reported on its own."""
    return M + S_WEIGHT * S


@dataclass(frozen=True)
class PredictedStep:
    digit: int
    label: str
    cost: tuple
    terminal: bool = False


def _less(cost, dM):
    return (cost[0] - dM,) + tuple(cost[1:])


def predict_steps(engine, r, reaches_infinity=True):
    """Symbolic run of an engine's control flow over the digits of r.

    ``reaches_infinity`` says whether rP = O, i.e. whether the last step
    lands on O (true pairings) or the loop stops short (synthetic r).
    """
    if engine not in COST_ROWS:
        raise KeyError("no cost model for engine %r" % engine)
    if r < 1:
        raise ValueError("r must be positive")
    rows = COST_ROWS[engine]
    bits = [int(b) for b in bin(r)[3:]]
    steps = []
    if engine in ("classic", "bls_even"):
        for i, b in enumerate(bits):
            label = "dbl+add" if b else "dbl"
            last = reaches_infinity and i == len(bits) - 1
            cost = rows[label]
            if last and engine == "classic" and b:
                cost = _less(cost, 1)  # V_O = 1
            steps.append(PredictedStep(b, label, cost, last))
    elif engine == "bmx_binary":
        if not bits:
            return steps
        steps.append(PredictedStep(bits[0], "init", (1, 0, 0) if bits[0] else (0, 0, 0), True))
        for i, b in enumerate(bits[1:], start=1):
            last = reaches_infinity and i == len(bits) - 1
            steps.append(PredictedStep(b, "b=%d" % b, rows["b=%d" % b], last))
        if not reaches_infinity:
            steps.append(PredictedStep(0, "fixup", (1, 0, 0), True))
    elif engine == "bmx_radix4":
        digits = []
        n = r
        while n:
            digits.append(n % 4)
            n //= 4
        digits.reverse()
        steps.append(PredictedStep(digits[0], "init", (1, 0, 0) if digits[0] == 3 else (0, 0, 0), True))
        for i, q in enumerate(digits[1:], start=1):
            last = reaches_infinity and i == len(digits) - 1
            cost = rows["q=%d" % q]
            if last and q in (1, 3):
                cost = _less(cost, 1)
            steps.append(PredictedStep(q, "q=%d" % q, cost, last))
    else:
        m = 0
        for i, b in enumerate(bits):
            last = reaches_infinity and i == len(bits) - 1
            if b == 0:
                label = "b=0,m=%d" % m
                m = 1 - m
            elif m == 1:
                label = "b=1,m=1"
            else:
                label = "b=1,m=0/terminal" if last else "b=1,m=0/parabola"
                m = 1
            steps.append(PredictedStep(b, label, rows.get(label, rows["b=1,m=0/parabola"]), last))
        if m == 1 and not reaches_infinity:
            steps.append(PredictedStep(0, "fixup", (1, 0, 0), True))
    return steps


def predict_cost(engine, r, reaches_infinity=True):
    """(M, S, I) totals of one engine run with a single evaluation point."""
    steps = predict_steps(engine, r, reaches_infinity)
    return tuple(sum(s.cost[j] for s in steps) for j in range(3))


@dataclass
class CostReport:
    engine: str
    r: int
    totals: tuple
    interior_checked: int = 0
    mismatches: list = field(default_factory=list)
    boundary: list = field(default_factory=list)
    histogram: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.mismatches

    @property
    def first_mismatch(self):
        return self.mismatches[0] if self.mismatches else None

    def as_dict(self):
        M, S, I = self.totals
        return {
            "engine": self.engine,
            "r_bits": self.r.bit_length() if self.r else None,
            "hamming_weight": bin(self.r).count("1") if self.r else None,
            "totals": {"M": M, "S": S, "I": I},
            "weighted_cost": str(weighted_cost(M, S)),
            "deferred_inversions": 0 if self.engine in ("novel_even", "bls_even") else 1,
            "interior_checked": self.interior_checked,
            "histogram": self.histogram,
            "boundary": self.boundary,
            "mismatches": self.mismatches,
            "passed": self.passed,
        }

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True)


def verify_cost(step_log, engine, r=None, reaches_infinity=True):
    """Match every interior step's deltas against its table row.

    Boundary steps (init, the step landing on O, the closing fix-up) are
    checked against the symbolic prediction when r is given and listed
    apart; they never count as table mismatches.
    """
    rows = COST_ROWS[engine]
    totals = tuple(sum(getattr(s, a) for s in step_log) for a in ("dM", "dS", "dI"))
    rep = CostReport(engine, r or 0, totals)
    rep.histogram = dict(Counter(s.label for s in step_log))
    predicted = predict_steps(engine, r, reaches_infinity) if r else None
    if predicted is not None and [p.label.split("/")[0] for p in predicted] != [s.label.split("/")[0] for s in step_log]:
        rep.mismatches.append({"index": None, "problem": "step sequence differs from the symbolic run"})
        predicted = None
    for n, s in enumerate(step_log):
        got = (s.dM, s.dS, s.dI)
        if s.terminal:
            want = None
            if predicted is not None:
                want = tuple(c * s.points for c in predicted[n].cost)
            rep.boundary.append({"index": s.index, "label": s.label, "measured": got,
                                 "predicted": want, "match": want is None or want == got})
            continue
        row = rows.get(s.label)
        if row is None:
            rep.mismatches.append({"index": s.index, "label": s.label, "problem": "no table row"})
            continue
        want = tuple(c * s.points for c in row)
        rep.interior_checked += 1
        if got != want:
            rep.mismatches.append({"index": s.index, "label": s.label, "measured": got, "expected": want})
    return rep
