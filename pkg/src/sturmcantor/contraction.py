"""Contracted rotations, their invariant Cantor sets, and the parametrization.

The map f(x) = {lambda x + delta} on [0, 1) is a two-branch affine
contraction.  For an irrational target rotation number theta the unique
delta with rotation number theta is the series
delta = (1 - lambda)(1 + sum_k (floor((k+1)theta) - floor(k theta)) lambda^k),
and the attractor is parametrized by an increasing right-continuous map phi
whose jumps sit at the orbit {l theta} of the rotation.  Gap endpoints are
kept in the exact form g*delta + h with g, h rational, which makes endpoint
equality decidable and keeps membership tests honest at finite precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .exactnum import (
    DEFAULT_BUDGET,
    DomainError,
    IntervalReal,
    PrecisionBudget,
    QuadraticSurd,
    ResolutionExceeded,
    certified_floor,
    compare,
    to_interval,
)
from .sturmword import Alphabet, SturmianSource

__all__ = [
    "ContractionParams",
    "CantorParams",
    "CantorPoint",
    "CantorGap",
    "MembershipVerdict",
    "Orbit",
    "RationalCycle",
    "step",
    "orbit",
    "rotation_number_estimate",
    "find_rational_cycle",
    "delta_of",
    "phi",
    "phi_at_multiples",
    "cantor_gaps",
    "membership",
    "transcendence_form",
]

LambdaLike = Union[Fraction, QuadraticSurd]


def _check_lambda(lam) -> LambdaLike:
    if isinstance(lam, int):
        lam = Fraction(lam)
    if isinstance(lam, Fraction):
        if not 0 < lam < 1:
            raise DomainError("contraction factor must lie in (0, 1)")
        return lam
    if isinstance(lam, QuadraticSurd):
        if not (lam > 0 and lam < 1):
            raise DomainError("contraction factor must lie in (0, 1)")
        return lam
    raise DomainError("contraction factor must be rational or a quadratic surd")


@dataclass(frozen=True)
class ContractionParams:
    """Parameters (lambda, delta) of x |-> {lambda x + delta}."""

    lam: LambdaLike
    delta: Union[Fraction, IntervalReal]

    def __post_init__(self):
        object.__setattr__(self, "lam", _check_lambda(self.lam))
        d = self.delta
        if isinstance(d, int):
            object.__setattr__(self, "delta", Fraction(d))
            d = self.delta
        if compare(to_interval(d), to_interval(1 - self.lam)) <= 0 \
                or compare(to_interval(d), Fraction(1)) >= 0:
            raise DomainError("need 1 - lambda < delta < 1")

    @property
    def breakpoint(self):
        """The branch point (1 - delta)/lambda where the map wraps."""
        if isinstance(self.delta, Fraction) and isinstance(self.lam, Fraction):
            return (1 - self.delta) / self.lam
        return (1 - to_interval(self.delta)) / to_interval(self.lam)


class CantorParams:
    """(lambda, theta) with delta = delta(lambda, theta) derived on demand."""

    def __init__(self, lam, theta, budget: PrecisionBudget = DEFAULT_BUDGET):
        self.lam = _check_lambda(lam)
        self.theta = theta
        self.budget = budget
        self._char = SturmianSource(theta, Fraction(0), "characteristic",
                                    Alphabet(0, 1, 2), budget)
        self._delta: IntervalReal | None = None

    @property
    def delta(self) -> IntervalReal:
        if self._delta is None:
            self._delta = delta_of(self.lam, self.theta, precision_digits=50,
                                   _char=self._char)
        return self._delta

    def contraction(self) -> ContractionParams:
        return ContractionParams(self.lam, self.delta)


# ---------------------------------------------------------------------------
# the defining series for delta


def _rotation_letters(char: SturmianSource, count: int) -> str:
    """'0'/'1' letters floor((k+1)theta) - floor(k theta) for k = 1..count."""
    return char.prefix01(count)


def _geometric_head(lam: LambdaLike, letters: str):
    """sum_{k=1..K} letters[k-1] * lam^k, exactly."""
    if not letters:
        return Fraction(0)
    if isinstance(lam, Fraction) and lam.numerator == 1:
        b = lam.denominator
        return Fraction(int(letters, b), b ** len(letters))
    if isinstance(lam, Fraction):
        # integer Horner: acc ends as sum c_i p^(i-1) q^(K-i), value = p*acc/q^K
        p, q = lam.numerator, lam.denominator
        acc = 0
        qpow = 1
        for ch in reversed(letters):
            acc = acc * p + (qpow if ch == "1" else 0)
            qpow *= q
        return Fraction(acc * p, qpow)
    total = Fraction(0)
    power = Fraction(1)
    for ch in letters:
        power = power * lam
        if ch == "1":
            total = power + total
    return total


def _power_below(lam: LambdaLike, target: Fraction) -> int:
    """Smallest convenient K with lam^K <= target (overshoot allowed)."""
    k = 8
    while True:
        p = lam ** k if isinstance(lam, Fraction) else _surd_pow(lam, k)
        if compare(to_interval(p), target) <= 0:
            return k
        k *= 2
        if k > 1 << 26:
            raise DomainError("contraction factor is too close to 1")


def _surd_pow(lam: QuadraticSurd, k: int):
    out = Fraction(1)
    base = lam
    while k:
        if k & 1:
            out = base * out
        k >>= 1
        if k:
            base = base * base
    return out


def _lam_pow(lam: LambdaLike, k: int):
    if k == 0:
        return Fraction(1)
    if isinstance(lam, Fraction):
        return lam ** k
    return _surd_pow(lam, k)


def delta_of(lam, theta, precision_digits: int = 50,
             budget: PrecisionBudget = DEFAULT_BUDGET,
             _char: SturmianSource | None = None) -> IntervalReal:
    """The unique delta in (1 - lambda, 1) with rotation number theta.

    Returns a refinable enclosure; the truncation at K terms carries the exact
    tail bound lam^(K+1) since the series coefficients are 0 or 1.
    """
    lam = _check_lambda(lam)
    char = _char or SturmianSource(theta, Fraction(0), "characteristic",
                                   Alphabet(0, 1, 2), budget)

    def gen(bits: int) -> tuple[Fraction, Fraction]:
        target = Fraction(1, 2 ** (bits + 1))
        K = _power_below(lam, target)
        letters = _rotation_letters(char, K)
        head = _geometric_head(lam, letters)
        one_minus = 1 - lam
        lo = one_minus * (1 + head)
        tail = _lam_pow(lam, K + 1)
        if isinstance(lo, QuadraticSurd) or isinstance(tail, QuadraticSurd):
            lo_iv = to_interval(lo).refine(bits + 4)
            tail_hi = to_interval(tail).refine(bits + 4).upper
            return lo_iv.lower, lo_iv.upper + tail_hi
        return lo, lo + tail

    seed = max(16, int(precision_digits * math.log2(10)) + 2)
    return IntervalReal.from_thunk(gen, seed_bits=seed)


# ---------------------------------------------------------------------------
# dynamics


def step(params: ContractionParams, x, budget: PrecisionBudget = DEFAULT_BUDGET):
    """One application of x |-> {lambda x + delta}; returns (value, wrapped)."""
    if isinstance(x, int):
        x = Fraction(x)
    exact = isinstance(x, Fraction) and isinstance(params.lam, Fraction) \
        and isinstance(params.delta, Fraction)
    if isinstance(x, Fraction):
        if not 0 <= x < 1:
            raise DomainError("the phase space is [0, 1)")
    if exact:
        y = params.lam * x + params.delta
        wrapped = y >= 1
        return y - 1 if wrapped else y, bool(wrapped)
    y = to_interval(params.lam) * to_interval(x) + to_interval(params.delta)
    w = certified_floor(y, budget)
    if w not in (0, 1):
        raise DomainError("step escaped [0, 2); inputs outside the phase space")
    return y - w, w == 1


@dataclass(frozen=True)
class Orbit:
    """Certified orbit points (lo, hi enclosures) and the total wrap count."""

    points: list
    wraps: int


_STORE_BITS = 192


def _round_pair(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    # outward rounding for storage; exact values below the threshold pass through
    if lo.denominator.bit_length() <= _STORE_BITS and hi.denominator.bit_length() <= _STORE_BITS:
        return lo, hi
    scale = 1 << _STORE_BITS
    return (Fraction(math.floor(lo * scale), scale),
            Fraction(-math.floor(-hi * scale), scale))


def _orbit_fixed_point(lam: LambdaLike, delta: IntervalReal, x0: Fraction, n: int,
                       budget: PrecisionBudget, keep_points: bool):
    """Ball-arithmetic iteration with restarts when a wrap is ambiguous."""
    bits = budget.initial_bits
    while True:
        scale = 1 << bits
        d = delta.refine(bits + 2)
        dlo = math.floor(d.lower * scale)
        dhi = -math.floor(-d.upper * scale)
        if isinstance(lam, Fraction):
            pl, ql = lam.numerator, lam.denominator
            lam_bounds = None
        else:
            llo, lhi = lam.enclosure(bits + 2)
            lam_bounds = (math.floor(llo * scale), -math.floor(-lhi * scale))
        xlo = math.floor(x0 * scale)
        xhi = -math.floor(-x0 * scale)
        points = [(x0, x0)] if keep_points else None
        wraps = 0
        ok = True
        for _ in range(n):
            if lam_bounds is None:
                ylo = (pl * xlo) // ql + dlo
                yhi = -((-pl * xhi) // ql) + dhi
            else:
                ylo = (lam_bounds[0] * xlo >> bits) + dlo
                yhi = -((-lam_bounds[1] * xhi) >> bits) + dhi
            if ylo >= scale:
                wraps += 1
                ylo -= scale
                yhi -= scale
            elif yhi < scale:
                pass
            else:
                ok = False
                break
            xlo, xhi = ylo, yhi
            if keep_points:
                points.append(_round_pair(Fraction(xlo, scale), Fraction(xhi, scale)))
        if ok:
            return Orbit(points if keep_points else [], wraps)
        if bits >= budget.max_bits:
            raise ResolutionExceeded(
                f"orbit wrap decision undecidable at {budget.max_bits} bits", bits=bits)
        bits = min(bits * 2, budget.max_bits)


def orbit(params: ContractionParams, x0, n: int,
          budget: PrecisionBudget = DEFAULT_BUDGET, keep_points: bool = True) -> Orbit:
    """Iterate the contraction n times from x0, counting wraps.

    Exact rational data iterates exactly; interval-backed delta uses scaled
    integer balls whose working precision doubles whenever a wrap decision is
    ambiguous, so every recorded wrap is certified.
    """
    if n < 0:
        raise DomainError("orbit length must be nonnegative")
    if isinstance(x0, int):
        x0 = Fraction(x0)
    if isinstance(x0, Fraction) and not 0 <= x0 < 1:
        raise DomainError("the phase space is [0, 1)")
    if isinstance(params.lam, Fraction) and isinstance(params.delta, Fraction) \
            and isinstance(x0, Fraction):
        pts = [(x0, x0)] if keep_points else None
        x = x0
        wraps = 0
        for _ in range(n):
            x, wrapped = step(params, x)
            wraps += wrapped
            if keep_points:
                pts.append(_round_pair(x, x))
        return Orbit(pts if keep_points else [], wraps)
    if not isinstance(x0, Fraction):
        raise DomainError("orbit start must be rational")
    return _orbit_fixed_point(params.lam, to_interval(params.delta), x0, n,
                              budget, keep_points)


def rotation_number_estimate(params: ContractionParams, n: int,
                             budget: PrecisionBudget = DEFAULT_BUDGET) -> tuple[Fraction, Fraction]:
    """[w/n - 1/n, w/n + 1/n] from the certified wrap count of the orbit of 0.

    The true rotation number is guaranteed to lie within the interval widened
    by a further 1/n on each side; for the orbit of 0 the raw interval
    already contains it.
    """
    if n < 1:
        raise DomainError("need n >= 1")
    w = orbit(params, Fraction(0), n, budget, keep_points=False).wraps
    return Fraction(w - 1, n), Fraction(w + 1, n)


@dataclass(frozen=True)
class RationalCycle:
    """Exact periodic regime of a rational-parameter contraction.

    After `start` steps the wrap pattern repeats with the given period; the
    rotation number is exactly wraps_per_period / period.
    """

    start: int
    period: int
    wraps_per_period: int
    fixed_points: list

    @property
    def rotation_number(self) -> Fraction:
        return Fraction(self.wraps_per_period, self.period)


def find_rational_cycle(params: ContractionParams, max_steps: int = 4096) -> Optional[RationalCycle]:
    """Detect and exactly verify the eventual cycle of a rational orbit of 0.

    A candidate period comes from seeing a rounded orbit point again; it is
    accepted only if the affine extrapolation of each phase stays on one side
    of the branch point, which pins the whole future itinerary.
    """
    if not (isinstance(params.lam, Fraction) and isinstance(params.delta, Fraction)):
        raise DomainError("exact cycle detection needs rational parameters")
    lam, delta = params.lam, params.delta
    beta = (1 - delta) / lam
    xs = [Fraction(0)]
    wraps_bits = []
    seen: dict[Fraction, int] = {}
    scale = 1 << 80

    for n_step in range(max_steps):
        x, wrapped = step(params, xs[-1])
        xs.append(x)
        wraps_bits.append(1 if wrapped else 0)
        key = Fraction(math.floor(x * scale), scale)
        prev = seen.get(key)
        seen[key] = len(xs) - 1
        if prev is None:
            continue
        p = len(xs) - 1 - prev
        n = len(xs) - 1
        if n - 2 * p < 0:
            continue
        lam_p = lam ** p
        stars = []
        good = True
        for j in range(p):
            a = xs[n - 2 * p + j]
            b = xs[n - p + j]
            star = a + (b - a) / (1 - lam_p)
            lo, hi = min(a, star), max(a, star)
            if lo <= beta <= hi:
                good = False
                break
            stars.append((star, b >= beta))
        if not good:
            continue
        consistent = all(
            (lam * stars[j][0] + delta - (1 if stars[j][1] else 0)) == stars[(j + 1) % p][0]
            for j in range(p))
        if not consistent:
            continue
        return RationalCycle(n - 2 * p, p, sum(wraps_bits[n - p:n]),
                             [s for s, _ in stars])
    return None


# ---------------------------------------------------------------------------
# the parametrization phi


def _ceil_letters_series(theta, y, count: int, budget: PrecisionBudget) -> str:
    """Letters ceil((k+1)theta - y) - ceil(k theta - y) for k = 1..count."""
    out = []
    prev = _exact_ceil(theta, 1, y, budget)
    for k in range(2, count + 2):
        cur = _exact_ceil(theta, k, y, budget)
        stepv = cur - prev
        if stepv not in (0, 1):
            raise DomainError("series letter outside {0,1}; slope not in (0,1)?")
        out.append("1" if stepv else "0")
        prev = cur
    return "".join(out)


def _exact_ceil(theta, k: int, y, budget: PrecisionBudget) -> int:
    """ceil(k*theta - y) across the supported y backends."""
    if isinstance(y, (int, Fraction)):
        from .exactnum import ceil_linear
        return ceil_linear(theta, k, -Fraction(y), budget)
    if isinstance(y, QuadraticSurd):
        val = k * theta - y if isinstance(theta, QuadraticSurd) else None
        if val is None:
            raise DomainError("surd offsets need a surd slope")
        if isinstance(val, Fraction):
            return -((-val).numerator // val.denominator)
        return math.ceil(val)
    if isinstance(y, IntervalReal):
        from .exactnum import certified_ceil
        iv = to_interval(theta) * k - y
        return certified_ceil(iv, budget)
    raise DomainError(f"unsupported evaluation point {type(y).__name__}")


def phi(cparams: CantorParams, y, precision_digits: int = 50) -> IntervalReal:
    """The conjugating map phi(y) = 1 + xi(0) + floor(y - theta) - xi(-y).

    Here xi(z) is the power-series value at lambda of the ceiling-difference
    word with offset z; both series have 0/1 coefficients and converge
    geometrically.  Integer y is exact (phi(n) = n); exact backends evaluate
    symbolically at y = {l theta}, where the lone integer hit in the series
    is handled by exact arithmetic.
    """
    lam = cparams.lam
    theta = cparams.theta
    budget = cparams.budget
    if isinstance(y, int):
        return IntervalReal.from_fraction(y)
    if isinstance(y, Fraction) and y.denominator == 1:
        return IntervalReal.from_fraction(y)

    from .exactnum import floor_linear

    def gen(bits: int) -> tuple[Fraction, Fraction]:
        target = Fraction(1, 2 ** (bits + 2))
        K = _power_below(lam, target * (1 - to_interval(lam).upper))
        char_letters = _rotation_letters(cparams._char, K)
        head0 = _geometric_head(lam, char_letters)
        if isinstance(y, IntervalReal):
            fl = certified_floor(y - to_interval(theta), budget)
        elif isinstance(y, QuadraticSurd):
            fl = math.floor(y - theta)
        else:
            fl = floor_linear(theta, -1, Fraction(y), budget)
        neg_letters = _ceil_letters_series(theta, y, K, budget)
        head1 = _geometric_head(lam, neg_letters)
        tail = _lam_pow(lam, K + 1) / (1 - lam)
        base = 1 + fl + head0 - head1
        if isinstance(base, QuadraticSurd) or isinstance(tail, QuadraticSurd):
            b_iv = to_interval(base).refine(bits + 4)
            t_hi = to_interval(tail).refine(bits + 4).upper
            return b_iv.lower - t_hi, b_iv.upper + t_hi
        return base - tail, base + tail

    seed = max(16, int(precision_digits * math.log2(10)) + 2)
    return IntervalReal.from_thunk(gen, seed_bits=seed)


# ---------------------------------------------------------------------------
# exact-form Cantor points and gaps


@dataclass(frozen=True)
class CantorPoint:
    """A real of the exact form g * delta(lambda, theta) + h.

    g and h are exact (rational, or surd when lambda is one); equality of two
    points is decidable from the forms because delta is irrational.
    """

    g: Union[Fraction, QuadraticSurd]
    h: Union[Fraction, QuadraticSurd]
    params: "CantorParams"

    def enclosure(self, digits: int = 50) -> IntervalReal:
        bits = max(16, int(digits * math.log2(10)) + 4)
        d = self.params.delta.refine(bits + self._g_bits() + 4)
        return to_interval(self.g) * d + to_interval(self.h)

    def _g_bits(self) -> int:
        return to_interval(self.g).mag_bits() + 2

    def compare(self, other, budget: PrecisionBudget | None = None) -> int:
        """Certified three-way comparison against another point or number."""
        budget = budget or self.params.budget
        if isinstance(other, CantorPoint):
            dg = _exact_sub(self.g, other.g)
            dh = _exact_sub(self.h, other.h)
        else:
            dg, dh = self.g, _exact_sub(self.h, other)
        if _exact_is_zero(dg):
            return compare(to_interval(dh), Fraction(0), budget)
        diff = to_interval(dg) * self.params.delta + to_interval(dh)
        return compare(diff, Fraction(0), budget)

    def __repr__(self):
        return f"CantorPoint({self.g}*delta + {self.h})"


def _exact_sub(a, b):
    return a - b


def _exact_is_zero(a) -> bool:
    return isinstance(a, (int, Fraction)) and a == 0


@dataclass(frozen=True)
class CantorGap:
    """The open interval removed around the l-th rotation point.

    left = phi({l theta}-), right = phi({l theta}); the width is exactly
    lambda^(l-1) (1 - lambda).
    """

    l: int
    left: CantorPoint
    right: CantorPoint
    width: Union[Fraction, QuadraticSurd]


@dataclass(frozen=True)
class MembershipVerdict:
    """Outcome of a membership test at finite precision.

    kind is 'in-gap' (with gap_index), 'in-cantor' (no gap of width at least
    10^-precision contains the point), or 'unresolved'.
    """

    kind: str
    gap_index: Optional[int]
    precision_digits: int


def phi_at_multiples(cparams: CantorParams, l: int):
    """phi({l theta}) in exact form, plus the left limit when l > 0.

    Positive l: phi({l theta}) = (1-lam^l)/(1-lam) delta - sum_{k=1}^{l}
    lam^(l-k) (floor(k theta) - floor((k-1) theta)), and the left limit sits
    lam^(l-1)(1-lam) below it.  Negative l uses the mirrored formula with the
    extra lam^l term.  Returns (value, left_limit_or_None).
    """
    if l == 0:
        raise DomainError("need a nonzero multiple")
    lam = cparams.lam
    char = cparams._char
    if l > 0:
        g = (1 - _lam_pow(lam, l)) / (1 - lam)
        letters = "0" + char.prefix01(l - 1)  # floor(k theta)-floor((k-1) theta), k=1..l
        h = Fraction(0)
        for k in range(1, l + 1):
            if letters[k - 1] == "1":
                h = h - _lam_pow(lam, l - k)
        value = CantorPoint(g, h, cparams)
        width = _lam_pow(lam, l - 1) * (1 - lam)
        left = CantorPoint(g, _exact_sub(h, width), cparams)
        return value, left
    m = -l
    g = (1 - _lam_pow_neg(lam, m)) / (1 - lam)
    h = _lam_pow_neg(lam, m)
    letters = char.prefix01(m - 1) if m > 1 else ""
    for k in range(1, m):
        if letters[k - 1] == "1":
            h = h + _lam_pow_signed(lam, k - m)
    return CantorPoint(g, h, cparams), None


def _lam_pow_neg(lam: LambdaLike, m: int):
    return 1 / _lam_pow(lam, m)


def _lam_pow_signed(lam: LambdaLike, e: int):
    if e >= 0:
        return _lam_pow(lam, e)
    return 1 / _lam_pow(lam, -e)


def cantor_gaps(cparams: CantorParams, L: int) -> list[CantorGap]:
    """The first L removed intervals, one per positive multiple of theta."""
    if L < 1:
        raise DomainError("need at least one gap")
    out = []
    for l in range(1, L + 1):
        value, left = phi_at_multiples(cparams, l)
        width = _lam_pow(cparams.lam, l - 1) * (1 - cparams.lam)
        out.append(CantorGap(l, left, value, width))
    return out


def membership(cparams: CantorParams, z, precision_digits: int = 30) -> MembershipVerdict:
    """Locate z relative to every gap wide enough to matter at this precision.

    'in-cantor' is a bounded-resolution claim: gaps thinner than
    10^-precision_digits cannot be excluded.  Gap endpoints themselves belong
    to the set.
    """
    threshold = Fraction(1, 10 ** precision_digits)
    budget = cparams.budget
    count = 0
    while True:
        width = _lam_pow(cparams.lam, count) * (1 - cparams.lam)
        if compare(to_interval(width), threshold, budget) < 0:
            break
        count += 1
    gap_list = cantor_gaps(cparams, count) if count else []
    for gap in gap_list:
        try:
            left_cmp = gap.left.compare(z, budget)
            if left_cmp >= 0:        # z <= left endpoint: outside this gap
                continue
            right_cmp = gap.right.compare(z, budget)
            if right_cmp <= 0:       # z >= right endpoint
                continue
        except ResolutionExceeded:
            return MembershipVerdict("unresolved", None, precision_digits)
        return MembershipVerdict("in-gap", gap.l, precision_digits)
    return MembershipVerdict("in-cantor", None, precision_digits)


def transcendence_form(b: int, theta, m: int) -> tuple[Fraction, Fraction]:
    """Coefficients (coefficient, A_m) with phi({m theta}) = coefficient*delta + A_m.

    Requires lambda = 1/b.  The coefficient (1 - b^-m)/(1 - b^-1) is a nonzero
    rational for every nonzero m, and A_m is rational.
    """
    if b < 2:
        raise DomainError("base must be at least 2")
    if m == 0:
        raise DomainError("need a nonzero multiple")
    coeff = (1 - Fraction(b) ** (-m)) / (1 - Fraction(1, b))
    char = SturmianSource(theta, Fraction(0), "characteristic", Alphabet(0, 1, 2))
    if m > 0:
        letters = "0" + char.prefix01(m - 1)
        a_m = Fraction(0)
        for k in range(1, m + 1):
            if letters[k - 1] == "1":
                a_m -= Fraction(b) ** (k - m)
    else:
        mm = -m
        a_m = Fraction(b) ** mm
        letters = char.prefix01(mm - 1) if mm > 1 else ""
        for k in range(1, mm):
            if letters[k - 1] == "1":
                a_m += Fraction(b) ** (-k + mm)
    return coeff, a_m
