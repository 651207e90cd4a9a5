"""Exact arithmetic backends: rationals, quadratic surds, refinable interval reals.

Every floor/ceiling/branch decision taken by the rest of the package routes
through this module, so that a result is either exact or certified by an
interval whose endpoints are exact rationals.  Three kinds of real number are
supported:

* ``fractions.Fraction`` (aliased ``Rational``) for exact rational values,
* ``QuadraticSurd`` for numbers of the form ``(p + r*sqrt(d))/q``,
* ``IntervalReal`` for values known only through a refinable enclosure.

Slope and intercept inputs are parsed from a small text grammar::

    theta:  quad:(p+sqrt(d))/q | cf:[a1,a2|b1,b2] | dec:<decimal>+-<error>
    rho:    rat:p/q | mult:j | dec:<decimal>+-<error>

``cf:`` lists are eventually periodic (the part after ``|`` repeats; with no
``|`` the whole list repeats) and are converted to an exact quadratic surd.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

__all__ = [
    "Rational",
    "QuadraticSurd",
    "IntervalReal",
    "PrecisionBudget",
    "RhoMultiple",
    "DomainError",
    "ResolutionExceeded",
    "DivisionByPossibleZero",
    "DEFAULT_BUDGET",
    "certified_floor",
    "certified_ceil",
    "eval_enclosure",
    "sqrt_enclosure",
    "compare",
    "to_interval",
    "floor_linear",
    "ceil_linear",
    "parse_theta",
    "parse_rho",
    "decimal_str",
]

Rational = Fraction


class DomainError(ValueError):
    """An argument is outside the mathematical domain of the operation."""


class ResolutionExceeded(ArithmeticError):
    """An enclosure could not be refined enough to decide a comparison.

    Carries the number of bits reached so callers can report how hard the
    decision was attempted before giving up.
    """

    def __init__(self, message: str, bits: int = 0):
        super().__init__(message)
        self.bits = bits


class DivisionByPossibleZero(ArithmeticError):
    """A divisor enclosure contains zero and cannot be refined away."""


@dataclass(frozen=True)
class PrecisionBudget:
    """Doubling schedule of working precisions, in bits."""

    initial_bits: int = 256
    max_bits: int = 2 ** 20

    def __post_init__(self):
        if self.initial_bits <= 0 or self.initial_bits > self.max_bits:
            raise DomainError("need 0 < initial_bits <= max_bits")

    def schedule(self):
        bits = self.initial_bits
        while bits < self.max_bits:
            yield bits
            bits *= 2
        yield self.max_bits


DEFAULT_BUDGET = PrecisionBudget()


# ---------------------------------------------------------------------------
# quadratic surds


def _squarefree_split(d: int) -> tuple[int, int]:
    """Return (s, d0) with d = s*s*d0 and d0 square-reduced (best effort).

    Trial division up to 10**4 plus a perfect-square check on the cofactor;
    larger hidden square factors are left in place, which affects only the
    canonical spelling, never the value.
    """
    s, rest = 1, d
    f = 2
    while f * f <= rest and f <= 10_000:
        while rest % (f * f) == 0:
            rest //= f * f
            s *= f
        f += 1 if f == 2 else 2
    root = math.isqrt(rest)
    if root * root == rest:
        rest, s = 1, s * root
    return s, rest


class QuadraticSurd:
    """The real number (p + r*sqrt(d))/q with integer p, r, q and nonsquare d.

    Canonical form: q > 0, r != 0, gcd(p, r, q) = 1, and square factors of d
    folded into r.  Arithmetic stays inside one quadratic field; mixing two
    different d values raises DomainError.  Values that become rational are
    returned as Fraction.
    """

    __slots__ = ("p", "r", "q", "d")

    def __new__(cls, p: int, r: int, q: int, d: int):
        if q == 0:
            raise DomainError("zero denominator")
        if d <= 0:
            raise DomainError("radicand must be positive")
        s, d0 = _squarefree_split(d)
        if d0 == 1:
            raise DomainError("radicand is a perfect square; use Fraction")
        p, r, d = p, r * s, d0
        if r == 0:
            raise DomainError("zero radical part; use Fraction")
        if q < 0:
            p, r, q = -p, -r, -q
        g = math.gcd(math.gcd(abs(p), abs(r)), q)
        self = object.__new__(cls)
        object.__setattr__(self, "p", p // g)
        object.__setattr__(self, "r", r // g)
        object.__setattr__(self, "q", q // g)
        object.__setattr__(self, "d", d)
        return self

    def __setattr__(self, *a):
        raise AttributeError("QuadraticSurd is immutable")

    @staticmethod
    def make(p, r, q, d) -> Union["QuadraticSurd", Fraction]:
        """Like the constructor, but collapses rational results to Fraction."""
        if r == 0:
            return Fraction(p, q)
        s, d0 = _squarefree_split(d)
        if d0 == 1:
            return Fraction(p + r * s, q)
        return QuadraticSurd(p, r, q, d)

    # -- sign machinery ----------------------------------------------------

    def _num_sign(self) -> int:
        """Sign of p + r*sqrt(d) (never 0: the value is irrational)."""
        p, r, d = self.p, self.r, self.d
        if r > 0:
            if p >= 0:
                return 1
            return 1 if p * p < r * r * d else -1
        if p <= 0:
            return -1
        return 1 if p * p > r * r * d else -1

    def sign(self) -> int:
        return self._num_sign()

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, QuadraticSurd):
            if other.d != self.d:
                raise DomainError("cannot mix sqrt(%d) and sqrt(%d)" % (self.d, other.d))
            return other.p, other.r, other.q
        if isinstance(other, int):
            return other, 0, 1
        if isinstance(other, Fraction):
            return other.numerator, 0, other.denominator
        return None

    def __add__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        p2, r2, q2 = co
        return QuadraticSurd.make(self.p * q2 + p2 * self.q, self.r * q2 + r2 * self.q,
                                  self.q * q2, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.p, -self.r, self.q, self.d)

    def __sub__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        p2, r2, q2 = co
        return QuadraticSurd.make(self.p * q2 - p2 * self.q, self.r * q2 - r2 * self.q,
                                  self.q * q2, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        p2, r2, q2 = co
        num_p = self.p * p2 + self.r * r2 * self.d
        num_r = self.p * r2 + self.r * p2
        return QuadraticSurd.make(num_p, num_r, self.q * q2, self.d)

    __rmul__ = __mul__

    def _inverse(self):
        # q/(p + r*sqrt(d)) rationalised by the conjugate
        norm = self.p * self.p - self.r * self.r * self.d  # never 0 (irrational)
        return QuadraticSurd(self.q * self.p, -self.q * self.r, norm, self.d)

    def __truediv__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        p2, r2, q2 = co
        if p2 == 0 and r2 == 0:
            raise ZeroDivisionError("division by zero")
        if r2 == 0:
            return QuadraticSurd(self.p * q2, self.r * q2, self.q * p2, self.d)
        return self * QuadraticSurd(p2, r2, q2, self.d)._inverse()

    def __rtruediv__(self, other):
        inv = self._inverse()
        return inv * other

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd(self.p, -self.r, self.q, self.d)

    # -- order and floors ----------------------------------------------------

    def _cmp(self, other) -> int:
        diff = self - other
        if isinstance(diff, Fraction):
            return (diff > 0) - (diff < 0)
        return diff.sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, QuadraticSurd):
            return (self.p, self.r, self.q, self.d) == (other.p, other.r, other.q, other.d)
        if isinstance(other, (int, Fraction)):
            return False  # surds are irrational
        return NotImplemented

    def __hash__(self):
        return hash(("QuadraticSurd", self.p, self.r, self.q, self.d))

    def __floor__(self) -> int:
        p, r, q, d = self.p, self.r, self.q, self.d
        s = math.isqrt(r * r * d)
        # r*sqrt(d) lies strictly between s and s+1 (sign-adjusted); the open
        # unit interval around the numerator pins the floor exactly.
        if r > 0:
            return (p + s) // q
        return (p - s - 1) // q

    def __ceil__(self) -> int:
        return math.floor(self) + 1  # irrational, never an integer

    def enclosure(self, bits: int) -> tuple[Fraction, Fraction]:
        """Certified enclosure of width at most 2**-bits."""
        shift = bits + max(0, abs(self.r).bit_length() - self.q.bit_length()) + 2
        scale = 1 << shift
        s = math.isqrt(self.d * scale * scale)
        if self.r > 0:
            lo = self.p * scale + self.r * s
            hi = self.p * scale + self.r * (s + 1)
        else:
            lo = self.p * scale + self.r * (s + 1)
            hi = self.p * scale + self.r * s
        return Fraction(lo, self.q * scale), Fraction(hi, self.q * scale)

    def as_interval(self) -> "IntervalReal":
        lo, hi = self.enclosure(64)
        return IntervalReal(lo, hi, self.enclosure)

    def __repr__(self):
        return f"QuadraticSurd(({self.p}{self.r:+}*sqrt({self.d}))/{self.q})"


# ---------------------------------------------------------------------------
# interval reals


def _floor_fraction(x: Fraction) -> int:
    return x.numerator // x.denominator


class IntervalReal:
    """A real number known through a certified enclosure [lower, upper].

    ``generator`` maps a bit count to a fresh enclosure of the same value;
    refinement intersects the fresh enclosure with the current one, so
    higher-precision enclosures are always sub-intervals of earlier ones.
    Values without a generator (exact rationals, fixed decimal+-error data)
    simply cannot shrink below their stated width.
    """

    __slots__ = ("lower", "upper", "generator")

    def __init__(self, lower: Fraction, upper: Fraction,
                 generator: Callable[[int], tuple[Fraction, Fraction]] | None = None):
        if lower > upper:
            raise DomainError("interval endpoints out of order")
        object.__setattr__(self, "lower", Fraction(lower))
        object.__setattr__(self, "upper", Fraction(upper))
        object.__setattr__(self, "generator", generator)

    def __setattr__(self, *a):
        raise AttributeError("IntervalReal is immutable")

    # -- basics ---------------------------------------------------------------

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def is_exact(self) -> bool:
        return self.lower == self.upper

    @staticmethod
    def from_fraction(x) -> "IntervalReal":
        f = Fraction(x)
        return IntervalReal(f, f)

    @staticmethod
    def from_decimal(mid: Fraction, err: Fraction) -> "IntervalReal":
        if err < 0:
            raise DomainError("negative error bound")
        lo, hi = mid - err, mid + err
        return IntervalReal(lo, hi, lambda bits: (lo, hi))

    @staticmethod
    def from_thunk(gen: Callable[[int], tuple[Fraction, Fraction]],
                   seed_bits: int = 32) -> "IntervalReal":
        lo, hi = gen(seed_bits)
        return IntervalReal(lo, hi, gen)

    def refine(self, bits: int) -> "IntervalReal":
        if self.generator is None:
            return self
        lo, hi = self.generator(bits)
        nlo = max(lo, self.lower)
        nhi = min(hi, self.upper)
        if nlo > nhi:
            raise DomainError("inconsistent refinement; generator is not an enclosure")
        return IntervalReal(nlo, nhi, self.generator)

    def mag_bits(self) -> int:
        m = max(abs(self.lower), abs(self.upper))
        if m == 0:
            return 0
        return max(0, m.numerator.bit_length() - m.denominator.bit_length() + 1)

    # -- arithmetic -----------------------------------------------------------

    @staticmethod
    def _lift(x) -> "IntervalReal":
        return to_interval(x)

    def __add__(self, other):
        try:
            b = IntervalReal._lift(other)
        except DomainError:
            return NotImplemented
        a = self

        def gen(bits):
            ea, eb = a.refine(bits + 1), b.refine(bits + 1)
            return ea.lower + eb.lower, ea.upper + eb.upper

        lazy = gen if (a.generator or b.generator) else None
        return IntervalReal(a.lower + b.lower, a.upper + b.upper, lazy)

    __radd__ = __add__

    def __neg__(self):
        a = self

        def gen(bits):
            e = a.refine(bits)
            return -e.upper, -e.lower

        return IntervalReal(-a.upper, -a.lower, gen if a.generator else None)

    def __sub__(self, other):
        return self + (-IntervalReal._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    @staticmethod
    def _mul_bounds(a: "IntervalReal", b: "IntervalReal"):
        cands = (a.lower * b.lower, a.lower * b.upper, a.upper * b.lower, a.upper * b.upper)
        return min(cands), max(cands)

    def __mul__(self, other):
        try:
            b = IntervalReal._lift(other)
        except DomainError:
            return NotImplemented
        a = self

        def gen(bits):
            extra = bits + a.mag_bits() + b.mag_bits() + 3
            return IntervalReal._mul_bounds(a.refine(extra), b.refine(extra))

        lazy = gen if (a.generator or b.generator) else None
        lo, hi = IntervalReal._mul_bounds(a, b)
        return IntervalReal(lo, hi, lazy)

    __rmul__ = __mul__

    def _reciprocal(self, budget: PrecisionBudget = DEFAULT_BUDGET):
        a = self
        cur = a
        if cur.lower <= 0 <= cur.upper:
            for bits in budget.schedule():
                cur = cur.refine(bits)
                if not (cur.lower <= 0 <= cur.upper):
                    break
            else:
                raise DivisionByPossibleZero("divisor enclosure contains zero")

        def _small_bits(m: Fraction) -> int:
            # roughly max(0, -log2(m)) for 0 < m
            return max(0, m.denominator.bit_length() - m.numerator.bit_length() + 1)

        def gen(bits):
            # w(1/x) <= w(x) / min|x|^2, so ask for bits + 2*(-log2 min|x|)
            e = a.refine(bits + 4)
            if e.lower <= 0 <= e.upper:
                raise DivisionByPossibleZero("divisor enclosure contains zero")
            m = min(abs(e.lower), abs(e.upper))
            e = a.refine(bits + 2 * _small_bits(m) + 4)
            return min(1 / e.lower, 1 / e.upper), max(1 / e.lower, 1 / e.upper)

        return IntervalReal(min(1 / cur.lower, 1 / cur.upper),
                            max(1 / cur.lower, 1 / cur.upper),
                            gen if a.generator else None)

    def __truediv__(self, other):
        b = IntervalReal._lift(other)
        return self * b._reciprocal()

    def __rtruediv__(self, other):
        return IntervalReal._lift(other) * self._reciprocal()

    def __repr__(self):
        return f"IntervalReal([{self.lower}, {self.upper}])"


def to_interval(x) -> IntervalReal:
    """View any supported number as an IntervalReal."""
    if isinstance(x, IntervalReal):
        return x
    if isinstance(x, (int, Fraction)):
        return IntervalReal.from_fraction(x)
    if isinstance(x, QuadraticSurd):
        return x.as_interval()
    raise DomainError(f"cannot interpret {type(x).__name__} as a real number")


def sqrt_enclosure(n) -> IntervalReal:
    """Enclosure of sqrt(n) for a nonnegative int or Fraction."""
    f = Fraction(n)
    if f < 0:
        raise DomainError("square root of a negative number")

    def gen(bits):
        scale = 1 << (bits + 2)
        s = math.isqrt(f.numerator * f.denominator * scale * scale)
        den = f.denominator * scale
        return Fraction(s, den), Fraction(s + 1, den)

    return IntervalReal.from_thunk(gen)


# ---------------------------------------------------------------------------
# certified operations

NumberLike = Union[int, Fraction, QuadraticSurd, IntervalReal]


def certified_floor(x: NumberLike, budget: PrecisionBudget = DEFAULT_BUDGET) -> int:
    """Largest integer n with n <= x.

    Interval inputs are refined until the enclosure stops straddling an
    integer; ResolutionExceeded signals a value indistinguishable from an
    integer within the budget.
    """
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return _floor_fraction(x)
    if isinstance(x, QuadraticSurd):
        return math.floor(x)
    if isinstance(x, IntervalReal):
        cur = x
        for bits in budget.schedule():
            fl = _floor_fraction(cur.lower)
            if fl == _floor_fraction(cur.upper):
                return fl
            cur = cur.refine(bits)
        fl = _floor_fraction(cur.lower)
        if fl == _floor_fraction(cur.upper):
            return fl
        raise ResolutionExceeded(
            f"floor undecided at {budget.max_bits} bits: enclosure "
            f"[{decimal_str(cur.lower, 12)}, {decimal_str(cur.upper, 12)}] straddles an integer",
            bits=budget.max_bits)
    raise DomainError(f"unsupported operand {type(x).__name__}")


def certified_ceil(x: NumberLike, budget: PrecisionBudget = DEFAULT_BUDGET) -> int:
    """Smallest integer n with n >= x (equals floor + 1 off the integers)."""
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return -((-x).numerator // x.denominator)
    if isinstance(x, QuadraticSurd):
        return math.ceil(x)
    if isinstance(x, IntervalReal):
        return -certified_floor(-x, budget)
    raise DomainError(f"unsupported operand {type(x).__name__}")


def eval_enclosure(x: NumberLike, bits: int,
                   budget: PrecisionBudget = DEFAULT_BUDGET) -> IntervalReal:
    """Enclosure of x with width at most 2**(1-bits) * max(1, |x|).

    Exact inputs give zero-width intervals.  Raises ResolutionExceeded when
    the input's own uncertainty (a fixed decimal+-error, say) is wider than
    the requested target.
    """
    iv = to_interval(x)
    if iv.is_exact():
        return iv
    request = bits
    for _ in range(64):
        iv = iv.refine(request)
        target = Fraction(2, 2 ** bits) * max(Fraction(1), abs(iv.lower), abs(iv.upper))
        if iv.width <= target:
            return iv
        if request >= budget.max_bits:
            break
        request = min(2 * request, budget.max_bits)
    raise ResolutionExceeded(f"could not reach 2**(1-{bits}) relative width", bits=request)


def compare(x: NumberLike, y: NumberLike, budget: PrecisionBudget = DEFAULT_BUDGET) -> int:
    """Certified three-way comparison; 0 only when equality is provable."""
    if isinstance(x, (int, Fraction)) and isinstance(y, (int, Fraction)):
        return (x > y) - (x < y)
    if isinstance(x, QuadraticSurd) and isinstance(y, (int, Fraction)):
        return x._cmp(y)
    if isinstance(x, (int, Fraction)) and isinstance(y, QuadraticSurd):
        return -y._cmp(x)
    if isinstance(x, QuadraticSurd) and isinstance(y, QuadraticSurd) and x.d == y.d:
        return x._cmp(y)
    ix, iy = to_interval(x), to_interval(y)
    if ix.is_exact() and iy.is_exact():
        return (ix.lower > iy.lower) - (ix.lower < iy.lower)
    for bits in budget.schedule():
        if ix.upper < iy.lower:
            return -1
        if ix.lower > iy.upper:
            return 1
        ix, iy = ix.refine(bits), iy.refine(bits)
    if ix.upper < iy.lower:
        return -1
    if ix.lower > iy.upper:
        return 1
    raise ResolutionExceeded("comparison undecided at precision cap", bits=budget.max_bits)


# ---------------------------------------------------------------------------
# affine evaluations m*theta + offset
#
# Sturmian letters, series coefficients and shift detection all need exact
# floors of such combinations, including the case where the value is an exact
# integer (m = 0 against a multiple-of-theta intercept).


def floor_linear(theta, m: int, off: Fraction = Fraction(0),
                 budget: PrecisionBudget = DEFAULT_BUDGET) -> int:
    """floor(m*theta + off) for any theta backend, off rational."""
    if m == 0:
        return _floor_fraction(Fraction(off))
    if isinstance(theta, Fraction):
        return _floor_fraction(m * theta + off)
    if isinstance(theta, QuadraticSurd):
        off = Fraction(off)
        u, v = off.numerator, off.denominator
        a = v * m * theta.p + u * theta.q
        b = v * m * theta.r
        den = theta.q * v
        s = math.isqrt(b * b * theta.d)
        if b > 0:
            return (a + s) // den
        return (a - s - 1) // den
    if isinstance(theta, IntervalReal):
        off = Fraction(off)
        cur = theta
        for bits in budget.schedule():
            lo = m * cur.lower + off if m > 0 else m * cur.upper + off
            hi = m * cur.upper + off if m > 0 else m * cur.lower + off
            fl = _floor_fraction(lo)
            if fl == _floor_fraction(hi):
                return fl
            cur = cur.refine(bits)
        raise ResolutionExceeded(f"floor({m}*theta + {off}) undecided", bits=budget.max_bits)
    raise DomainError(f"unsupported slope backend {type(theta).__name__}")


def ceil_linear(theta, m: int, off: Fraction = Fraction(0),
                budget: PrecisionBudget = DEFAULT_BUDGET) -> int:
    return -floor_linear(theta, -m, -Fraction(off), budget)


# ---------------------------------------------------------------------------
# text grammar


@dataclass(frozen=True)
class RhoMultiple:
    """Intercept rho = {j*theta}, kept symbolic so integer hits stay exact."""

    j: int


_QUAD_RE = re.compile(
    r"^\(?\s*(-?\d+)\s*([+-])\s*sqrt\(\s*(\d+)\s*\)\s*\)?\s*/\s*(-?\d+)$")
_CF_RE = re.compile(r"^\[([0-9,\s]*)(?:\|([0-9,\s]+))?\]$")
_DEC_RE = re.compile(r"^([+-]?[0-9]*\.?[0-9]+)(?:(?:±|\+-)(.+))?$")
_RAT_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def _parse_decimal(text: str) -> Fraction:
    text = text.strip()
    m = re.match(r"^10\^(-?\d+)$", text)
    if m:
        return Fraction(10) ** int(m.group(1))
    return Fraction(text.replace("e", "E")) if ("e" in text or "E" in text) else Fraction(text)


def _cf_tail_value(period: list[int]) -> QuadraticSurd:
    # u = [b1; b2..bn, u] solved from the convergent recurrence of the period
    pm1, p = 1, period[0]
    qm1, q = 0, 1
    for a in period[1:]:
        pm1, p = p, a * p + pm1
        qm1, q = q, a * q + qm1
    # q*u^2 + (qm1 - p)*u - pm1 = 0, take the positive root
    A, B, C = q, qm1 - p, -pm1
    disc = B * B - 4 * A * C
    u = QuadraticSurd(-B, 1, 2 * A, disc)
    return u


def cf_to_surd(preperiod: list[int], period: list[int]) -> QuadraticSurd:
    """Exact value of [0; preperiod, period, period, ...]."""
    if not period:
        raise DomainError("empty period; a terminating expansion is rational")
    if any(a < 1 for a in preperiod + period):
        raise DomainError("partial quotients must be >= 1")
    u = _cf_tail_value(period)  # complete quotient at the period start
    x = 1 / u
    for a in reversed(preperiod):
        x = 1 / (a + x)
    if isinstance(x, Fraction):
        raise DomainError("eventually periodic expansion produced a rational")
    return x


def parse_theta(text: str):
    """Parse the slope grammar into a Fraction, QuadraticSurd or IntervalReal."""
    text = text.strip()
    if text.startswith("quad:"):
        m = _QUAD_RE.match(text[5:].strip())
        if not m:
            raise DomainError(f"bad quad: spec {text!r}")
        p, sgn, d, q = int(m.group(1)), m.group(2), int(m.group(3)), int(m.group(4))
        return QuadraticSurd(p, 1 if sgn == "+" else -1, q, d)
    if text.startswith("cf:"):
        m = _CF_RE.match(text[3:].strip())
        if not m:
            raise DomainError(f"bad cf: spec {text!r}")
        head = [int(t) for t in m.group(1).split(",") if t.strip()]
        if m.group(2) is None:
            pre, per = [], head
        else:
            pre, per = head, [int(t) for t in m.group(2).split(",") if t.strip()]
        return cf_to_surd(pre, per)
    if text.startswith("dec:"):
        m = _DEC_RE.match(text[4:].strip())
        if not m:
            raise DomainError(f"bad dec: spec {text!r}")
        mid = _parse_decimal(m.group(1))
        err = _parse_decimal(m.group(2)) if m.group(2) else Fraction(0)
        if err == 0:
            return mid
        return IntervalReal.from_decimal(mid, err)
    raise DomainError(f"unknown theta spec {text!r} (want quad:/cf:/dec:)")


def parse_rho(text: str):
    """Parse the intercept grammar: rat:p/q, mult:j or dec:<decimal>+-<err>."""
    text = text.strip()
    if text.startswith("rat:"):
        m = _RAT_RE.match(text[4:].strip())
        if not m:
            raise DomainError(f"bad rat: spec {text!r}")
        return Fraction(int(m.group(1)), int(m.group(2) or 1))
    if text.startswith("mult:"):
        try:
            return RhoMultiple(int(text[5:].strip()))
        except ValueError:
            raise DomainError(f"bad mult: spec {text!r}") from None
    if text.startswith("dec:"):
        m = _DEC_RE.match(text[4:].strip())
        if not m:
            raise DomainError(f"bad dec: spec {text!r}")
        mid = _parse_decimal(m.group(1))
        err = _parse_decimal(m.group(2)) if m.group(2) else Fraction(0)
        return mid if err == 0 else IntervalReal.from_decimal(mid, err)
    raise DomainError(f"unknown rho spec {text!r} (want rat:/mult:/dec:)")


# ---------------------------------------------------------------------------
# deterministic decimal rendering (no floats anywhere near output paths)


def decimal_str(x: Fraction, digits: int) -> str:
    """Decimal string of x truncated toward zero to `digits` fractional places."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    n = abs(x)
    scaled = n.numerator * 10 ** digits // n.denominator
    whole, frac = divmod(scaled, 10 ** digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{str(frac).zfill(digits)}"
