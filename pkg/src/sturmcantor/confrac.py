"""Continued-fraction expansion and convergents for every slope backend.

Quadratic surds are expanded with the classical integral-form recurrence
(complete quotients (P + sqrt(D))/Q with Q dividing D - P*P), which makes the
partial-quotient stream exact and lets the eventual period be detected by
state repetition.  Interval-backed slopes are expanded adaptively, refining
the enclosure whenever the two endpoints disagree about the next quotient.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

from .exactnum import (
    DEFAULT_BUDGET,
    DomainError,
    IntervalReal,
    PrecisionBudget,
    QuadraticSurd,
    ResolutionExceeded,
    compare,
)

__all__ = [
    "TerminatingExpansion",
    "ContinuedFraction",
    "ConvergentTable",
    "expand",
    "convergents",
]


class TerminatingExpansion(ArithmeticError):
    """The expansion hit a zero remainder: the input was rational.

    Carries the complete finite quotient list; callers that need an
    irrational slope treat this as failure.
    """

    def __init__(self, quotients: list[int]):
        super().__init__(f"continued fraction terminates after {len(quotients)} terms")
        self.quotients = list(quotients)


def _surd_integral_form(x: QuadraticSurd) -> tuple[int, int, int]:
    """Rewrite (p + r*sqrt(d))/q as (P + sqrt(D))/Q with Q | D - P*P."""
    p, r, q, d = x.p, x.r, x.q, x.d
    if r < 0:
        p, r, q = -p, -r, -q
    g = abs(q)
    return p * g, r * r * g * g * d, q * g


def _integral_floor(P: int, D: int, Q: int) -> int:
    s = math.isqrt(D)
    if Q > 0:
        return (P + s) // Q
    return (-P - s - 1) // (-Q)


def _surd_quotients(x: QuadraticSurd):
    """Yield the partial quotients a_1, a_2, ... of x in (0, 1), forever.

    Also drives period detection: the generator sends (index, state) pairs to
    the owning ContinuedFraction through the shared `seen` dict.
    """
    P, D, Q = _surd_integral_form(x)
    # shift to the first complete quotient 1/x = (-P + sqrt(D)) / ((D - P*P)/Q)
    Qn = (D - P * P) // Q
    P, Q = -P, Qn
    while True:
        yield (P, Q)
        a = _integral_floor(P, D, Q)
        yield a
        P1 = P - a * Q
        P, Q = -P1, (D - P1 * P1) // Q


class ContinuedFraction:
    """Lazy stream of partial quotients a_1, a_2, ... of a slope in (0, 1).

    Computed prefixes are memoized behind a lock, so concurrent readers are
    safe.  For quadratic surd sources the stream is eventually periodic and
    `period()` reports the detected (preperiod, period) split.
    """

    def __init__(self, theta, budget: PrecisionBudget = DEFAULT_BUDGET):
        self.theta = theta
        self.budget = budget
        self._a: list[int] = []
        self._lock = threading.RLock()
        self._period: tuple[list[int], list[int]] | None = None
        self._finite = False
        if isinstance(theta, int):
            self.theta = theta = Fraction(theta)
        if isinstance(theta, QuadraticSurd):
            self._machine = _surd_quotients(theta)
            self._states: dict[tuple[int, int], int] = {}
        elif isinstance(theta, Fraction):
            self._machine = None
            u, v = theta.numerator, theta.denominator
            while u:
                self._a.append(v // u)
                u, v = v - (v // u) * u, u
            self._finite = True
        elif isinstance(theta, IntervalReal):
            self._machine = None
            self._bits = budget.initial_bits
        else:
            raise DomainError(f"unsupported slope backend {type(theta).__name__}")

    # -- extension ----------------------------------------------------------

    def _extend_surd(self, depth: int):
        while len(self._a) < depth:
            if self._period is not None:
                pre, per = self._period
                k = len(self._a) - len(pre)
                self._a.append(per[k % len(per)])
                continue
            state = next(self._machine)
            idx = len(self._a)
            if state in self._states:
                first = self._states[state]
                self._period = (self._a[:first], self._a[first:idx])
                continue
            self._states[state] = idx
            self._a.append(next(self._machine))

    def _extend_interval(self, depth: int):
        budget_caps = [b for b in self.budget.schedule() if b >= self._bits] or [self.budget.max_bits]
        for bits in budget_caps:
            self._bits = bits
            enc = self.theta.refine(bits)
            quotients: list[int] = []
            lo, hi = enc.lower, enc.upper
            ok = True
            while len(quotients) < depth:
                if lo <= 0:
                    ok = False
                    break
                alo = (1 / hi).__floor__() if hi else None
                ahi = (1 / lo).__floor__()
                if hi <= 0 or alo != ahi:
                    ok = False
                    break
                a = ahi
                lo, hi = 1 / hi - a, 1 / lo - a
                quotients.append(a)
            if ok:
                self._a = quotients
                return
        raise ResolutionExceeded(
            f"quotient {len(self._a) + 1} undecided; slope is numerically "
            f"indistinguishable from a rational at {self.budget.max_bits} bits",
            bits=self.budget.max_bits)

    def _require(self, depth: int):
        with self._lock:
            if len(self._a) >= depth:
                return
            if self._finite:
                raise TerminatingExpansion(self._a)
            if isinstance(self.theta, QuadraticSurd):
                self._extend_surd(depth)
            else:
                self._extend_interval(depth)

    # -- queries --------------------------------------------------------------

    def quotient(self, k: int) -> int:
        """Partial quotient a_k, 1-indexed."""
        if k < 1:
            raise DomainError("quotients are indexed from 1")
        self._require(k)
        return self._a[k - 1]

    def prefix(self, depth: int) -> list[int]:
        self._require(depth)
        return self._a[:depth]

    def period(self) -> tuple[list[int], list[int]]:
        """(preperiod, period) for a quadratic surd slope."""
        if not isinstance(self.theta, QuadraticSurd):
            raise DomainError("period detection requires a quadratic surd slope")
        with self._lock:
            while self._period is None:
                self._require(len(self._a) + 16)
        return self._period

    def __repr__(self):
        head = ",".join(str(a) for a in self._a[:8])
        return f"ContinuedFraction([0;{head}{'...' if not self._finite else ''}])"


class ConvergentTable:
    """Rows (k, p_k, q_k) for k = 0..depth with the standard seeds.

    Satisfies q_k = a_k q_{k-1} + q_{k-2}, the same recurrence for p, and the
    determinant identity p_k q_{k-1} - p_{k-1} q_k = (-1)^(k-1).
    """

    def __init__(self, quotients: list[int]):
        self.quotients = list(quotients)
        p_prev, q_prev = 1, 0  # k = -1
        p, q = 0, 1            # k = 0
        self.rows: list[tuple[int, int, int]] = [(0, 0, 1)]
        for k, a in enumerate(self.quotients, start=1):
            p_prev, p = p, a * p + p_prev
            q_prev, q = q, a * q + q_prev
            self.rows.append((k, p, q))

    @property
    def depth(self) -> int:
        return len(self.rows) - 1

    def p(self, k: int) -> int:
        return self.rows[k][1]

    def q(self, k: int) -> int:
        return self.rows[k][2]

    def value(self, k: int) -> Fraction:
        return Fraction(self.p(k), self.q(k))

    def __iter__(self):
        return iter(self.rows)


def expand(theta, depth: int, budget: PrecisionBudget = DEFAULT_BUDGET) -> ContinuedFraction:
    """Expand a slope in (0, 1) to `depth` partial quotients."""
    if depth < 1:
        raise DomainError("depth must be positive")
    if isinstance(theta, int):
        theta = Fraction(theta)
    if isinstance(theta, (Fraction, QuadraticSurd)):
        if not (0 < theta < 1):
            raise DomainError("slope must lie strictly between 0 and 1")
    elif isinstance(theta, IntervalReal):
        if compare(theta, 0, budget) <= 0 or compare(theta, 1, budget) >= 0:
            raise DomainError("slope must lie strictly between 0 and 1")
    cf = ContinuedFraction(theta, budget)
    cf.prefix(depth)
    return cf


def convergents(cf: ContinuedFraction | list[int], depth: int) -> ConvergentTable:
    """Convergent table p_k/q_k for k = 0..depth."""
    if depth < 0:
        raise DomainError("depth must be nonnegative")
    quotients = cf.prefix(depth) if isinstance(cf, ContinuedFraction) else list(cf[:depth])
    if len(quotients) < depth:
        raise DomainError("not enough partial quotients available")
    return ConvergentTable(quotients)
