"""Sturmian numbers in base b and their rational approximants.

A Sturmian number is xi = sum x_n b^(-n) where x_1 x_2 ... is a Sturmian word
over two digits.  For each level k the word decomposition yields an eventually
periodic shadow word whose value m / (b^r (b^q_k - 1)) approximates xi with a
signed residual of the form ((-1)^k c + delta * b^(-q_k+2)) / b^(r+q_k+t),
|delta| < 1.  Everything here is certified: truncations carry exact tail
bounds and every inequality is decided in integer arithmetic (bounds with
exponent denominators of 10 are settled by raising both sides to the 10th
power).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exactnum import DEFAULT_BUDGET, DomainError, PrecisionBudget, RhoMultiple, decimal_str
from .sturmword import (
    Alphabet,
    SturmianSource,
    Word,
    decompose,
    shift_relation,
)

__all__ = [
    "SturmianNumber",
    "TruncatedValue",
    "ApproximantSchedule",
    "Approximant",
    "ResidualReport",
    "DependenceWitness",
    "SubspaceReport",
    "EPSILON",
    "evaluate",
    "schedule",
    "approximant_characteristic",
    "approximant_general",
    "lemma22_residuals",
    "lemma25_report",
    "dependence_witness",
    "subspace_residual_report",
    "two_term_residual_eta",
]

EPSILON = Fraction(1, 10)


@dataclass(frozen=True)
class TruncatedValue:
    """Exact truncation sum_{n<=N} x_n b^-n plus a certified tail bound."""

    value: Fraction
    tail_bound: Fraction
    digits: int


class SturmianNumber:
    """The real number with base-b digits given by a Sturmian source."""

    def __init__(self, source: SturmianSource, base: int | None = None):
        self.source = source
        self.alphabet = source.alphabet
        if base is not None and base != self.alphabet.base:
            raise DomainError("base disagrees with the source alphabet")
        self.base = self.alphabet.base

    def digit_int(self, digits: int) -> int:
        """Integer whose base-b expansion is the first `digits` letters."""
        return self.source.prefix(digits).value(self.alphabet)

    def evaluate(self, digits: int) -> TruncatedValue:
        if digits < 1:
            raise DomainError("need at least one digit")
        b = self.base
        x = self.digit_int(digits)
        return TruncatedValue(Fraction(x, b ** digits), Fraction(1, b ** digits), digits)

    def enclosure(self, digits: int) -> tuple[Fraction, Fraction]:
        t = self.evaluate(digits)
        return t.value, t.value + t.tail_bound


def evaluate(xi: SturmianNumber, digits: int) -> TruncatedValue:
    return xi.evaluate(digits)


# ---------------------------------------------------------------------------
# schedule (r_k, t_k) and the index set K


@dataclass(frozen=True)
class ApproximantSchedule:
    """Level-k exponent bookkeeping with epsilon = 1/10.

    r = |U_k| and t = d q_k + q_{k-1} when q_{k+1} > (1+eps)(|U_k| + q_k),
    otherwise r = 0 and t = |U_k|.  Membership in the index set K requires
    t > q_k + eps (r + q_k) and q_{k+1} > (1+eps)(r + q_k).
    """

    k: int
    r: int
    t: int
    in_K: bool
    u_len: int
    d: int
    epsilon: Fraction = EPSILON


def _u_len_and_d(source: SturmianSource, k: int) -> tuple[int, int]:
    if source.variant == "characteristic":
        fam = source.family
        q_next = fam.q(k + 1)
        d = fam.a(k + 1) if fam.a(k + 2) >= 2 else fam.a(k + 1) + 1
        return q_next, d
    dec = _cached_decomposition(source, k)
    return dec.U.length, dec.d


_DECOMP_CACHE_ATTR = "_decomp_cache"


def _cached_decomposition(source: SturmianSource, k: int):
    cache = getattr(source, _DECOMP_CACHE_ATTR, None)
    if cache is None:
        cache = {}
        setattr(source, _DECOMP_CACHE_ATTR, cache)
    if k not in cache:
        cache[k] = decompose(source, k)
    return cache[k]


def schedule(source: SturmianSource, k: int) -> ApproximantSchedule:
    """The (r_k, t_k, K-membership) data at level k.

    Characteristic sources use the closed form |U_k| = q_{k+1} with d read
    off a_{k+2}; other sources go through the generic decomposition.
    """
    if k < 3:
        raise DomainError("schedule needs k >= 3")
    fam = source.family
    q, q_next, q_prev = fam.q(k), fam.q(k + 1), fam.q(k - 1)
    u_len, d = _u_len_and_d(source, k)
    wide = 10 * q_next > 11 * (u_len + q)
    if wide:
        r, t = u_len, d * q + q_prev
    else:
        r, t = 0, u_len
    in_K = (10 * t > 11 * q + r) and (10 * q_next > 11 * (r + q))
    return ApproximantSchedule(k, r, t, in_K, u_len, d)


# ---------------------------------------------------------------------------
# approximants and certified residuals


@dataclass(frozen=True)
class Approximant:
    """Rational approximation m / (b^r (b^q - 1)) of a Sturmian number.

    residual bounds are raw integer pairs over `den`; delta_lo/delta_hi
    bound the normalised residual coefficient, certified strictly inside
    (-1, 1) when `delta_in_unit` is True.  `digits` is the truncation length
    that settled the certificate; None flags an unresolved certificate after
    the allowed truncation growth.
    """

    k: int
    m: int
    r: int
    q: int
    c: int
    exponent: int           # the full residual exponent r + q + t
    residual_lo_num: int
    residual_hi_num: int
    den: int
    delta_lo_num: int
    delta_hi_num: int
    delta_in_unit: Optional[bool]
    digits: int
    base: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.m, self.base ** self.r * (self.base ** self.q - 1))

    def residual_interval(self) -> tuple[Fraction, Fraction]:
        return (Fraction(self.residual_lo_num, self.den),
                Fraction(self.residual_hi_num, self.den))

    def delta_interval(self) -> tuple[Fraction, Fraction]:
        return (Fraction(self.delta_lo_num, self.den),
                Fraction(self.delta_hi_num, self.den))


def _periodic_prefix_value(source: SturmianSource, U: Word, k: int) -> int:
    """Base-b value of the period (first q_k letters of U M'_k (M_k)^inf)."""
    fam = source.family
    q = fam.q(k)
    stream = U + fam.word_prime(k)
    while stream.length < q:
        stream = stream + fam.word(k)
    return stream.prefix(q).value(source.alphabet)


def _certify_delta(source: SturmianSource, k: int, m: int, r: int, exponent: int,
                   max_growth: int = 8) -> Approximant:
    """Certify |delta| < 1 in xi - m/(b^r(b^q-1)) = ((-1)^k c + delta b^{2-q}) / b^exponent."""
    fam = source.family
    alphabet = source.alphabet
    b = alphabet.base
    q = fam.q(k)
    c = alphabet.c
    s_c = c if k % 2 == 0 else -c
    xi = SturmianNumber(source)
    n0 = exponent + q + 4
    n = n0
    result = None
    while n <= max_growth * n0:
        x = xi.digit_int(n)
        bq1 = b ** q - 1
        den = b ** n * bq1
        res_lo = x * bq1 - m * b ** (n - r)
        res_hi = res_lo + bq1
        scale = b ** (exponent + q - 2)
        shift = s_c * b ** (q - 2) * den
        d_lo = res_lo * scale - shift
        d_hi = res_hi * scale - shift
        if -den < d_lo and d_hi < den:
            flag = True
        elif d_lo >= den or d_hi <= -den:
            flag = False
        else:
            n *= 2
            continue
        result = Approximant(k, m, r, q, c, exponent, res_lo, res_hi, den,
                             d_lo, d_hi, flag, n, b)
        break
    if result is None:
        x = xi.digit_int(n0)
        bq1 = b ** q - 1
        den = b ** n0 * bq1
        res_lo = x * bq1 - m * b ** (n0 - r)
        scale = b ** (exponent + q - 2)
        shift = s_c * b ** (q - 2) * den
        result = Approximant(k, m, r, q, c, exponent, res_lo, res_lo + bq1, den,
                             res_lo * scale - shift, (res_lo + bq1) * scale - shift,
                             None, n0, b)
    return result


def approximant_characteristic(theta, alphabet: Alphabet, k: int,
                               budget: PrecisionBudget = DEFAULT_BUDGET) -> Approximant:
    """Approximant of the characteristic number: m is the base-b value of M_k."""
    if k < 3:
        raise DomainError("approximants need k >= 3")
    source = SturmianSource(theta, Fraction(0), "characteristic", alphabet, budget)
    return _characteristic_approximant(source, k)


def _characteristic_approximant(source: SturmianSource, k: int) -> Approximant:
    fam = source.family
    m = fam.word(k).value(source.alphabet)
    exponent = fam.q(k) + fam.q(k + 1)
    return _certify_delta(source, k, m, 0, exponent)


def approximant_general(source: SturmianSource, k: int) -> Approximant:
    """The level-k approximant selected by the (r_k, t_k) schedule."""
    if k < 3:
        raise DomainError("approximants need k >= 3")
    if source.variant == "characteristic":
        return _characteristic_approximant(source, k)
    fam = source.family
    sched = schedule(source, k)
    dec = _cached_decomposition(source, k)
    b = source.alphabet.base
    q = fam.q(k)
    if sched.r > 0:
        m = dec.U.value(source.alphabet) * (b ** q - 1) + fam.word(k).value(source.alphabet)
    else:
        m = _periodic_prefix_value(source, dec.U, k)
    return _certify_delta(source, k, m, sched.r, sched.r + q + sched.t)


def lemma22_residuals(source: SturmianSource, k: int) -> tuple[Approximant, Approximant]:
    """Both shadow-word residuals at level k.

    The first targets y = U_k (M_k)^inf at exponent |U_k| + (d+1) q_k + q_{k-1},
    the second y' = U_k M'_k (M_k)^inf at exponent |U_k| + q_k; their delta
    intervals realise the two signed-residual coefficients.
    """
    if k < 3:
        raise DomainError("residuals need k >= 3")
    fam = source.family
    b = source.alphabet.base
    q, q_prev = fam.q(k), fam.q(k - 1)
    u_len, d = _u_len_and_d(source, k)
    if source.variant == "characteristic":
        u_word = fam.word(k + 1)
    else:
        u_word = _cached_decomposition(source, k).U
    m_y = u_word.value(source.alphabet) * (b ** q - 1) + fam.word(k).value(source.alphabet)
    app_y = _certify_delta(source, k, m_y, u_len, u_len + (d + 1) * q + q_prev)
    m_yp = _periodic_prefix_value(source, u_word, k)
    app_yp = _certify_delta(source, k, m_yp, 0, u_len + q)
    return app_y, app_yp


def two_term_residual_eta(family, k: int, V: Word, alphabet: Alphabet) -> Fraction:
    """Exact eta in xi_x - xi_y = (-1)^k c / b^{|V|+q} + ((-1)^k c + eta) / b^{|V|+2q}.

    Here x = V (M_k)^inf and y = V M'_k (M_k)^inf, both exactly evaluable.
    """
    b = alphabet.base
    q = family.q(k)
    c = alphabet.c
    s_c = c if k % 2 == 0 else -c
    v_val, v_len = V.value(alphabet), V.length
    mk = family.word(k).value(alphabet)
    xi_x = Fraction(v_val * (b ** q - 1) + mk, b ** v_len * (b ** q - 1))
    head = V + family.word_prime(k)
    xi_y = Fraction(head.value(alphabet) * (b ** q - 1)
                    + family.word(k).value(alphabet), b ** head.length * (b ** q - 1))
    diff = xi_x - xi_y
    return (diff - Fraction(s_c, b ** (v_len + q))) * b ** (v_len + 2 * q) - s_c


# ---------------------------------------------------------------------------
# residual reports against fractional-exponent bounds


@dataclass(frozen=True)
class ResidualReport:
    """One certified inequality |lhs| <= rhs_base^(-rhs_exp10/10)."""

    k: int
    context: str
    lhs_lo_num: int
    lhs_hi_num: int
    lhs_den: int
    rhs_base: int
    rhs_exp10: int
    satisfied: bool
    precision_digits: int

    def lhs_interval(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.lhs_lo_num, self.lhs_den), Fraction(self.lhs_hi_num, self.lhs_den)

    def rhs_decimal(self, digits: int = 40) -> str:
        # rhs = base^(-e/10); render via the 10th root of base^-e scaled out
        e = self.rhs_exp10
        whole, frac10 = divmod(e, 10)
        bound = Fraction(1, self.rhs_base ** whole)
        if frac10:
            # multiply by base^(-frac10/10) via an integer 10th root at fixed scale
            scale = 10 ** (digits + 2)
            tenth = _iroot10(self.rhs_base ** frac10 * scale ** 10)
            bound = bound * Fraction(scale, tenth)  # upper bound of the true value
        return decimal_str(bound, digits)

    def to_json(self) -> dict:
        lo, hi = self.lhs_interval()
        small = abs(self.lhs_hi_num) < 10 ** 30 and self.lhs_den < 10 ** 30
        return {
            "k": self.k,
            "context": self.context,
            "lhs": ({"lo": {"num": str(self.lhs_lo_num), "den": str(self.lhs_den)},
                     "hi": {"num": str(self.lhs_hi_num), "den": str(self.lhs_den)}}
                    if small else
                    {"lo": decimal_str(lo, 40), "hi": decimal_str(hi, 40)}),
            "rhs_bound": {"base": self.rhs_base, "exp10": self.rhs_exp10,
                          "decimal": self.rhs_decimal()},
            "satisfied": self.satisfied,
            "precision_digits": self.precision_digits,
        }


def _iroot10(n: int) -> int:
    """Integer 10th root, rounded down."""
    if n < 0:
        raise DomainError("negative radicand")
    if n == 0:
        return 0
    x = 1 << ((n.bit_length() + 9) // 10 + 1)
    while True:
        y = (9 * x + n // x ** 9) // 10
        if y >= x:
            break
        x = y
    while x ** 10 > n:
        x -= 1
    return x


def _abs_le_bpow10(num: int, den: int, b: int, e10: int) -> bool:
    """Exact test |num/den| <= b^(-e10/10)."""
    num = abs(num)
    if e10 >= 0:
        return num ** 10 * b ** e10 <= den ** 10
    return num ** 10 <= den ** 10 * b ** (-e10)


def _abs_lt_scaled_bpow10(num: int, den: int, scale: Fraction, b: int, e10: int) -> bool:
    """Exact test |num/den| < scale * b^(-e10/10) for a positive rational scale."""
    num = abs(num)
    lhs = (num * scale.denominator) ** 10
    rhs = (den * scale.numerator) ** 10
    if e10 >= 0:
        return lhs * b ** e10 < rhs
    return lhs < rhs * b ** (-e10)


def _interval_sup_le_bpow10(lo_num: int, hi_num: int, den: int, b: int, e10: int) -> bool:
    return _abs_le_bpow10(max(abs(lo_num), abs(hi_num)), den, b, e10)


def lemma25_report(source: SturmianSource, k_range,
                   budget: PrecisionBudget = DEFAULT_BUDGET) -> list[ResidualReport]:
    """Certified approximation inequalities for every k of the index set K.

    For each k in K within k_range, both the characteristic number and the
    source's number must approach their level-k approximants within
    b^-(r + 2q + eps(r+q) - 2); an unsatisfied report indicates a bug, not a
    borderline case, since the inequalities are theorems.
    """
    char = source.characteristic_sibling()
    b = source.alphabet.base
    reports: list[ResidualReport] = []
    for k in k_range:
        sched = schedule(source, k)
        if not sched.in_K:
            continue
        r, t, q = sched.r, sched.t, source.family.q(k)
        e10 = 10 * (r + 2 * q - 2) + (r + q)
        app0 = _characteristic_approximant(char, k)
        app1 = approximant_general(source, k)
        for context, app in (("lemma2.5-characteristic", app0), ("lemma2.5-source", app1)):
            ok = _fast_residual_check(app, e10) or _interval_sup_le_bpow10(
                app.residual_lo_num, app.residual_hi_num, app.den, b, e10)
            reports.append(ResidualReport(k, context, app.residual_lo_num,
                                          app.residual_hi_num, app.den, b, e10,
                                          ok, app.digits))
    return reports


def _fast_residual_check(app: Approximant, e10: int) -> bool:
    """Sufficient check |res| <= (|c|+1) b^-E and (|c|+1)^10 <= b^(10E - e10)."""
    b = app.base
    bound_num = (abs(app.c) + 1) * app.den
    scale = b ** app.exponent
    sup = max(abs(app.residual_lo_num), abs(app.residual_hi_num))
    if sup * scale > bound_num:
        return False
    x = 10 * app.exponent - e10
    if x < 0:
        return False
    if x >= 80:
        return True
    return (abs(app.c) + 1) ** 10 <= b ** x


# ---------------------------------------------------------------------------
# dependence witnesses (rational relations between xi_1 and xi_0)


@dataclass(frozen=True)
class DependenceWitness:
    """Exact rationals with xi_1 = r + s * xi_0, from a detected shift relation."""

    r: Fraction
    s: Fraction
    p: int
    direction: str

    def residual_interval(self, xi1: SturmianNumber, xi0: SturmianNumber,
                          digits: int) -> tuple[Fraction, Fraction]:
        work = digits + self.p + 6
        lo1, hi1 = xi1.enclosure(work)
        lo0, hi0 = xi0.enclosure(work)
        if self.s >= 0:
            lo = lo1 - self.r - self.s * hi0
            hi = hi1 - self.r - self.s * lo0
        else:
            lo = lo1 - self.r - self.s * lo0
            hi = hi1 - self.r - self.s * hi0
        return lo, hi

    def check(self, xi1: SturmianNumber, xi0: SturmianNumber, digits: int) -> bool:
        """Certify |xi_1 - r - s xi_0| < b^-digits."""
        lo, hi = self.residual_interval(xi1, xi0, digits)
        bound = Fraction(1, xi1.base ** digits)
        return -bound < lo and hi < bound


def dependence_witness(theta, rho, alphabet: Alphabet, search_bound: int,
                       variant: str = "lower",
                       budget: PrecisionBudget = DEFAULT_BUDGET) -> Optional[DependenceWitness]:
    """Explicit (r, s) with xi_1 = r + s xi_0 when rho is a multiple of theta.

    Returns None when no shift relation exists within the search bound.  The
    digit-shift identity gives xi_1 = b^p xi_0 - V for a characteristic-shifted
    word and xi_1 = (V + xi_0) / b^p for a word-shifted one, V being the value
    of the dropped digit block.
    """
    rel = shift_relation(theta, rho, search_bound, budget)
    if rel is None:
        return None
    b = alphabet.base
    if rel.direction == "characteristic-shifted":
        char = SturmianSource(theta, Fraction(0), "characteristic", alphabet, budget)
        v = char.prefix(rel.p).value(alphabet) if rel.p else 0
        return DependenceWitness(Fraction(-v), Fraction(b ** rel.p), rel.p, rel.direction)
    word = SturmianSource(theta, rho, variant, alphabet, budget)
    v = word.prefix(rel.p).value(alphabet) if rel.p else 0
    return DependenceWitness(Fraction(v, b ** rel.p), Fraction(1, b ** rel.p),
                             rel.p, rel.direction)


# ---------------------------------------------------------------------------
# linear-form residuals feeding the four-variable subspace inequality


@dataclass(frozen=True)
class SubspaceReport:
    """Certified small-value report for the linear form at level k.

    The integer quadruple is (b^{r+q}, b^r, m0 b^r, m); H is the maximum of
    its absolute values and padic_valuations sums, for each prime ell | b,
    the ell-adic valuations of the four entries (the ell-adic product of the
    four linear forms is then prod ell^-v).
    """

    k: int
    eq55: ResidualReport
    eq63: ResidualReport
    H: int
    H_term: str
    padic_valuations: dict[int, int]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "eq55": self.eq55.to_json(),
            "eq63": self.eq63.to_json(),
            "H": str(self.H),
            "H_digits": len(str(self.H)),
            "H_term": self.H_term,
            "padic_valuations": {str(p): v for p, v in sorted(self.padic_valuations.items())},
        }


def _ratio_pair(lo: Fraction, hi: Fraction) -> tuple[int, int, int]:
    """Common-denominator integer view of an interval [lo, hi]."""
    import math
    den = lo.denominator * hi.denominator // math.gcd(lo.denominator, hi.denominator)
    return lo.numerator * (den // lo.denominator), hi.numerator * (den // hi.denominator), den


def _prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _valuation(n: int, p: int) -> int:
    if n == 0:
        raise DomainError("valuation of zero")
    v = 0
    n = abs(n)
    while n % p == 0:
        v += 1
        n //= p
    return v


def subspace_residual_report(alpha0: Fraction, alpha1: Fraction,
                             source: SturmianSource, k: int) -> SubspaceReport:
    """Check the two certified inequalities behind the four-form linear system.

    alpha0, alpha1 are nonzero rationals; requires k in the index set K.
    """
    alpha0, alpha1 = Fraction(alpha0), Fraction(alpha1)
    if alpha0 == 0 or alpha1 == 0:
        raise DomainError("coefficients must be nonzero")
    sched = schedule(source, k)
    if not sched.in_K:
        raise DomainError(f"k={k} is not in the index set K for this source")
    fam = source.family
    b = source.alphabet.base
    q, r, t = fam.q(k), sched.r, sched.t
    char = source.characteristic_sibling()
    m0 = fam.word(k).value(source.alphabet)
    m1 = approximant_general(source, k).m
    c_scale = b * b * (abs(alpha0) + abs(alpha1))

    digits = r + 2 * q + (r + q + 9) // 10 + 8
    xi0 = SturmianNumber(char)
    xi1 = SturmianNumber(source)
    lo0, hi0 = xi0.enclosure(digits)
    lo1, hi1 = xi1.enclosure(digits)

    def _scaled(lo_w, hi_w, alpha):
        return (alpha * lo_w, alpha * hi_w) if alpha >= 0 else (alpha * hi_w, alpha * lo_w)

    s0lo, s0hi = _scaled(lo0, hi0, alpha0)
    s1lo, s1hi = _scaled(lo1, hi1, alpha1)
    comb_lo, comb_hi = s0lo + s1lo, s0hi + s1hi

    # |alpha0 xi0 + alpha1 xi1 - alpha0 m0/(b^q-1) - alpha1 m1/(b^r(b^q-1))|
    approx = alpha0 * Fraction(m0, b ** q - 1) + alpha1 * Fraction(m1, b ** r * (b ** q - 1))
    lhs55_lo, lhs55_hi = comb_lo - approx, comb_hi - approx
    e55 = 10 * (r + 2 * q) + (r + q)
    sup55 = max(abs(lhs55_lo), abs(lhs55_hi))
    ok55 = _abs_lt_scaled_bpow10(sup55.numerator, sup55.denominator, c_scale, b, e55)
    lo_n, hi_n, den_n = _ratio_pair(lhs55_lo, lhs55_hi)
    rep55 = ResidualReport(k, "eq55", lo_n, hi_n, den_n, b, e55, ok55, digits)

    # |(alpha0 xi0 + alpha1 xi1)(b^{r+q} - b^r) - alpha0 m0 b^r - alpha1 m1|
    mult = b ** (r + q) - b ** r
    fixed = alpha0 * m0 * b ** r + alpha1 * m1
    lhs63_lo = comb_lo * mult - fixed
    lhs63_hi = comb_hi * mult - fixed
    e63 = 10 * q + (r + q)
    sup63 = max(abs(lhs63_lo), abs(lhs63_hi))
    ok63 = _abs_lt_scaled_bpow10(sup63.numerator, sup63.denominator, c_scale, b, e63)
    lo_n, hi_n, den_n = _ratio_pair(lhs63_lo, lhs63_hi)
    rep63 = ResidualReport(k, "eq63", lo_n, hi_n, den_n, b, e63, ok63, digits)

    quad = {
        "b^(r+q)": b ** (r + q),
        "b^r": b ** r,
        "m0*b^r": m0 * b ** r,
        "m": m1,
    }
    h_term, h = max(quad.items(), key=lambda kv: abs(kv[1]))
    vals: dict[int, int] = {}
    for ell, vb in _prime_factors(b).items():
        total = vb * (r + q) + vb * r  # first two quadruple entries
        total += _valuation(m0, ell) + vb * r
        total += _valuation(m1, ell)
        vals[ell] = total
    return SubspaceReport(k, rep55, rep63, abs(h), h_term, vals)
