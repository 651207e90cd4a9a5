"""Standard word families, Sturmian word generation, and prefix decomposition.

Words over a two-letter alphabet are packed into Python integers (one bit per
letter, first letter at the most significant position), so concatenation,
repetition and equality run at big-integer speed even when lengths reach
millions of letters.

The decomposition routine recovers, for a Sturmian word x and a level k, the
unique suffix U_k of M_k M_{k+1} and the exponent d in {a_{k+1}, a_{k+1}+1}
with x = U_k (M_k)^d M_{k-1} M_k M_k ... .  All candidate alignments are
scanned and exactly one is required to match.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .confrac import ContinuedFraction, ConvergentTable, convergents, expand
from .exactnum import (
    DEFAULT_BUDGET,
    DomainError,
    IntervalReal,
    PrecisionBudget,
    QuadraticSurd,
    ResolutionExceeded,
    RhoMultiple,
    certified_floor,
    compare,
    floor_linear,
    to_interval,
)

__all__ = [
    "Alphabet",
    "Word",
    "StandardWordFamily",
    "SturmianSource",
    "Decomposition",
    "ShiftRelation",
    "standard_words",
    "word_variants",
    "sturmian_prefix",
    "decompose",
    "reconstruct_prefix",
    "shift_relation",
]


@dataclass(frozen=True)
class Alphabet:
    """Two distinct digits of {0, ..., base-1} standing for the letters a, b."""

    symA: int
    symB: int
    base: int = 2

    def __post_init__(self):
        if self.base < 2:
            raise DomainError("base must be at least 2")
        if not (0 <= self.symA < self.base and 0 <= self.symB < self.base):
            raise DomainError("letters must be digits below the base")
        if self.symA == self.symB:
            raise DomainError("letters must be distinct")

    @property
    def c(self) -> int:
        """The residual constant (symB - symA)*(base - 1)."""
        return (self.symB - self.symA) * (self.base - 1)

    def digit(self, bit: int) -> int:
        return self.symB if bit else self.symA


class Word:
    """Immutable packed word over an abstract two-letter alphabet {a, b}.

    Bit 0 stands for the letter a, bit 1 for b; the first letter occupies the
    most significant bit.  Positions are 1-indexed.
    """

    __slots__ = ("bits", "length")

    def __init__(self, bits: int, length: int):
        if length < 0 or bits < 0 or bits.bit_length() > length:
            raise DomainError("packed bits do not fit the stated length")
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "length", length)

    def __setattr__(self, *a):
        raise AttributeError("Word is immutable")

    EMPTY: "Word"

    @staticmethod
    def from_letters(letters: Iterable[int]) -> "Word":
        bits = 0
        n = 0
        for letter in letters:
            bits = (bits << 1) | (1 if letter else 0)
            n += 1
        return Word(bits, n)

    @staticmethod
    def from_string(text: str) -> "Word":
        """Parse '0'/'1' or 'a'/'b' strings."""
        trans = {"0": "0", "1": "1", "a": "0", "b": "1"}
        bits01 = "".join(trans[ch] for ch in text)
        return Word(int(bits01, 2) if bits01 else 0, len(bits01))

    def __len__(self):
        return self.length

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return self.length == other.length and self.bits == other.bits

    def __hash__(self):
        return hash((self.bits, self.length))

    def __add__(self, other: "Word") -> "Word":
        return Word((self.bits << other.length) | other.bits, self.length + other.length)

    def __mul__(self, n: int) -> "Word":
        if n < 0:
            raise DomainError("negative repetition")
        bits, length = 0, 0
        piece_bits, piece_len = self.bits, self.length
        while n:
            if n & 1:
                bits = (bits << piece_len) | piece_bits
                length += piece_len
            n >>= 1
            if n:
                piece_bits = (piece_bits << piece_len) | piece_bits
                piece_len *= 2
        return Word(bits, length)

    def prefix(self, n: int) -> "Word":
        if not 0 <= n <= self.length:
            raise DomainError("prefix length out of range")
        return Word(self.bits >> (self.length - n), n)

    def suffix(self, n: int) -> "Word":
        if not 0 <= n <= self.length:
            raise DomainError("suffix length out of range")
        return Word(self.bits & ((1 << n) - 1), n)

    def letter(self, i: int) -> int:
        """Bit value of the i-th letter, 1-indexed."""
        if not 1 <= i <= self.length:
            raise DomainError("letter index out of range")
        return (self.bits >> (self.length - i)) & 1

    def to01(self) -> str:
        if self.length == 0:
            return ""
        return format(self.bits, f"0{self.length}b")

    def digits(self, alphabet: Alphabet) -> list[int]:
        a, b = alphabet.symA, alphabet.symB
        return [b if ch == "1" else a for ch in self.to01()]

    def digit_string(self, alphabet: Alphabet) -> str:
        if alphabet.base > 10:
            raise DomainError("digit strings need a base of at most 10")
        table = str.maketrans("01", f"{alphabet.symA}{alphabet.symB}")
        return self.to01().translate(table)

    def value(self, alphabet: Alphabet) -> int:
        """Integer whose base-b digit expansion is this word."""
        if self.length == 0:
            return 0
        b = alphabet.base
        ones = int(self.to01(), b) if self.bits else 0
        repunit = (b ** self.length - 1) // (b - 1)
        return alphabet.symA * repunit + (alphabet.symB - alphabet.symA) * ones

    def __repr__(self):
        shown = self.to01() if self.length <= 40 else self.to01()[:37] + "..."
        return f"Word({shown!r}, len={self.length})"


Word.EMPTY = Word(0, 0)


class StandardWordFamily:
    """The words M_0 = a, M_1 = a^(a_1 - 1) b, M_k = (M_{k-1})^{a_k} M_{k-2}.

    Lengths satisfy |M_k| = q_k.  Words are cached under a lock; q_k values
    come from the convergent table so that length bookkeeping never needs the
    words themselves.
    """

    def __init__(self, cf: ContinuedFraction, alphabet: Alphabet | None = None):
        self.cf = cf
        self.alphabet = alphabet or Alphabet(0, 1, 2)
        self._words: dict[int, Word] = {}
        self._lock = threading.RLock()

    @classmethod
    def from_theta(cls, theta, depth_hint: int = 4,
                   alphabet: Alphabet | None = None) -> "StandardWordFamily":
        return cls(expand(theta, depth_hint), alphabet)

    def a(self, k: int) -> int:
        return self.cf.quotient(k)

    def q(self, k: int) -> int:
        return convergents(self.cf, k).q(k)

    def word(self, k: int) -> Word:
        if k < 0:
            raise DomainError("word index must be nonnegative")
        with self._lock:
            have = self._words.get(k)
            if have is not None:
                return have
            for j in range(len(self._words), k + 1):
                if j == 0:
                    w = Word(0, 1)
                elif j == 1:
                    w = Word.from_letters([0] * (self.a(1) - 1) + [1])
                else:
                    w = self._words[j - 1] * self.a(j) + self._words[j - 2]
                self._words[j] = w
            return self._words[k]

    def word_mm(self, k: int) -> Word:
        """M_k with its last two letters removed."""
        if k < 2:
            raise DomainError("the two-letter truncation needs k >= 2")
        w = self.word(k)
        return w.prefix(w.length - 2)

    def word_star(self, k: int) -> Word:
        """M_k with its last two letters swapped."""
        tail = Word(0b10, 2) if k % 2 else Word(0b01, 2)  # ba for odd k, ab for even k
        return self.word_mm(k) + tail

    def word_prime(self, k: int) -> Word:
        """The rotated factor (M_{k-1})^{a_k - 1} M_{k-2}."""
        if k < 2:
            raise DomainError("the rotated factor needs k >= 2")
        return self.word(k - 1) * (self.a(k) - 1) + self.word(k - 2)


def standard_words(family: StandardWordFamily, K: int) -> list[Word]:
    """M_0 .. M_K."""
    return [family.word(k) for k in range(K + 1)]


def word_variants(family: StandardWordFamily, k: int) -> tuple[Word, Word, Word]:
    """(M_k minus last two letters, last-two-swapped M_k, rotated factor M'_k)."""
    return family.word_mm(k), family.word_star(k), family.word_prime(k)


# ---------------------------------------------------------------------------
# Sturmian sources


RhoLike = Union[Fraction, int, RhoMultiple, IntervalReal]


class SturmianSource:
    """Lazy Sturmian word with slope theta and intercept rho.

    variant 'lower' yields floor((n+1)theta+rho) - floor(n theta+rho) for
    n >= 0, 'upper' the ceiling differences, and 'characteristic' the word
    c_1 c_2 ... of intercept zero differences starting at n = 1.  Letters are
    memoized as a packed prefix behind a lock.
    """

    def __init__(self, theta, rho: RhoLike = Fraction(0), variant: str = "lower",
                 alphabet: Alphabet | None = None,
                 budget: PrecisionBudget = DEFAULT_BUDGET):
        if variant not in ("lower", "upper", "characteristic"):
            raise DomainError(f"unknown variant {variant!r}")
        if isinstance(theta, Fraction):
            raise DomainError("a rational slope has no (aperiodic) Sturmian word")
        self.theta = theta
        self.variant = variant
        self.alphabet = alphabet or Alphabet(0, 1, 2)
        self.budget = budget
        self._bits = 0
        self._len = 0
        self._lock = threading.RLock()
        self._family: StandardWordFamily | None = None
        self._last_floor: int | None = None

        if isinstance(rho, int):
            rho = Fraction(rho)
        if variant == "characteristic":
            rho = Fraction(0)
        self.rho = rho
        self._shift = 0
        self._off: Fraction | IntervalReal = Fraction(0)
        if isinstance(rho, RhoMultiple):
            self._shift = rho.j
        elif isinstance(rho, (Fraction, IntervalReal)):
            self._off = rho
        else:
            raise DomainError(f"unsupported intercept {type(rho).__name__}")
        if isinstance(self._off, Fraction) and not 0 <= self._off < 1:
            raise DomainError("intercept must lie in [0, 1)")

    # -- floors of m*theta + rho ------------------------------------------------

    def _floors_exact_surd(self, m_start: int, m_stop: int, want_ceil: bool) -> list[int]:
        from math import isqrt
        th: QuadraticSurd = self.theta
        off = self._off
        u, v = off.numerator, off.denominator
        p, r, q, d = th.p, th.r, th.q, th.d
        sh = self._shift
        den = q * v
        uq = u * q
        vp, vr = v * p, v * r
        out = []
        for m in range(m_start, m_stop):
            mm = m + sh
            B = vr * mm
            if B == 0:
                A = uq
                f = A // den
                if want_ceil:
                    f = -((-A) // den)
            else:
                A = vp * mm + uq
                s = isqrt(B * B * d)
                if B > 0:
                    f = (A + s) // den
                else:
                    f = (A - s - 1) // den
                if want_ceil:
                    f += 1  # irrational value, so ceil = floor + 1
            out.append(f)
        return out

    def _floor_generic(self, m: int, want_ceil: bool) -> int:
        theta = self.theta
        off = self._off
        mm = m + self._shift
        if isinstance(off, IntervalReal):
            lo_val = floor_linear(theta, mm, off.lower, self.budget) if not want_ceil \
                else -floor_linear(theta, -mm, -off.upper, self.budget)
            hi_val = floor_linear(theta, mm, off.upper, self.budget) if not want_ceil \
                else -floor_linear(theta, -mm, -off.lower, self.budget)
            if lo_val != hi_val:
                raise ResolutionExceeded(
                    f"letter undecided: the intercept uncertainty straddles an integer "
                    f"at position {m}", bits=self.budget.max_bits)
            return lo_val
        if want_ceil:
            return -floor_linear(theta, -mm, -off, self.budget)
        return floor_linear(theta, mm, off, self.budget)

    def _floors(self, m_start: int, m_stop: int) -> list[int]:
        want_ceil = self.variant == "upper"
        if isinstance(self.theta, QuadraticSurd) and isinstance(self._off, Fraction):
            return self._floors_exact_surd(m_start, m_stop, want_ceil)
        return [self._floor_generic(m, want_ceil) for m in range(m_start, m_stop)]

    # -- prefix machinery -------------------------------------------------------

    def _extend(self, n: int):
        if self._len >= n:
            return
        base = 1 if self.variant == "characteristic" else 0
        start = self._len
        if self._last_floor is None:
            self._last_floor = self._floors(base + start, base + start + 1)[0]
        floors = self._floors(base + start + 1, base + n + 1)
        bits = self._bits
        prev = self._last_floor
        for f in floors:
            step = f - prev
            if step not in (0, 1):
                raise DomainError(f"slope outside (0,1): letter step {step}")
            bits = (bits << 1) | step
            prev = f
        self._bits = bits
        self._len = n
        self._last_floor = prev

    def prefix(self, n: int) -> Word:
        """The first n letters, 1-indexed."""
        if n < 0:
            raise DomainError("prefix length must be nonnegative")
        with self._lock:
            self._extend(n)
            return Word(self._bits >> (self._len - n), n)

    def prefix01(self, n: int) -> str:
        return self.prefix(n).to01()

    def letter(self, n: int) -> int:
        if n < 1:
            raise DomainError("letters are indexed from 1")
        return self.prefix(n).letter(n)

    @property
    def family(self) -> StandardWordFamily:
        with self._lock:
            if self._family is None:
                self._family = StandardWordFamily(
                    ContinuedFraction(self.theta, self.budget), self.alphabet)
            return self._family

    def characteristic_sibling(self) -> "SturmianSource":
        if self.variant == "characteristic":
            return self
        return SturmianSource(self.theta, Fraction(0), "characteristic",
                              self.alphabet, self.budget)


def sturmian_prefix(source: SturmianSource, n: int) -> Word:
    """First n letters of the source word."""
    if n < 1:
        raise DomainError("need n >= 1")
    return source.prefix(n)


# ---------------------------------------------------------------------------
# decomposition at level k


@dataclass(frozen=True)
class Decomposition:
    """x = U (M_k)^d M_{k-1} M_k M_k ... with d in {a_{k+1}, a_{k+1}+1}.

    case_tag records which branch of the alignment trichotomy fired; the
    'iii' branch splits on one extra letter, labelled iii-a / iii-b here.
    """

    k: int
    U: Word
    d: int
    case_tag: str


def _z_array(s: str) -> list[int]:
    n = len(s)
    z = [0] * n
    z[0] = n
    l = r = 0
    for i in range(1, n):
        if i < r:
            z[i] = min(r - i, z[i - l])
        while i + z[i] < n and s[z[i]] == s[i + z[i]]:
            z[i] += 1
        if i + z[i] > r:
            l, r = i, i + z[i]
    return z


def _full_suffix_lengths(x01: str, s01: str) -> set[int]:
    """Lengths L such that the suffix of s of length L is a prefix of x."""
    if not s01:
        return set()
    cat = x01 + "#" + s01
    z = _z_array(cat)
    n = len(s01)
    offset = len(x01) + 1
    return {n - i for i in range(n) if z[offset + i] >= n - i}


def _pattern_lcps(x01: str, pattern: str, upto: int) -> list[int]:
    """lcp(x[i:], pattern) for each 0 <= i < upto."""
    cat = pattern + "#" + x01
    z = _z_array(cat)
    offset = len(pattern) + 1
    return [z[offset + i] for i in range(upto)]


def decompose(source: SturmianSource, k: int) -> Decomposition:
    """Locate the unique alignment of the source word against level k.

    Scans all 2 q_{k+1} + q_k candidate alignments (suffix choices of
    M_{k+1} or M_k) on the prefix of length 2 q_{k+1} + q_k - 1, asserts that
    exactly one matches, and cross-checks the reconstructed prefix.
    """
    if k < 3:
        raise DomainError("decomposition needs k >= 3")
    fam = source.family
    Mk1, Mk, Mkm1 = fam.word(k + 1), fam.word(k), fam.word(k - 1)
    q1, q = Mk1.length, Mk.length
    a_next = fam.a(k + 1)
    L = 2 * q1 + q - 1

    x01 = source.prefix01(L + q)
    xL = x01[:L]

    tail_a = (Mk1 + Mk + fam.word_mm(k + 1)).to01()      # after W in cases i and iii
    tail_b = (Mk + Mk1 + Mk + fam.word_mm(k + 1)).to01()  # after W in case ii
    lcp_a = _pattern_lcps(xL, tail_a, q1 + 1)
    lcp_b = _pattern_lcps(xL, tail_b, q1 + 1)
    ok_suffix_k1 = _full_suffix_lengths(xL, Mk1.to01())
    ok_suffix_k = _full_suffix_lengths(xL, Mk.to01())

    matches: list[tuple[str, int]] = []
    for ell in range(1, q1 + 1):
        if ell in ok_suffix_k1 and lcp_a[ell] >= L - ell:
            matches.append(("i", ell))
        if ell in ok_suffix_k1 and lcp_b[ell] >= L - ell:
            matches.append(("ii", ell))
    for ell in range(1, q + 1):
        if ell in ok_suffix_k and lcp_a[ell] >= L - ell:
            matches.append(("iii", ell))
    if len(matches) != 1:
        raise DomainError(
            f"alignment at level {k} matched {len(matches)} candidates; "
            "the input word is not Sturmian of this slope")

    case, ell = matches[0]
    if case == "i":
        dec = Decomposition(k, Mk1.suffix(ell), a_next, "i")
    elif case == "ii":
        dec = Decomposition(k, Mk1.suffix(ell), a_next + 1, "ii")
    else:
        u = Mk.suffix(ell) + Mk1
        opt_a = (Mk1 + Mk1 + Mk).letter(L)
        opt_b = (Mk1 + Mk + Mk1).letter(L)
        if opt_a == opt_b:
            raise DomainError("alignment tie-break letter is not discriminating")
        actual = source.letter(ell + L)
        if actual == opt_a:
            dec = Decomposition(k, u, a_next, "iii-a")
        else:
            dec = Decomposition(k, u, a_next + 1, "iii-b")

    built = reconstruct_prefix(fam, dec)
    if source.prefix(built.length) != built:
        raise DomainError(f"reconstruction mismatch at level {k}")
    return dec


def reconstruct_prefix(family: StandardWordFamily, dec: Decomposition) -> Word:
    """U (M_k)^d M_{k-1} M_k M_k for the decomposition's level."""
    k = dec.k
    return (dec.U + family.word(k) * dec.d + family.word(k - 1)
            + family.word(k) + family.word(k))


# ---------------------------------------------------------------------------
# shift detection


@dataclass(frozen=True)
class ShiftRelation:
    """sigma^p relation between the source word and the characteristic word.

    direction 'characteristic-shifted' means shifting the characteristic word
    p times yields the source word; 'word-shifted' means the source word
    shifted p times is the characteristic word.  j is the slope multiple with
    rho = {j * theta}.
    """

    p: int
    direction: str
    j: int


def _rho_matches_multiple(theta, rho: RhoLike, j: int,
                          budget: PrecisionBudget) -> bool:
    """Exact test of rho == {j * theta}; may raise ResolutionExceeded."""
    if isinstance(rho, RhoMultiple):
        return rho.j == j
    if isinstance(theta, QuadraticSurd):
        if j == 0:
            return compare(rho, Fraction(0), budget) == 0
        if isinstance(rho, Fraction):
            return False  # {j*theta} is irrational
        frac = j * theta - floor_linear(theta, j)
        return compare(frac, rho, budget) == 0
    # interval-backed slope: equality is provable only in the trivial j = 0 case
    frac = to_interval(theta) * j - floor_linear(theta, j, budget=budget)
    return compare(frac, rho, budget) == 0


def shift_relation(theta, rho: RhoLike, bound: int,
                   budget: PrecisionBudget = DEFAULT_BUDGET) -> Optional[ShiftRelation]:
    """Find p <= bound with sigma^p(word) = characteristic or conversely.

    The word with intercept {j theta} is the characteristic word shifted
    j - 1 times when j >= 1, and needs 1 - j shifts to become characteristic
    when j <= 0; detection is by exact comparison of rho against {j theta}
    for |j| <= bound + 1.
    """
    if bound < 0:
        raise DomainError("bound must be nonnegative")
    if isinstance(rho, int):
        rho = Fraction(rho)
    for p in range(bound + 1):
        for j in ((p + 1,) if p == 0 else (p + 1, 1 - p)):
            if _rho_matches_multiple(theta, rho, j, budget):
                if j >= 1:
                    return ShiftRelation(j - 1, "characteristic-shifted", j)
                return ShiftRelation(1 - j, "word-shifted", j)
    return None
