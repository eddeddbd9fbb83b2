"""Certified interval arithmetic over exact rational endpoints.

Every quantity that feeds a strict inequality elsewhere in the package (floor
certification, constant thresholds, Lemma-style unit bounds) is carried as a
``RealInterval`` with ``fractions.Fraction`` endpoints.  Ring operations are
exact; only the transcendental constructors (pi, log, exp, roots) round, and
they always round *outward*, so a true value contained in the inputs is
contained in the output.  Precision is a bit count: transcendental results are
tightened to roughly 2^-prec relative width.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Union

Rat = Union[int, Fraction]

DEFAULT_PREC = 128


def _floor_div(a: int, b: int) -> int:
    return a // b


def round_down(x: Fraction, prec: int) -> Fraction:
    """Largest multiple of 2^-prec that is <= x."""
    return Fraction(_floor_div(x.numerator << prec, x.denominator), 1 << prec)


def round_up(x: Fraction, prec: int) -> Fraction:
    return -round_down(-x, prec)


def _log2_floor(x: Fraction) -> int:
    """floor(log2(x)) for x > 0."""
    e = x.numerator.bit_length() - x.denominator.bit_length()
    while Fraction(2) ** e > x:
        e -= 1
    while Fraction(2) ** (e + 1) <= x:
        e += 1
    return e


def round_down_rel(x: Fraction, prec: int) -> Fraction:
    """Round toward -inf keeping ~prec significant bits (never to zero)."""
    if x == 0:
        return x
    shift = prec - _log2_floor(abs(x))
    if shift <= 0:
        return round_down(x, 0) if x.denominator != 1 else x
    return round_down(x, shift)


def round_up_rel(x: Fraction, prec: int) -> Fraction:
    return -round_down_rel(-x, prec)


class RealInterval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Rat, hi: Rat | None = None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval: lo={lo} > hi={hi}")
        self.lo = lo
        self.hi = hi

    # -- constructors -------------------------------------------------------

    @staticmethod
    def exact(q: Rat) -> "RealInterval":
        q = Fraction(q)
        return RealInterval(q, q)

    # -- predicates ---------------------------------------------------------

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, q: Rat) -> bool:
        q = Fraction(q)
        return self.lo <= q <= self.hi

    def contains_interval(self, other: "RealInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def straddles_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    # certified comparisons: True only when provable from the endpoints
    def certainly_lt(self, other: "RealInterval | Rat") -> bool:
        o = other if isinstance(other, RealInterval) else RealInterval.exact(other)
        return self.hi < o.lo

    def certainly_le(self, other: "RealInterval | Rat") -> bool:
        o = other if isinstance(other, RealInterval) else RealInterval.exact(other)
        return self.hi <= o.lo

    def certainly_gt(self, other: "RealInterval | Rat") -> bool:
        o = other if isinstance(other, RealInterval) else RealInterval.exact(other)
        return self.lo > o.hi

    def certainly_positive(self) -> bool:
        return self.lo > 0

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    # -- exact ring operations ----------------------------------------------

    def __add__(self, other: "RealInterval | Rat") -> "RealInterval":
        o = other if isinstance(other, RealInterval) else RealInterval.exact(other)
        return RealInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> "RealInterval":
        return RealInterval(-self.hi, -self.lo)

    def __sub__(self, other: "RealInterval | Rat") -> "RealInterval":
        o = other if isinstance(other, RealInterval) else RealInterval.exact(other)
        return RealInterval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other: Rat) -> "RealInterval":
        return RealInterval.exact(other) - self

    def __mul__(self, other: "RealInterval | Rat") -> "RealInterval":
        o = other if isinstance(other, RealInterval) else RealInterval.exact(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RealInterval(min(products), max(products))

    __rmul__ = __mul__

    def inverse(self) -> "RealInterval":
        if self.straddles_zero():
            raise ZeroDivisionError("interval straddles zero")
        return RealInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other: "RealInterval | Rat") -> "RealInterval":
        o = other if isinstance(other, RealInterval) else RealInterval.exact(other)
        return self * o.inverse()

    def __rtruediv__(self, other: Rat) -> "RealInterval":
        return RealInterval.exact(other) * self.inverse()

    def abs(self) -> "RealInterval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RealInterval(0, max(-self.lo, self.hi))

    def square(self) -> "RealInterval":
        a = self.abs()
        return RealInterval(a.lo * a.lo, a.hi * a.hi)

    def pow_int(self, n: int) -> "RealInterval":
        if n == 0:
            return RealInterval.exact(1)
        if n < 0:
            return self.pow_int(-n).inverse()
        result = RealInterval.exact(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def max_with(self, other: "RealInterval | Rat") -> "RealInterval":
        o = other if isinstance(other, RealInterval) else RealInterval.exact(other)
        return RealInterval(max(self.lo, o.lo), max(self.hi, o.hi))

    def union(self, other: "RealInterval") -> "RealInterval":
        return RealInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def rounded(self, prec: int) -> "RealInterval":
        """Outward-round endpoints keeping ~prec significant bits.

        Keeps denominators bounded in long exact computation chains without
        flushing tiny magnitudes to zero.
        """
        return RealInterval(round_down_rel(self.lo, prec), round_up_rel(self.hi, prec))

    def __repr__(self) -> str:
        if self.is_exact():
            return f"RealInterval({self.lo})"
        return f"RealInterval({float(self.lo)!r}, {float(self.hi)!r})"


# ---------------------------------------------------------------------------
# roots


def _int_nth_root_floor(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0 by Newton iteration on integers."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0
    if k == 1:
        return n
    if k == 2:
        return isqrt(n)
    x = 1 << (-(-n.bit_length() // k))  # >= true root
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    return x


def sqrt_interval(x: "RealInterval | Rat", prec: int = DEFAULT_PREC) -> RealInterval:
    return nth_root_interval(x, 2, prec)


def nth_root_interval(x: "RealInterval | Rat", n: int, prec: int = DEFAULT_PREC) -> RealInterval:
    """Certified n-th root of a nonnegative interval.

    Exact endpoints that are perfect n-th powers of rationals stay exact, so
    e.g. sqrt(25/4) is the point 5/2.
    """
    xi = x if isinstance(x, RealInterval) else RealInterval.exact(x)
    if xi.lo < 0:
        raise ValueError("n-th root of negative interval")

    def root_down(q: Fraction) -> Fraction:
        if q == 0:
            return Fraction(0)
        rn = _int_nth_root_floor(q.numerator, n)
        rd = _int_nth_root_floor(q.denominator, n)
        if rn ** n == q.numerator and rd ** n == q.denominator and Fraction(rn, rd) ** n == q:
            return Fraction(rn, rd)
        scaled = (q.numerator << (n * prec)) // q.denominator
        return Fraction(_int_nth_root_floor(scaled, n), 1 << prec)

    def root_up(q: Fraction) -> Fraction:
        if q == 0:
            return Fraction(0)
        rn = _int_nth_root_floor(q.numerator, n)
        rd = _int_nth_root_floor(q.denominator, n)
        if rn ** n == q.numerator and rd ** n == q.denominator and Fraction(rn, rd) ** n == q:
            return Fraction(rn, rd)
        scaled = -((-q.numerator << (n * prec)) // q.denominator)  # ceil
        r = _int_nth_root_floor(scaled, n)
        if r ** n < scaled:
            r += 1
        return Fraction(r, 1 << prec)

    return RealInterval(root_down(xi.lo), root_up(xi.hi))


# ---------------------------------------------------------------------------
# transcendental constants and functions, all via series with explicit tails


@lru_cache(maxsize=None)
def pi_interval(prec: int = DEFAULT_PREC) -> RealInterval:
    """Machin's formula; atan partial sums of an alternating series bracket."""

    def atan_brackets(inv: int, terms: int) -> tuple[Fraction, Fraction]:
        # atan(1/inv); alternating series, consecutive partial sums bracket
        x = Fraction(1, inv)
        term = x
        s = Fraction(0)
        lo = hi = None
        x2 = x * x
        for k in range(terms):
            s += term if k % 2 == 0 else -term
            if k % 2 == 0:
                hi = s
            else:
                lo = s
            term *= x2 / Fraction(2 * k + 3) * Fraction(2 * k + 1)
        assert lo is not None and hi is not None
        return lo, hi

    # term magnitude ~ inv^-(2k+1); pick enough terms for 2^-(prec+16)
    t5 = (prec + 24) // 4 + 4      # log2(25) ~ 4.6 per term
    t239 = (prec + 24) // 15 + 4   # log2(239^2) ~ 15.8 per term
    lo5, hi5 = atan_brackets(5, max(t5, 4))
    lo239, hi239 = atan_brackets(239, max(t239, 4))
    lo = 16 * lo5 - 4 * hi239
    hi = 16 * hi5 - 4 * lo239
    return RealInterval(lo, hi).rounded(prec + 8)


def _atanh_brackets(t: Fraction, prec: int) -> tuple[Fraction, Fraction]:
    """atanh(t) for |t| < 1/2: positive series with geometric tail bound."""
    sign = 1
    if t < 0:
        sign = -1
        t = -t
    t2 = t * t
    term = t
    s = Fraction(0)
    k = 0
    bound = Fraction(1, 1 << (prec + 16))
    while True:
        s += term / (2 * k + 1)
        term *= t2
        k += 1
        # remaining tail <= term/(2k+1) * 1/(1-t2) <= term * 2
        if term * 2 <= bound:
            break
        if k > 4 * prec + 64:
            raise RuntimeError("atanh series failed to converge")
    tail = term * 2
    if sign > 0:
        return s, s + tail
    return -(s + tail), -s


@lru_cache(maxsize=None)
def ln2_interval(prec: int = DEFAULT_PREC) -> RealInterval:
    lo, hi = _atanh_brackets(Fraction(1, 3), prec)
    return RealInterval(2 * lo, 2 * hi).rounded(prec + 8)


def _log_point(q: Fraction, prec: int) -> RealInterval:
    """Certified enclosure of log(q) for an exact rational q > 0."""
    if q <= 0:
        raise ValueError("log of nonpositive value")
    if q == 1:
        return RealInterval.exact(0)
    # normalize q = m * 2^k with m in [3/4, 3/2)
    k = 0
    m = q
    while m >= Fraction(3, 2):
        m /= 2
        k += 1
    while m < Fraction(3, 4):
        m *= 2
        k -= 1
    t = (m - 1) / (m + 1)  # |t| <= 1/5
    lo_a, hi_a = _atanh_brackets(t, prec)
    l2 = ln2_interval(prec)
    res = RealInterval(2 * lo_a, 2 * hi_a) + l2 * k
    return res.rounded(prec + 8)


def log_interval(x: "RealInterval | Rat", prec: int = DEFAULT_PREC) -> RealInterval:
    xi = x if isinstance(x, RealInterval) else RealInterval.exact(x)
    if xi.lo <= 0:
        raise ValueError("log of interval touching zero")
    if xi.is_exact():
        return _log_point(xi.lo, prec)
    return RealInterval(_log_point(xi.lo, prec).lo, _log_point(xi.hi, prec).hi)


def _exp_point_brackets(q: Fraction, prec: int) -> tuple[Fraction, Fraction]:
    """Brackets for exp(q) at an exact rational q."""
    if q == 0:
        return Fraction(1), Fraction(1)
    # argument reduction: exp(q) = exp(q/2^m)^(2^m) with |q/2^m| <= 1/2
    m = 0
    r = q
    while abs(r) > Fraction(1, 2):
        r /= 2
        m += 1
    term = Fraction(1)
    s = Fraction(0)
    k = 0
    bound = Fraction(1, 1 << (prec + 16 + m))
    while True:
        s += term
        k += 1
        term *= r / k
        if abs(term) * 2 <= bound:
            break
        if k > 4 * prec + 64:
            raise RuntimeError("exp series failed to converge")
    tail = abs(term) * 2  # remaining tail bounded by first omitted term * 2
    lo, hi = s - tail, s + tail
    lo = max(lo, Fraction(0))
    for _ in range(m):
        lo, hi = lo * lo, hi * hi
        lo = round_down_rel(lo, prec + 16)
        hi = round_up_rel(hi, prec + 16)
    return lo, hi


def exp_interval(x: "RealInterval | Rat", prec: int = DEFAULT_PREC) -> RealInterval:
    xi = x if isinstance(x, RealInterval) else RealInterval.exact(x)
    lo, _ = _exp_point_brackets(xi.lo, prec)
    if xi.is_exact():
        _, hi = _exp_point_brackets(xi.lo, prec)
    else:
        _, hi = _exp_point_brackets(xi.hi, prec)
    return RealInterval(lo, hi).rounded(prec + 8)


# ---------------------------------------------------------------------------
# complex rectangles


class ComplexInterval:
    """Axis-aligned rectangle re x im enclosing a complex value.

    The spec-level contract is midpoint/radius; both views are exposed
    (`midpoint` and `radius`), the rectangle being the working representation.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: "RealInterval | Rat", im: "RealInterval | Rat" = 0):
        self.re = re if isinstance(re, RealInterval) else RealInterval.exact(re)
        self.im = im if isinstance(im, RealInterval) else RealInterval.exact(im)

    @staticmethod
    def exact(re: Rat, im: Rat = 0) -> "ComplexInterval":
        return ComplexInterval(RealInterval.exact(re), RealInterval.exact(im))

    def is_real_exact(self) -> bool:
        return self.im.is_exact() and self.im.lo == 0

    def midpoint(self) -> tuple[Fraction, Fraction]:
        return (self.re.midpoint(), self.im.midpoint())

    def radius(self) -> Fraction:
        return max(self.re.width(), self.im.width()) / 2 * 2  # sup-norm box radius

    def conjugate(self) -> "ComplexInterval":
        return ComplexInterval(self.re, -self.im)

    def __add__(self, other: "ComplexInterval | Rat") -> "ComplexInterval":
        o = other if isinstance(other, ComplexInterval) else ComplexInterval.exact(other)
        return ComplexInterval(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "ComplexInterval":
        return ComplexInterval(-self.re, -self.im)

    def __sub__(self, other: "ComplexInterval | Rat") -> "ComplexInterval":
        o = other if isinstance(other, ComplexInterval) else ComplexInterval.exact(other)
        return ComplexInterval(self.re - o.re, self.im - o.im)

    def __mul__(self, other: "ComplexInterval | Rat") -> "ComplexInterval":
        if isinstance(other, (int, Fraction)):
            return ComplexInterval(self.re * other, self.im * other)
        return ComplexInterval(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def abs_sq(self) -> RealInterval:
        return self.re.square() + self.im.square()

    def abs_interval(self, prec: int = DEFAULT_PREC) -> RealInterval:
        return sqrt_interval(self.abs_sq(), prec)

    def rounded(self, prec: int) -> "ComplexInterval":
        return ComplexInterval(self.re.rounded(prec), self.im.rounded(prec))

    def __repr__(self) -> str:
        return f"ComplexInterval(re={self.re!r}, im={self.im!r})"


def eval_poly_interval(coeffs: list[Fraction], z: ComplexInterval, prec: int) -> ComplexInterval:
    """Horner evaluation of an exact-rational polynomial on a rectangle."""
    acc = ComplexInterval.exact(0)
    for c in reversed(coeffs):
        acc = (acc * z + ComplexInterval.exact(c)).rounded(prec + 16)
    return acc
