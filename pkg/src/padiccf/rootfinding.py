"""Exact polynomial utilities and certified complex root isolation.

Real roots are isolated with Sturm sequences and refined by rational
bisection, so real-root counts (hence field signatures) are exact.  Complex
conjugate pairs are approximated numerically and then certified through
Weierstrass correction disks evaluated in exact rational arithmetic: for
approximations z_1..z_d of the roots of a monic f, every root lies in the
union of the disks D(z_i, d*|f(z_i)/prod_{j!=i}(z_i-z_j)|), and when the disks
are pairwise disjoint each contains exactly one root.
"""
from __future__ import annotations

from fractions import Fraction

import mpmath

from .intervals import ComplexInterval, RealInterval, sqrt_interval

Poly = list[Fraction]  # little-endian coefficients, constant term first


def poly_degree(p: Poly) -> int:
    d = len(p) - 1
    while d > 0 and p[d] == 0:
        d -= 1
    return d


def poly_trim(p: Poly) -> Poly:
    return p[: poly_degree(p) + 1]


def poly_eval(p: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_deriv(p: Poly) -> Poly:
    if len(p) <= 1:
        return [Fraction(0)]
    return [Fraction(i) * c for i, c in enumerate(p)][1:]


def poly_mul(a: Poly, b: Poly) -> Poly:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    a = poly_trim(list(a))
    b = poly_trim(list(b))
    if poly_degree(b) == 0 and b[0] == 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    r = list(a)
    db, lead = poly_degree(b), b[poly_degree(b)]
    while poly_degree(r) >= db and any(c != 0 for c in r):
        dr = poly_degree(r)
        if r[dr] == 0:
            break
        coef = r[dr] / lead
        q[dr - db] = coef
        for i in range(db + 1):
            r[dr - db + i] -= coef * b[i]
    return poly_trim(q), poly_trim(r)


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Extended gcd: returns (g, s, t) with s*a + t*b = g (g monic unless 0)."""
    r0, r1 = poly_trim(list(a)), poly_trim(list(b))
    s0, s1 = [Fraction(1)], [Fraction(0)]
    t0, t1 = [Fraction(0)], [Fraction(1)]
    while any(c != 0 for c in r1):
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_trim([x - y for x, y in
                                zip(s0 + [Fraction(0)] * len(poly_mul(q, s1)), poly_mul(q, s1) + [Fraction(0)] * len(s0))])
        t0, t1 = t1, poly_trim([x - y for x, y in
                                zip(t0 + [Fraction(0)] * len(poly_mul(q, t1)), poly_mul(q, t1) + [Fraction(0)] * len(t0))])
    lead = r0[poly_degree(r0)]
    if lead != 0 and lead != 1:
        r0 = [c / lead for c in r0]
        s0 = [c / lead for c in s0]
        t0 = [c / lead for c in t0]
    return poly_trim(r0), poly_trim(s0), poly_trim(t0)


def sylvester_resultant(a: Poly, b: Poly) -> Fraction:
    a, b = poly_trim(list(a)), poly_trim(list(b))
    m, n = poly_degree(a), poly_degree(b)
    if m == 0:
        return a[0] ** n
    if n == 0:
        return b[0] ** m
    size = m + n
    mat = [[Fraction(0)] * size for _ in range(size)]
    for i in range(n):
        for j, c in enumerate(reversed(a)):
            mat[i][i + j] = c
    for i in range(m):
        for j, c in enumerate(reversed(b)):
            mat[n + i][i + j] = c
    # fraction Gaussian elimination determinant
    det = Fraction(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if mat[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for r in range(col + 1, size):
            if mat[r][col] != 0:
                factor = mat[r][col] * inv
                for c in range(col, size):
                    mat[r][c] -= factor * mat[col][c]
    return det


def poly_disc(p: Poly) -> Fraction:
    """Discriminant of p (with respect to its leading coefficient)."""
    d = poly_degree(p)
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    if d == 1:
        return Fraction(1)
    res = sylvester_resultant(p, poly_deriv(p))
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * res / p[d]


# ---------------------------------------------------------------------------
# Sturm sequences and real roots


def sturm_chain(p: Poly) -> list[Poly]:
    chain = [poly_trim(list(p)), poly_trim(poly_deriv(p))]
    while poly_degree(chain[-1]) > 0 or chain[-1][0] != 0:
        _, r = poly_divmod(chain[-2], chain[-1])
        if all(c == 0 for c in r):
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(chain: list[Poly], x: Fraction) -> int:
    signs = []
    for q in chain:
        v = poly_eval(q, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: Poly, lo: Fraction | None = None, hi: Fraction | None = None) -> int:
    """Number of distinct real roots in (lo, hi]; whole line by default."""
    chain = sturm_chain(p)
    if lo is None or hi is None:
        bound = root_bound(p)
        lo = -bound if lo is None else lo
        hi = bound if hi is None else hi
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def root_bound(p: Poly) -> Fraction:
    """Cauchy bound: all complex roots have |z| < bound."""
    p = poly_trim(list(p))
    d = poly_degree(p)
    lead = p[d]
    return 1 + max(abs(c / lead) for c in p[:d]) if d > 0 else Fraction(1)


def isolate_real_roots(p: Poly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals (a, b], each containing exactly one real root."""
    chain = sturm_chain(p)
    bound = root_bound(p)
    out: list[tuple[Fraction, Fraction]] = []

    def recurse(a: Fraction, b: Fraction, va: int, vb: int) -> None:
        n = va - vb
        if n == 0:
            return
        if n == 1:
            out.append((a, b))
            return
        mid = (a + b) / 2
        vm = _sign_changes(chain, mid)
        recurse(a, mid, va, vm)
        recurse(mid, b, vm, vb)

    recurse(-bound, bound, _sign_changes(chain, -bound), _sign_changes(chain, bound))
    out.sort()
    return out


def refine_real_root(p: Poly, a: Fraction, b: Fraction, prec: int) -> RealInterval:
    """Bisect (a, b] containing one simple root down to width <= 2^-prec."""
    fa = poly_eval(p, a)
    fb = poly_eval(p, b)
    if fb == 0:
        return RealInterval.exact(b)
    if fa == 0:
        # nudge off the exact root at the open endpoint
        a = (3 * a + b) / 4
        fa = poly_eval(p, a)
        if fa == 0:
            return RealInterval.exact(a)
    target = Fraction(1, 1 << prec)
    while b - a > target:
        mid = (a + b) / 2
        fm = poly_eval(p, mid)
        if fm == 0:
            return RealInterval.exact(mid)
        if (fa > 0) == (fm > 0):
            a, fa = mid, fm
        else:
            b, fb = mid, fm
    return RealInterval(a, b)


# ---------------------------------------------------------------------------
# certified complex roots


class _QI:
    """Exact arithmetic in Q(i) for the Weierstrass certificates."""

    __slots__ = ("re", "im")

    def __init__(self, re: Fraction, im: Fraction):
        self.re = re
        self.im = im

    def __add__(self, o: "_QI") -> "_QI":
        return _QI(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "_QI") -> "_QI":
        return _QI(self.re - o.re, self.im - o.im)

    def __mul__(self, o: "_QI") -> "_QI":
        return _QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def abs_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inv(self) -> "_QI":
        n = self.abs_sq()
        return _QI(self.re / n, -self.im / n)


def _mpf_to_fraction(x) -> Fraction:
    # read mantissa/exponent directly: mpmath.mpf(x) would round to the
    # *current* context precision, discarding the high-precision digits
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return Fraction(0)
    v = Fraction(int(man), 1) * (Fraction(2) ** int(exp))
    return -v if sign else v


def certified_roots(int_coeffs: list[int], prec: int) -> list[ComplexInterval]:
    """All d roots of a squarefree monic integer polynomial, certified.

    Ordering: real roots ascending, then one box per conjugate pair (positive
    imaginary part first, pairs by ascending real part), followed immediately
    by its conjugate.  The ordering is stable across precisions.
    """
    coeffs = [Fraction(c) for c in int_coeffs]
    d = poly_degree(coeffs)
    if coeffs[d] != 1:
        raise ValueError("expected a monic polynomial")
    if d == 1:
        return [ComplexInterval.exact(-coeffs[0])]

    real_iso = isolate_real_roots(coeffs)
    r1 = len(real_iso)
    r2, rem = divmod(d - r1, 2)
    assert rem == 0
    real_boxes = [
        ComplexInterval(refine_real_root(coeffs, a, b, prec + 8), RealInterval.exact(0))
        for a, b in real_iso
    ]
    if r2 == 0:
        return real_boxes

    dps = max(30, int((prec + 64) * 0.3103) + 20)
    for attempt in range(6):
        with mpmath.workdps(dps << attempt):
            try:
                approx = mpmath.polyroots([mpmath.mpf(int(c)) for c in reversed(int_coeffs)],
                                          maxsteps=200, extraprec=120)
            except mpmath.libmp.NoConvergence:
                continue
        zs = [_QI(_mpf_to_fraction(z.real), _mpf_to_fraction(z.imag)) for z in approx]
        boxes = _weierstrass_boxes(coeffs, zs, d, prec + 32)
        if boxes is None:
            continue
        upper = [b for b in boxes if b.im.lo > 0]
        if len(upper) != r2:
            continue
        upper.sort(key=lambda b: (b.re.lo, b.im.lo))
        pair_boxes: list[ComplexInterval] = []
        for b in upper:
            pair_boxes.append(b)
            pair_boxes.append(b.conjugate())
        # tighten beyond requested precision if the boxes are too coarse
        if all(b.re.width() <= Fraction(1, 1 << prec) and b.im.width() <= Fraction(1, 1 << prec)
               for b in pair_boxes):
            return real_boxes + pair_boxes
    raise RuntimeError("could not certify complex roots at requested precision")


def _weierstrass_boxes(coeffs: list[Fraction], zs: list[_QI], d: int, prec: int) -> list[ComplexInterval] | None:
    radii_sq: list[Fraction] = []
    for i, z in enumerate(zs):
        fz = _QI(Fraction(0), Fraction(0))
        for c in reversed(coeffs):
            fz = fz * z + _QI(Fraction(c), Fraction(0))
        denom = _QI(Fraction(1), Fraction(0))
        for j, w in enumerate(zs):
            if j != i:
                denom = denom * (z - w)
        if denom.abs_sq() == 0:
            return None
        w_sq = fz.abs_sq() / denom.abs_sq()
        radii_sq.append(w_sq * d * d)
    # pairwise disjointness: |z_i - z_j| > R_i + R_j, via squares
    for i in range(len(zs)):
        for j in range(i + 1, len(zs)):
            dist_sq = (zs[i] - zs[j]).abs_sq()
            # (R_i + R_j)^2 <= 2(R_i^2 + R_j^2)
            if dist_sq <= 2 * (radii_sq[i] + radii_sq[j]):
                return None
    boxes = []
    for z, r_sq in zip(zs, radii_sq):
        r = sqrt_interval(RealInterval.exact(r_sq), prec).hi
        boxes.append(ComplexInterval(RealInterval(z.re - r, z.re + r),
                                     RealInterval(z.im - r, z.im + r)))
    # boxes straddling the real axis belong to real roots (isolated separately
    # via Sturm); genuinely complex roots must certify off-axis, which the
    # caller checks by counting boxes with im.lo > 0
    return boxes
