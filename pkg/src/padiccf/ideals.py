"""Ideal arithmetic in O_K: HNF lattices, prime factorization, valuations,
residue fields, canonical residues and lifts.

Fractional ideals are integer row lattices over the integral basis (upper
triangular HNF, positive diagonal, entries above a pivot reduced into
[0, pivot)) together with a positive integer denominator.  All operations are
exact.  Primes above p are produced by Dedekind-Kummer factorization of the
minimal polynomial mod p, valid because primes dividing the index
[O_K : Z[alpha]] are rejected.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from math import gcd, lcm

import sympy

from .errors import (
    IndexDivisor,
    NotIntegralAtI,
    NotPrincipal,
    SearchExhausted,
    ZeroValuation,
)
from .exactnf import NFElement, NumberField

# ---------------------------------------------------------------------------
# integer HNF machinery (rows = lattice basis vectors)


def hnf_rows(rows: list[list[int]], d: int) -> tuple[tuple[int, ...], ...]:
    """Lower-triangular row HNF of a full-rank integer row lattice.

    Row i carries the pivot for coordinate i (H[i][j] = 0 for j > i, positive
    diagonal, entries below a pivot normalized into [0, pivot)).  Residue
    boxes therefore reduce the highest power-basis coordinate first.
    """
    work = [list(r) for r in rows if any(r)]
    pivots: list[list[int]] = [[] for _ in range(d)]
    for col in range(d - 1, -1, -1):
        while True:
            active = [r for r in work if r[col] != 0]
            if len(active) <= 1:
                break
            active.sort(key=lambda r: abs(r[col]))
            base = active[0]
            for r in active[1:]:
                q = r[col] // base[col]
                if q:
                    for j in range(d):
                        r[j] -= q * base[j]
        active = [r for r in work if r[col] != 0]
        if not active:
            raise ValueError("lattice not of full rank")
        piv = active[0]
        work = [r for r in work if r is not piv and any(r)]
        if piv[col] < 0:
            piv = [-x for x in piv]
        pivots[col] = piv
    # normalize entries below each pivot into [0, pivot); descending column
    # order so later (lower-column) normalizations cannot disturb earlier ones
    for i in range(d - 1, -1, -1):
        for k in range(i + 1, d):
            q = pivots[k][i] // pivots[i][i]
            if q:
                for j in range(i + 1):
                    pivots[k][j] -= q * pivots[i][j]
    return tuple(tuple(r) for r in pivots)


def _solve_coeffs(h: tuple[tuple[int, ...], ...], target: list[Fraction]) -> list[Fraction]:
    """Solve c * H = target for the coefficient vector c (H lower triangular)."""
    d = len(h)
    c = [Fraction(0)] * d
    r = list(target)
    for i in range(d - 1, -1, -1):
        c[i] = r[i] / h[i][i]
        if c[i] != 0:
            for j in range(i + 1):
                r[j] -= c[i] * h[i][j]
    return c


class FractionalIdeal:
    """hnf/denom lattice over the integral basis of a NumberField."""

    __slots__ = ("field", "hnf", "denom")

    def __init__(self, field: NumberField, hnf, denom: int = 1):
        if denom <= 0:
            raise ValueError("denominator must be positive")
        mat = tuple(tuple(int(x) for x in row) for row in hnf)
        content = 0
        for row in mat:
            for x in row:
                content = gcd(content, x)
        g = gcd(content, denom)
        if g > 1:
            mat = tuple(tuple(x // g for x in row) for row in mat)
            denom //= g
        self.field = field
        self.hnf = mat
        self.denom = denom

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def from_rows(field: NumberField, rows: list[list[Fraction]]) -> "FractionalIdeal":
        den = 1
        for row in rows:
            for x in row:
                den = lcm(den, Fraction(x).denominator)
        int_rows = [[int(Fraction(x) * den) for x in row] for row in rows]
        return FractionalIdeal(field, hnf_rows(int_rows, field.degree), den)

    # -- basic data -----------------------------------------------------------

    def norm(self) -> Fraction:
        det = 1
        for i in range(self.field.degree):
            det *= self.hnf[i][i]
        return Fraction(det, self.denom ** self.field.degree)

    def basis_elements(self) -> list[NFElement]:
        return [
            self.field.from_integral_coords([Fraction(x, self.denom) for x in row])
            for row in self.hnf
        ]

    def is_integral(self) -> bool:
        return self.denom == 1

    def contains(self, x: NFElement) -> bool:
        coords = [c * self.denom for c in self.field.to_integral_coords(x)]
        if any(c.denominator != 1 for c in coords):
            return False
        c = _solve_coeffs(self.hnf, coords)
        return all(ci.denominator == 1 for ci in c)

    # -- arithmetic -------------------------------------------------------------

    def mul(self, other: "FractionalIdeal") -> "FractionalIdeal":
        d = self.field.degree
        mine = [self.field.from_integral_coords(r) for r in self.hnf]
        theirs = [self.field.from_integral_coords(r) for r in other.hnf]
        rows = []
        for a in mine:
            for b in theirs:
                coords = self.field.to_integral_coords(a * b)
                assert all(c.denominator == 1 for c in coords)
                rows.append([int(c) for c in coords])
        return FractionalIdeal(self.field, hnf_rows(rows, d), self.denom * other.denom)

    __mul__ = mul

    def add(self, other: "FractionalIdeal") -> "FractionalIdeal":
        den = lcm(self.denom, other.denom)
        rows = [[x * (den // self.denom) for x in row] for row in self.hnf]
        rows += [[x * (den // other.denom) for x in row] for row in other.hnf]
        return FractionalIdeal(self.field, hnf_rows(rows, self.field.degree), den)

    def intersect(self, other: "FractionalIdeal") -> "FractionalIdeal":
        # dual(dual(A) + dual(B)) with exact rational duals
        d = self.field.degree
        den = lcm(self.denom, other.denom)
        a = [[Fraction(x * (den // self.denom)) for x in row] for row in self.hnf]
        b = [[Fraction(x * (den // other.denom)) for x in row] for row in other.hnf]

        def dual_rows(mat: list[list[Fraction]]) -> list[list[Fraction]]:
            from .exactnf import _mat_inverse

            inv = _mat_inverse(tuple(tuple(r) for r in mat))
            return [[inv[j][i] for j in range(d)] for i in range(d)]

        stacked = dual_rows(a) + dual_rows(b)
        scale = 1
        for row in stacked:
            for x in row:
                scale = lcm(scale, x.denominator)
        int_rows = [[int(x * scale) for x in row] for row in stacked]
        sum_hnf = hnf_rows(int_rows, d)
        sum_rows = [[Fraction(x, scale) for x in row] for row in sum_hnf]
        result = dual_rows(sum_rows)
        scale2 = 1
        for row in result:
            for x in row:
                scale2 = lcm(scale2, x.denominator)
        int_result = [[int(x * scale2) for x in row] for row in result]
        return FractionalIdeal(self.field, hnf_rows(int_result, d), den * scale2)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FractionalIdeal)
            and self.field == other.field
            and self.hnf == other.hnf
            and self.denom == other.denom
        )

    def __hash__(self) -> int:
        return hash((self.hnf, self.denom))

    def __repr__(self) -> str:
        return f"FractionalIdeal(norm={self.norm()}, denom={self.denom})"


def whole_ring(field: NumberField) -> FractionalIdeal:
    d = field.degree
    eye = [[int(i == j) for j in range(d)] for i in range(d)]
    return FractionalIdeal(field, eye, 1)


def principal_ideal(x: NFElement) -> FractionalIdeal:
    if x.is_zero():
        raise ValueError("zero ideal not supported")
    field = x.field
    basis = [field.from_integral_coords([int(i == j) for j in range(field.degree)])
             for i in range(field.degree)]
    rows = [list(field.to_integral_coords(x * b)) for b in basis]
    return FractionalIdeal.from_rows(field, rows)


def ideal_from_generators(field: NumberField, gens: list[NFElement]) -> FractionalIdeal:
    result = None
    for g in gens:
        if g.is_zero():
            continue
        ideal = principal_ideal(g)
        result = ideal if result is None else result.add(ideal)
    if result is None:
        raise ValueError("no nonzero generators")
    return result


# ---------------------------------------------------------------------------
# primes above p


@dataclass
class PrimeIdealData:
    """Prime P = (p, g(alpha)) with ramification e, residue degree f."""

    field: NumberField
    p: int
    gen2: NFElement
    e: int
    f: int
    factor_poly: tuple[int, ...]  # monic irreducible factor of min_poly mod p
    as_ideal: FractionalIdeal
    _power_cache: dict = dc_field(default_factory=dict, repr=False)
    _coprime_part: FractionalIdeal | None = dc_field(default=None, repr=False)

    @property
    def norm(self) -> int:
        return self.p ** self.f

    @property
    def local_degree(self) -> int:
        return self.e * self.f

    def power(self, k: int) -> FractionalIdeal:
        if k == 0:
            return whole_ring(self.field)
        if k == 1:
            return self.as_ideal
        cached = self._power_cache.get(k)
        if cached is None:
            cached = self.power(k - 1).mul(self.as_ideal)
            self._power_cache[k] = cached
        return cached

    def residue_field(self) -> "ResidueField":
        return ResidueField(self)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PrimeIdealData)
            and self.field == other.field
            and self.p == other.p
            and self.factor_poly == other.factor_poly
        )

    def __hash__(self) -> int:
        return hash((self.p, self.factor_poly))

    def __repr__(self) -> str:
        return f"PrimeIdealData(p={self.p}, e={self.e}, f={self.f})"


def primes_above(field: NumberField, p: int) -> list[PrimeIdealData]:
    """Dedekind-Kummer factorization of (p); requires p coprime to the index."""
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    cache_key = ("primes", p)
    cached = field._prime_cache.get(cache_key)
    if cached is not None:
        return cached
    if field.index % p == 0:
        raise IndexDivisor(f"prime {p} divides the index [O_K : Z[alpha]] = {field.index}")
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(field.min_poly)), x, modulus=p, symmetric=False)
    _, factors = poly.factor_list()
    entries = []
    for fac, mult in factors:
        coeffs = [int(c) % p for c in reversed(fac.all_coeffs())]
        entries.append((len(coeffs) - 1, tuple(coeffs), mult))
    entries.sort()
    out = []
    d = field.degree
    for deg, coeffs, mult in entries:
        gen2 = field.zero()
        alpha_pow = field.one()
        for c in coeffs:
            gen2 = gen2 + alpha_pow * c
            alpha_pow = alpha_pow * field.generator()
        basis = [field.from_integral_coords([int(i == j) for j in range(d)]) for i in range(d)]
        rows = [[p * int(i == j) for j in range(d)] for i in range(d)]
        for b in basis:
            coords = field.to_integral_coords(gen2 * b)
            assert all(c.denominator == 1 for c in coords)
            rows.append([int(c) for c in coords])
        ideal = FractionalIdeal(field, hnf_rows(rows, d), 1)
        out.append(
            PrimeIdealData(field=field, p=p, gen2=gen2, e=mult, f=deg,
                           factor_poly=coeffs, as_ideal=ideal)
        )
    assert sum(q.e * q.f for q in out) == d
    for q in out:
        assert q.as_ideal.norm() == q.norm
    field._prime_cache[cache_key] = out
    return out


def coprime_part_above_p(P: PrimeIdealData) -> FractionalIdeal:
    """The ideal prod_{Q | p, Q != P} Q^{e_Q} = (p) * P^{-e}."""
    if P._coprime_part is None:
        others = [q for q in primes_above(P.field, P.p) if q != P]
        result = whole_ring(P.field)
        for q in others:
            result = result.mul(q.power(q.e))
        P._coprime_part = result
    return P._coprime_part


# ---------------------------------------------------------------------------
# valuations


def valuation(x: NFElement, P: PrimeIdealData) -> int:
    """Exact v_P(x), extended to K by v(y/b) = v(y) - v(b)."""
    if x.is_zero():
        raise ZeroValuation("v_P(0) = +infinity")
    y, b = x.content_split()
    v = 0
    if b > 1:
        vb = 0
        while b % P.p == 0:
            b //= P.p
            vb += 1
        v -= P.e * vb
    k = 0
    while P.power(k + 1).contains(y):
        k += 1
    return v + k


def valuation_of_int(n: int, P: PrimeIdealData) -> int:
    if n == 0:
        raise ZeroValuation("v_P(0) = +infinity")
    v = 0
    n = abs(n)
    while n % P.p == 0:
        n //= P.p
        v += 1
    return v * P.e


# ---------------------------------------------------------------------------
# residue fields F_{p^f} = F_p[t]/(factor_poly)


class ResidueField:
    """Arithmetic in O_K/P as F_p[t]/(gbar), alpha mapsto t."""

    def __init__(self, P: PrimeIdealData):
        self.P = P
        self.p = P.p
        self.f = P.f
        self.modulus = list(P.factor_poly)

    def _poly_mod(self, coeffs: list[int]) -> tuple[int, ...]:
        p = self.p
        coeffs = [c % p for c in coeffs]
        deg_mod = self.f
        while len(coeffs) > deg_mod:
            lead = coeffs.pop()
            if lead:
                for i in range(deg_mod):
                    coeffs[len(coeffs) - deg_mod + i] = (
                        coeffs[len(coeffs) - deg_mod + i] - lead * self.modulus[i]
                    ) % p
        coeffs += [0] * (deg_mod - len(coeffs))
        return tuple(c % p for c in coeffs)

    def reduce(self, x: NFElement) -> tuple[int, ...]:
        """Image of x in O_K/P; requires v_P(x) >= 0."""
        a, b = make_coprime_denominator(x, self.P)
        ra = self._reduce_integral(a)
        rb = self._reduce_integral(b)
        return self.mul(ra, self.inv(rb))

    def _reduce_integral(self, x: NFElement) -> tuple[int, ...]:
        den = 1
        for c in x.coords:
            den = lcm(den, c.denominator)
        if den % self.p == 0:
            raise NotIntegralAtI("power-basis denominator not invertible mod p")
        dinv = pow(den, -1, self.p)
        coeffs = [int(c * den) * dinv % self.p for c in x.coords]
        return self._poly_mod(coeffs)

    def zero(self) -> tuple[int, ...]:
        return tuple([0] * self.f)

    def one(self) -> tuple[int, ...]:
        return tuple([1 % self.p] + [0] * (self.f - 1))

    def add(self, a, b) -> tuple[int, ...]:
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b) -> tuple[int, ...]:
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def mul(self, a, b) -> tuple[int, ...]:
        out = [0] * (2 * self.f - 1) if self.f > 1 else [0]
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % self.p
        return self._poly_mod(out)

    def pow(self, a, n: int) -> tuple[int, ...]:
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = self.one()
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, a) -> tuple[int, ...]:
        if all(c == 0 for c in a):
            raise ZeroDivisionError("inverse of zero in residue field")
        if self.f == 1:
            return (pow(a[0], -1, self.p),)
        # extended Euclid in F_p[t]
        p = self.p
        r0 = list(self.modulus) + [1]
        r1 = list(a)
        s0, s1 = [0], [1]

        def deg(poly):
            d = len(poly) - 1
            while d > 0 and poly[d] % p == 0:
                d -= 1
            return d if any(c % p for c in poly) else -1

        while deg(r1) >= 0:
            d0, d1 = deg(r0), deg(r1)
            if d0 < d1:
                r0, r1, s0, s1 = r1, r0, s1, s0
                continue
            inv_lead = pow(r1[d1], -1, p)
            coef = r0[d0] * inv_lead % p
            shift = d0 - d1
            for i in range(d1 + 1):
                r0[shift + i] = (r0[shift + i] - coef * r1[i]) % p
            s1_shifted = [0] * shift + list(s1)
            ln = max(len(s0), len(s1_shifted))
            s0 = [(s0[i] if i < len(s0) else 0) - coef * (s1_shifted[i] if i < len(s1_shifted) else 0)
                  for i in range(ln)]
            s0 = [c % p for c in s0]
            if deg(r0) < deg(r1):
                r0, r1, s0, s1 = r1, r0, s1, s0
        d0 = deg(r0)
        if d0 != 0:
            raise ZeroDivisionError("element not invertible in residue field")
        c = pow(r0[0], -1, p)
        return self._poly_mod([x * c % p for x in s0])

    def element_from(self, t: tuple[int, ...]) -> NFElement:
        """Integral lift with power-basis coordinates in [0, p)."""
        return self.P.field.element([Fraction(c) for c in t] + [Fraction(0)] * (self.P.field.degree - len(t)))


# ---------------------------------------------------------------------------
# canonical residues and lifts


def canonical_residue(x: NFElement, ideal: FractionalIdeal) -> NFElement:
    """Unique coset representative in the HNF box of the ideal.

    The coefficient of basis row i ends in [-h_ii/2, h_ii/2); depends only on
    the coset of x, and is idempotent.  x must be integral at the primes of
    the ideal; a denominator coprime to N(ideal) is folded in by modular
    inversion, anything else raises NotIntegralAtI.
    """
    field = x.field
    if not ideal.is_integral():
        raise NotIntegralAtI("canonical residue needs an integral ideal")
    y, b = x.content_split()
    if b > 1:
        m = int(ideal.norm())
        if gcd(b, m) != 1:
            raise NotIntegralAtI(f"denominator {b} shares a factor with N(ideal) = {m}")
        binv = pow(b, -1, m)
        y = y * binv
    coords = [Fraction(c) for c in field.to_integral_coords(y)]
    h = ideal.hnf
    d = field.degree
    for i in range(d - 1, -1, -1):
        q = (coords[i] / h[i][i] + Fraction(1, 2)).__floor__()
        if q:
            for j in range(i + 1):
                coords[j] -= q * h[i][j]
    return field.from_integral_coords(coords)


def make_coprime_denominator(x: NFElement, P: PrimeIdealData) -> tuple[NFElement, NFElement]:
    """Write x = a/b with a, b in O_K and v_P(b) = 0.

    Requires v_P(x) >= 0.  The p-part of the integer denominator is traded
    for powers of an element of prod_{Q|p, Q!=P} Q^{e_Q} that avoids P.
    """
    y, b0 = x.content_split()
    m0 = 0
    b1 = b0
    while b1 % P.p == 0:
        b1 //= P.p
        m0 += 1
    field = x.field
    if m0 == 0:
        return y, field.from_rational(b0)
    beta = _beta_avoiding_p(P)
    a = (y * beta ** m0) / (P.p ** m0)
    if not a.is_integral():
        raise NotIntegralAtI("v_P(x) < 0: cannot clear the p-part of the denominator")
    b = field.from_rational(b1) * beta ** m0
    return a, b


def _beta_avoiding_p(P: PrimeIdealData) -> NFElement:
    """First HNF basis vector of prod_{Q|p, Q!=P} Q^{e_Q} outside P."""
    key = ("beta",)
    if key in P._power_cache:
        return P._power_cache[key]
    ideal = coprime_part_above_p(P)
    for row in ideal.hnf:
        cand = P.field.from_integral_coords(row)
        if not P.as_ideal.contains(cand):
            P._power_cache[key] = cand
            return cand
    raise AssertionError("coprime part contained in P: impossible for distinct primes")


def invert_mod_prime_power(b: NFElement, P: PrimeIdealData, k: int) -> NFElement:
    """x in O_K with b*x = 1 mod P^k, via residue-field inverse + Hensel."""
    rf = P.residue_field()
    x = rf.element_from(rf.inv(rf.reduce(b)))
    reached = 1
    one = P.field.one()
    while reached < k:
        reached = min(2 * reached, k)
        ideal = P.power(reached)
        x = canonical_residue(x * (one * 2 - b * x), ideal)
    return x


def canonical_lift(eta: NFElement, P: PrimeIdealData, gamma: NFElement | None) -> NFElement:
    """Representative alpha' of eta mod P*O_P that is integral outside P.

    Postconditions: v_P(eta - alpha') >= 1; v_Q(alpha') >= 0 for all finite
    Q != P; the output depends only on the coset of eta.  gamma must generate
    P (supply it from principal_generator or config for class number 1).
    """
    if eta.is_zero():
        return eta.field.zero()
    if gamma is None:
        raise NotPrincipal("canonical_lift needs a generator of P")
    v = valuation(eta, P)
    if v >= 1:
        return eta.field.zero()
    k = max(0, -v)
    mu = eta * gamma ** k if k else eta
    a, b = make_coprime_denominator(mu, P)
    binv = invert_mod_prime_power(b, P, k + 1)
    c = canonical_residue(a * binv, P.power(k + 1))
    if k == 0:
        return c
    return c * (gamma.inverse() ** k)


# ---------------------------------------------------------------------------
# principal generators


def _lll_reduce_rows(rows: list[list[int]], embed_rows: list[list[float]]) -> list[list[int]]:
    """Textbook float LLL on the lattice spanned by rows; exact integer ops
    on the coordinate rows, float Gram-Schmidt on the embedding image."""
    import numpy as np

    basis = np.array(embed_rows, dtype=float)
    coords = [list(r) for r in rows]
    n = len(coords)
    if n <= 1:
        return coords

    def gso(b):
        bstar = b.copy()
        mu = np.zeros((n, n))
        for i in range(1, n):
            for j in range(i):
                denom = float(bstar[j] @ bstar[j])
                mu[i, j] = float(b[i] @ bstar[j]) / denom if denom else 0.0
                bstar[i] = bstar[i] - mu[i, j] * bstar[j]
        return bstar, mu

    delta = 0.99
    k = 1
    guard = 0
    while k < n and guard < 10000:
        guard += 1
        bstar, mu = gso(basis)
        for j in range(k - 1, -1, -1):
            q = round(mu[k, j])
            if q:
                basis[k] = basis[k] - q * basis[j]
                coords[k] = [a - q * b for a, b in zip(coords[k], coords[j])]
                bstar, mu = gso(basis)
        lhs = float(bstar[k] @ bstar[k])
        rhs = (delta - mu[k, k - 1] ** 2) * float(bstar[k - 1] @ bstar[k - 1])
        if lhs >= rhs:
            k += 1
        else:
            basis[[k - 1, k]] = basis[[k, k - 1]]
            coords[k - 1], coords[k] = coords[k], coords[k - 1]
            k = max(k - 1, 1)
    return coords


def principal_generator(
    P: PrimeIdealData,
    units=None,
    search_bound: int = 6,
    prec: int = 128,
) -> NFElement:
    """Search a generator gamma of a principal prime P.

    Short vectors of the ideal lattice are enumerated after LLL reduction of
    its embedded basis; the first element (radius-then-lex order) with
    |N| = N(P) generates.  The result is unit-reduced so that every
    |sigma(gamma)| <= T0 * |N(gamma)|^(1/d), then sign-normalized.
    """
    field = P.field
    d = field.degree
    key = ("generator", id(units), search_bound)
    if key in P._power_cache:
        return P._power_cache[key]
    rows = [list(r) for r in P.as_ideal.hnf]
    embeddings = field.embeddings(prec)
    embed_rows = []
    for row in rows:
        el = field.from_integral_coords(row)
        vec: list[float] = []
        for i, box in enumerate(embeddings):
            e = el.embed(i, prec)
            re = float(e.re.midpoint())
            im = float(e.im.midpoint())
            if box.im.is_exact() and box.im.lo == 0:
                vec.append(re)
            elif box.im.lo > 0:  # one linear slot per conjugate pair
                vec.extend((re * 2 ** 0.5, im * 2 ** 0.5))
        embed_rows.append(vec)
    reduced = _lll_reduce_rows(rows, embed_rows)

    target = Fraction(P.norm)
    for radius in range(1, search_bound + 1):
        for combo in product(range(-radius, radius + 1), repeat=d):
            if max(abs(c) for c in combo) != radius:
                continue
            coords = [sum(c * reduced[i][j] for i, c in enumerate(combo)) for j in range(d)]
            if not any(coords):
                continue
            g = field.from_integral_coords(coords)
            if abs(g.norm()) == target:
                if units is not None:
                    from . import geometry

                    g = geometry.unit_reduce(g, units, prec=prec)
                for c in g.coords:
                    if c != 0:
                        if c < 0:
                            g = -g
                        break
                P._power_cache[key] = g
                return g
    raise SearchExhausted(
        f"no generator of norm {P.norm} within coefficient radius {search_bound}; "
        "raise the bound or supply a generator in the field file"
    )


def degree_one_primes_above(
    field: NumberField, lower_bound: int, count: int
) -> list[PrimeIdealData]:
    """Scan rational primes p > lower_bound for degree-one unramified primes
    (min_poly has a simple root mod p); one prime per rational p."""
    out: list[PrimeIdealData] = []
    p = lower_bound
    while len(out) < count:
        p = int(sympy.nextprime(p))
        if field.index % p == 0 or field.field_disc % p == 0:
            continue
        for q in primes_above(field, p):
            if q.e == 1 and q.f == 1:
                out.append(q)
                break
    return out


# ---------------------------------------------------------------------------
# S-integers


@dataclass(frozen=True)
class SIntegerRing:
    """Ring O_S: elements of K integral outside the finite places in S."""

    field: NumberField
    S: tuple[PrimeIdealData, ...]

    def contains(self, x: NFElement) -> bool:
        if x.is_zero():
            return True
        _, b = x.content_split()
        if b == 1:
            return True
        s_primes = {(q.p, q.factor_poly) for q in self.S}
        for p in sympy.factorint(b):
            for q in primes_above(self.field, int(p)):
                if (q.p, q.factor_poly) not in s_primes and valuation(x, q) < 0:
                    return False
        return True
