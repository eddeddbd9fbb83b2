"""Exact arithmetic in a number field K = Q(alpha).

Elements carry exact rational coordinates in the power basis 1, alpha, ...,
alpha^(d-1).  Complex embeddings are certified interval enclosures of the
roots of the minimal polynomial (real roots first, ascending; then each
conjugate pair with the positive-imaginary root first), cached per precision.
An explicit integral basis may be supplied for non-monogenic fields; ideals
and residue machinery then work in integral-basis coordinates internally.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from math import lcm

import sympy

from .errors import DiscMismatch, DivideByZero, NotIrreducible
from .intervals import ComplexInterval, RealInterval, eval_poly_interval
from .rootfinding import certified_roots, count_real_roots, poly_disc, poly_trim, poly_xgcd

DEFAULT_PREC = 128


def _as_fraction_rows(matrix) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in matrix)


def _mat_inverse(rows: tuple[tuple[Fraction, ...], ...]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(rows)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def _mat_det(rows) -> Fraction:
    n = len(rows)
    m = [list(r) for r in rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


class NumberField:
    """Immutable description of K = Q[x]/(min_poly)."""

    def __init__(self, min_poly: list[int], integral_basis=None, field_disc: int | None = None):
        coeffs = [int(c) for c in min_poly]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        d = len(coeffs) - 1
        if d < 1 or d > 8:
            raise NotIrreducible(f"degree {d} outside supported range 1..8")
        if coeffs[-1] != 1:
            raise NotIrreducible("minimal polynomial must be monic")
        x = sympy.Symbol("x")
        poly = sympy.Poly(list(reversed(coeffs)), x)
        if d > 1 and not poly.is_irreducible:
            raise NotIrreducible(f"{poly.as_expr()} is reducible over Q")

        self.min_poly: tuple[int, ...] = tuple(coeffs)
        self.degree = d
        disc_poly = poly_disc([Fraction(c) for c in coeffs])
        assert disc_poly.denominator == 1
        self._min_poly_disc = int(disc_poly)

        if integral_basis is None:
            self.integral_basis = tuple(
                tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)
            )
            self._basis_inv = self.integral_basis
            self.index = 1
            if field_disc is not None and field_disc != self._min_poly_disc:
                raise DiscMismatch(
                    f"disc(min_poly) = {self._min_poly_disc} != stated field_disc {field_disc}"
                )
            self.field_disc = self._min_poly_disc
        else:
            self.integral_basis = _as_fraction_rows(integral_basis)
            if len(self.integral_basis) != d or any(len(r) != d for r in self.integral_basis):
                raise DiscMismatch("integral_basis must be a d x d matrix")
            self._basis_inv = _mat_inverse(self.integral_basis)
            det = _mat_det(self.integral_basis)
            if det == 0:
                raise DiscMismatch("integral_basis is singular")
            index_fr = 1 / abs(det)
            if index_fr.denominator != 1:
                raise DiscMismatch("integral_basis determinant must be 1/index")
            self.index = int(index_fr)
            expected = self._min_poly_disc // (self.index ** 2)
            if expected * self.index ** 2 != self._min_poly_disc:
                raise DiscMismatch("disc(min_poly) != field_disc * index^2")
            if field_disc is not None and field_disc != expected:
                raise DiscMismatch(
                    f"disc(min_poly)/index^2 = {expected} != stated field_disc {field_disc}"
                )
            self.field_disc = expected

        r1 = count_real_roots([Fraction(c) for c in coeffs]) if d > 1 else 1
        self.signature = (r1, (d - r1) // 2)

        # power-basis reduction table: alpha^(d+k) as coordinate rows
        rows = []
        current = [Fraction(-c) for c in coeffs[:d]]  # alpha^d
        rows.append(tuple(current))
        for _ in range(d - 2):
            shifted = [Fraction(0)] + current[:-1]
            overflow = current[-1]
            current = [s + overflow * r for s, r in zip(shifted, rows[0])]
            rows.append(tuple(current))
        self._power_reduction = tuple(rows)

        self._embedding_cache: dict[int, list[ComplexInterval]] = {}
        self._cache_lock = threading.Lock()
        self._prime_cache: dict = {}

    # -- basic constructors ---------------------------------------------------

    def element(self, coords) -> "NFElement":
        cl = [Fraction(c) for c in coords]
        if len(cl) > self.degree:
            raise ValueError("too many coordinates")
        cl += [Fraction(0)] * (self.degree - len(cl))
        return NFElement(self, tuple(cl))

    def zero(self) -> "NFElement":
        return self.element([])

    def one(self) -> "NFElement":
        return self.element([1])

    def generator(self) -> "NFElement":
        if self.degree == 1:
            return self.element([Fraction(-self.min_poly[0], 1)])
        return self.element([0, 1])

    def from_rational(self, q) -> "NFElement":
        return self.element([Fraction(q)])

    # -- embeddings -----------------------------------------------------------

    def embeddings(self, prec: int = DEFAULT_PREC) -> list[ComplexInterval]:
        with self._cache_lock:
            cached = self._embedding_cache.get(prec)
        if cached is not None:
            return cached
        roots = certified_roots(list(self.min_poly), prec)
        with self._cache_lock:
            self._embedding_cache[prec] = roots
        return roots

    # -- coordinate conversions ------------------------------------------------

    def to_integral_coords(self, x: "NFElement") -> tuple[Fraction, ...]:
        """Coordinates of x over the integral basis."""
        if self.index == 1 and self.integral_basis[0][0] == 1:
            return x.coords
        inv = self._basis_inv
        return tuple(
            sum(x.coords[j] * inv[j][i] for j in range(self.degree))
            for i in range(self.degree)
        )

    def from_integral_coords(self, coords) -> "NFElement":
        cl = [Fraction(c) for c in coords]
        rows = self.integral_basis
        power = [
            sum(cl[i] * rows[i][j] for i in range(self.degree))
            for j in range(self.degree)
        ]
        return NFElement(self, tuple(power))

    def __repr__(self) -> str:
        return f"NumberField({list(self.min_poly)}, disc={self.field_disc}, sig={self.signature})"

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and self.min_poly == other.min_poly \
            and self.integral_basis == other.integral_basis

    def __hash__(self) -> int:
        return hash((self.min_poly, self.integral_basis))


def new_field(min_poly, integral_basis=None, field_disc=None) -> NumberField:
    return NumberField(min_poly, integral_basis=integral_basis, field_disc=field_disc)


class NFElement:
    """Element of a NumberField with exact rational power-basis coordinates."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: tuple[Fraction, ...]):
        self.field = field
        self.coords = coords

    # -- ring structure --------------------------------------------------------

    def __add__(self, other: "NFElement") -> "NFElement":
        other = self._coerce(other)
        return NFElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "NFElement") -> "NFElement":
        other = self._coerce(other)
        return NFElement(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "NFElement":
        return NFElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other) -> "NFElement":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return NFElement(self.field, tuple(a * q for a in self.coords))
        other = self._coerce(other)
        d = self.field.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if a == 0:
                continue
            for j, b in enumerate(other.coords):
                if b != 0:
                    prod[i + j] += a * b
        out = list(prod[:d])
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c != 0:
                red = self.field._power_reduction[k - d]
                for j in range(d):
                    out[j] += c * red[j]
        return NFElement(self.field, tuple(out))

    __rmul__ = __mul__

    def _coerce(self, other) -> "NFElement":
        if isinstance(other, NFElement):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        return self.field.from_rational(other)

    def inverse(self) -> "NFElement":
        if self.is_zero():
            raise DivideByZero("inverse of zero")
        d = self.field.degree
        if d == 1:
            return NFElement(self.field, (1 / self.coords[0],))
        f = [Fraction(c) for c in self.field.min_poly]
        g = poly_trim(list(self.coords))
        gcd_poly, s, _ = poly_xgcd(g, f)
        if len(gcd_poly) != 1 or gcd_poly[0] == 0:
            raise DivideByZero("element not invertible (reducible modulus?)")
        inv_coeffs = [c / gcd_poly[0] for c in s]
        return self.field.element(inv_coeffs)

    def __truediv__(self, other) -> "NFElement":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                raise DivideByZero("division by zero")
            return NFElement(self.field, tuple(a / q for a in self.coords))
        other = self._coerce(other)
        return self * other.inverse()

    def __pow__(self, n: int) -> "NFElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        return isinstance(other, NFElement) and self.coords == other.coords \
            and self.field == other.field

    def __hash__(self) -> int:
        return hash(self.coords)

    # -- invariants -------------------------------------------------------------

    def _mult_matrix(self) -> list[list[Fraction]]:
        """Rows: coordinates of x * alpha^i."""
        d = self.field.degree
        rows = []
        current = self
        alpha = self.field.generator()
        for _ in range(d):
            rows.append(list(current.coords))
            current = current * alpha
        return rows

    def norm(self) -> Fraction:
        if self.is_rational():
            return self.coords[0] ** self.field.degree
        return _mat_det(self._mult_matrix())

    def trace(self) -> Fraction:
        if self.is_rational():
            return self.coords[0] * self.field.degree
        rows = self._mult_matrix()
        return sum(rows[i][i] for i in range(self.field.degree))

    def denominator(self) -> int:
        """Smallest b > 0 with b*x integral (i.e. in O_K)."""
        ic = self.field.to_integral_coords(self)
        return lcm(*(c.denominator for c in ic)) if ic else 1

    def is_integral(self) -> bool:
        return self.denominator() == 1

    def content_split(self) -> tuple["NFElement", int]:
        """Return (y, b) with x = y/b, y integral, b minimal positive."""
        b = self.denominator()
        return self * b, b

    # -- embeddings ---------------------------------------------------------------

    def embed(self, sigma_index: int, prec: int = DEFAULT_PREC) -> ComplexInterval:
        if prec < 32:
            raise ValueError("precision must be at least 32 bits")
        root = self.field.embeddings(prec)[sigma_index]
        if self.is_rational():
            return ComplexInterval.exact(self.coords[0])
        return eval_poly_interval(list(self.coords), root, prec)

    def all_embeddings(self, prec: int = DEFAULT_PREC) -> list[ComplexInterval]:
        return [self.embed(i, prec) for i in range(self.field.degree)]

    def __repr__(self) -> str:
        return f"NFElement({[str(c) for c in self.coords]})"


# -------------------------------------------------------------------------------
# heights


def weil_height_pow_d(x: NFElement, prec: int = DEFAULT_PREC) -> RealInterval:
    """Certified enclosure of H(x)^d.

    Factored as N(denominator ideal) times the product over all d complex
    embeddings of max(1, |sigma(x)|); the finite part is exact, Kronecker's
    characterization (H = 1 iff 0 or root of unity) follows.
    """
    if x.is_zero():
        return RealInterval.exact(1)
    field = x.field
    if field.degree == 1:
        q = x.coords[0]
        return RealInterval.exact(max(abs(q.numerator), q.denominator))
    den_norm = denominator_ideal_norm(x)
    arch = RealInterval.exact(1)
    for i in range(field.degree):
        emb = x.embed(i, prec)
        arch = (arch * emb.abs_interval(prec).max_with(1)).rounded(prec + 16)
    return (arch * den_norm).rounded(prec + 16)


def denominator_ideal_norm(x: NFElement) -> int:
    """Exact norm of the denominator ideal of x.

    Equals b^d / N((y) + (b)) for x = y/b in lowest integral terms, which is
    prod over primes with v_P(x) < 0 of N(P)^(-v_P(x)).
    """
    if x.is_zero():
        return 1
    y, b = x.content_split()
    if b == 1:
        return 1
    from . import ideals  # local import: ideals builds on exactnf

    field = x.field
    gcd_ideal = ideals.principal_ideal(y).add(ideals.principal_ideal(field.from_rational(b)))
    n = Fraction(b) ** field.degree / gcd_ideal.norm()
    assert n.denominator == 1
    return int(n)
