"""Unit-lattice geometry: logarithmic embedding, covering-radius bound, T0,
and unit reduction of field elements.

The covering radius of the log-unit lattice is bounded by half the sum of the
sup-norms of the basis vectors (exact in rank 1).  T0 = exp(rho_hat + slack)
with a fixed 2^-40 slack added to the certified upper endpoint: reduction of
an element whose log vector sits exactly on a half-lattice point (it happens:
a^2 = N(a) * u_fund has solutions, e.g. 4+sqrt(14)) could otherwise never be
certified by a strict endpoint comparison.  The slack only ever enlarges the
reported constants, keeping them valid upper bounds.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import isqrt

from .errors import CertificationFailed, DependentBasis, ZeroElement
from .exactnf import NFElement, NumberField
from .intervals import RealInterval, exp_interval, log_interval

CERT_SLACK = Fraction(1, 1 << 40)


@dataclass(frozen=True)
class UnitSystem:
    """Fundamental units (as supplied; validated for |N| = 1, independence)."""

    units: tuple[NFElement, ...]
    torsion_order: int = 2

    @property
    def rank(self) -> int:
        return len(self.units)


@dataclass(frozen=True)
class LogLattice:
    basis: tuple[tuple[RealInterval, ...], ...]
    covering_radius_upper: RealInterval
    t0: RealInterval


def log_embedding(u: NFElement, prec: int = 128) -> list[RealInterval]:
    """(log|sigma_1(u)|, ..., 2 log|tau_1(u)|, ...) in R^(r1+r2)."""
    if u.is_zero():
        raise ZeroElement("log embedding of zero")
    field = u.field
    r1, r2 = field.signature
    out: list[RealInterval] = []
    working = prec
    for attempt in range(6):
        try:
            out = []
            idx = 0
            for _ in range(r1):
                mag = u.embed(idx, working).abs_interval(working)
                out.append(log_interval(mag, working))
                idx += 1
            for _ in range(r2):
                mag_sq = u.embed(idx, working).abs_sq()
                out.append(log_interval(mag_sq, working))  # 2 log|tau| = log|tau|^2
                idx += 2
            return out
        except ValueError:
            working *= 2
    raise CertificationFailed("could not separate |sigma(u)| from zero")


def _max_abs(vals: list[RealInterval]) -> RealInterval:
    acc = vals[0].abs()
    for v in vals[1:]:
        acc = acc.max_with(v.abs())
    return acc


def covering_radius_upper(basis: list[list[RealInterval]], prec: int = 128) -> RealInterval:
    """(1/2) * sum of sup-norms of the basis vectors.

    Valid upper bound for the sup-norm covering radius of the lattice; exact
    for rank-1 lattices.
    """
    if not basis:
        return RealInterval.exact(0)
    _check_independent(basis)
    total = RealInterval.exact(0)
    for vec in basis:
        total = total + _max_abs(list(vec))
    return (total * Fraction(1, 2)).rounded(prec + 16)


def _check_independent(basis: list[list[RealInterval]]) -> None:
    r = len(basis)
    gram = [[sum((a * b for a, b in zip(u, v)), RealInterval.exact(0)) for v in basis] for u in basis]
    det = _interval_det(gram)
    if not det.certainly_positive():
        raise DependentBasis("Gram determinant not certifiably positive")


def _interval_det(mat: list[list[RealInterval]]) -> RealInterval:
    n = len(mat)
    m = [row[:] for row in mat]
    det = RealInterval.exact(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not m[r][col].straddles_zero():
                piv = r
                break
        if piv is None:
            return RealInterval(-1, 1)  # sign undecidable
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, n):
            if not (m[r][col].lo == 0 and m[r][col].hi == 0):
                f = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] = m[r][c] - f * m[col][c]
    return det


def log_lattice(field: NumberField, units: UnitSystem, prec: int = 128) -> LogLattice:
    """Validated log-unit lattice with covering-radius bound and T0."""
    r1, r2 = field.signature
    expected_rank = r1 + r2 - 1
    for u in units.units:
        if abs(u.norm()) != 1:
            raise ValueError(f"unit candidate {u} has |N| = {abs(u.norm())} != 1")
    basis = [log_embedding(u, prec) for u in units.units]
    tol = Fraction(1, 1 << (prec // 2))
    for vec in basis:
        weights = [1] * r1 + [1] * r2  # complex coordinates already carry the 2
        s = RealInterval.exact(0)
        for w, v in zip(weights, vec):
            s = s + v * w
        if not (abs(s.lo) <= tol and abs(s.hi) <= tol):
            raise ValueError("unit log vector is not in the trace-zero hyperplane")
    if len(basis) not in (0, expected_rank):
        # permit a sublattice only if still independent; covering bound stays valid
        pass
    rho = covering_radius_upper(basis, prec) if basis else RealInterval.exact(0)
    t0_iv = t0_from_rho(rho, prec)
    return LogLattice(
        basis=tuple(tuple(v) for v in basis),
        covering_radius_upper=rho,
        t0=t0_iv,
    )


def t0_from_rho(rho: RealInterval, prec: int = 128) -> RealInterval:
    rho_cert = RealInterval(rho.lo, rho.hi + CERT_SLACK)
    return exp_interval(rho_cert, prec)


def t0(field: NumberField, units: UnitSystem, prec: int = 128) -> RealInterval:
    """T0 = exp(rho_hat); the certification slack is folded into rho_hat."""
    return log_lattice(field, units, prec).t0


def unit_reduce(a: NFElement, units: UnitSystem, prec: int = 128) -> NFElement:
    """Multiply a by a unit so every |sigma(u*a)| <= T0 * |N(a)|^(1/d).

    The balanced log vector of a is rounded to the nearest lattice vector
    (coefficient rounding plus a +-1 neighborhood), and the result is
    certified against the covering-radius bound.
    """
    if a.is_zero():
        raise ZeroElement("unit_reduce of zero")
    field = a.field
    r = len(units.units)
    rho_limit_hi = None  # computed lazily below

    if r == 0:
        return a

    max_prec = prec * 8

    working = prec
    while working <= max_prec:
        basis = [log_embedding(u, working) for u in units.units]
        rho = covering_radius_upper(basis, working)
        rho_limit_hi = rho.hi + CERT_SLACK
        b = _balanced_log(a, working)
        coeffs = _solve_lattice_coeffs(basis, b)
        if coeffs is None:
            working *= 2
            continue
        center = [int((c.midpoint() + Fraction(1, 2)).__floor__()) for c in coeffs]
        for radius in (0, 1, 2):
            for offset in product(range(-radius, radius + 1), repeat=r):
                if radius and max(abs(o) for o in offset) != radius:
                    continue
                n = [c + o for c, o in zip(center, offset)]
                u = field.one()
                for ui, ni in zip(units.units, n):
                    u = u * ui ** (-ni)
                candidate = u * a
                w = _balanced_log(candidate, working)
                sup = _max_abs(w)
                if sup.hi <= rho_limit_hi:
                    return candidate
        working *= 2
    raise CertificationFailed(
        "unit reduction failed to certify the covering-radius bound; "
        "widen the search or check the supplied units"
    )


def _balanced_log(a: NFElement, prec: int) -> list[RealInterval]:
    """ell(a) - (log|N(a)|/d) * (1,..,1,2,..,2), one coordinate per place."""
    field = a.field
    r1, r2 = field.signature
    d = field.degree
    vec = log_embedding(a, prec)
    log_norm = log_interval(abs(a.norm()), prec)
    out = []
    for i, v in enumerate(vec):
        weight = Fraction(1 if i < r1 else 2, d)
        out.append((v - log_norm * weight).rounded(prec + 16))
    return out


def _solve_lattice_coeffs(
    basis: list[list[RealInterval]], target: list[RealInterval]
) -> list[RealInterval] | None:
    """Least-squares coefficients of target in span(basis), via the Gram system."""
    r = len(basis)
    gram = [[sum((x * y for x, y in zip(u, v)), RealInterval.exact(0)) for v in basis] for u in basis]
    rhs = [sum((x * y for x, y in zip(u, target)), RealInterval.exact(0)) for u in basis]
    m = [row[:] + [rhs[i]] for i, row in enumerate(gram)]
    for col in range(r):
        piv = next((k for k in range(col, r) if not m[k][col].straddles_zero()), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col].inverse()
        m[col] = [x * inv for x in m[col]]
        for k in range(r):
            if k != col:
                f = m[k][col]
                m[k] = [x - f * y for x, y in zip(m[k], m[col])]
    return [m[i][r] for i in range(r)]


# ---------------------------------------------------------------------------
# Pell fallback for real quadratic fields with O_K = Z[sqrt(D)]


def fundamental_unit_real_quadratic(field: NumberField) -> NFElement:
    """x + y*sqrt(D) from the continued fraction of sqrt(D).

    Applies to fields x^2 - D with square-free-free... with the power basis
    maximal (disc = 4D), which is exactly when this package accepts the field
    without an explicit integral basis.
    """
    if field.degree != 2 or field.signature != (2, 0):
        raise ValueError("Pell fallback needs a real quadratic field")
    if field.min_poly[1] != 0:
        raise ValueError("Pell fallback needs the form x^2 - D")
    D = -field.min_poly[0]
    a0 = isqrt(D)
    if a0 * a0 == D:
        raise ValueError("D is a perfect square")
    # continued fraction of sqrt(D); convergents until a period closes
    m, dd, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    while p * p - D * q * q not in (1, -1):
        m = dd * a - m
        dd = (D - m * m) // dd
        a = (a0 + m) // dd
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return field.element([p, q])
