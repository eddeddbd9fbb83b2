"""Explicit constants controlling the finiteness machinery.

Everything is certified: rational inputs give exact values where possible
(theta of a rational with square x^2+4, c(K) for totally real fields), and
interval enclosures otherwise.  Downstream consumers use upper endpoints, so
reported thresholds are conservative.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import EpsilonNotLessThanOne
from .exactnf import NFElement, NumberField, denominator_ideal_norm
from .ideals import FractionalIdeal, PrimeIdealData, valuation, whole_ring
from .intervals import RealInterval, nth_root_interval, pi_interval, sqrt_interval


def theta(x, prec: int = 128) -> RealInterval:
    """(|x| + sqrt(x^2 + 4)) / 2; satisfies |x| <= theta(x) <= |x| + 1."""
    xi = x if isinstance(x, RealInterval) else RealInterval.exact(Fraction(x))
    ax = xi.abs()
    return (ax + sqrt_interval(ax.square() + 4, prec)) * Fraction(1, 2)


def _factorial_over_dd(d: int) -> Fraction:
    return Fraction(math.factorial(d), d ** d)


def minkowski_bound(field: NumberField, prec: int = 128) -> RealInterval:
    """(d!/d^d) (4/pi)^r2 sqrt|disc|: every ideal class has an integral ideal
    of norm below this."""
    d = field.degree
    _, r2 = field.signature
    base = sqrt_interval(abs(field.field_disc), prec) * _factorial_over_dd(d)
    if r2:
        base = base * (RealInterval.exact(4) / pi_interval(prec)).pow_int(r2)
    return base.rounded(prec)


def c_ideal(ideal: FractionalIdeal, field: NumberField, prec: int = 128) -> RealInterval:
    """max((2/pi)^r2 sqrt|disc| N(ideal), 1)."""
    if not ideal.is_integral():
        raise ValueError("c_ideal needs an integral ideal")
    _, r2 = field.signature
    val = sqrt_interval(abs(field.field_disc), prec) * ideal.norm()
    if r2:
        val = val * (RealInterval.exact(2) / pi_interval(prec)).pow_int(r2)
    return val.max_with(1).rounded(prec)


def c_field(field: NumberField, prec: int = 128) -> RealInterval:
    """max(|disc| (8/pi^2)^r2 d!/d^d, 1); exact for totally real fields."""
    d = field.degree
    _, r2 = field.signature
    if r2 == 0:
        exact = max(abs(field.field_disc) * _factorial_over_dd(d), Fraction(1))
        return RealInterval.exact(exact)
    val = RealInterval.exact(abs(field.field_disc) * _factorial_over_dd(d))
    val = val * (RealInterval.exact(8) / pi_interval(prec).square()).pow_int(r2)
    return val.max_with(1).rounded(prec)


def choose_M(field: NumberField, prec: int = 128) -> int:
    """Smallest integer >= c(K); equality with c(K) is allowed."""
    working = prec
    for _ in range(8):
        c = c_field(field, working)
        lo_ceil = -((-c.lo.numerator) // c.lo.denominator)
        hi_ceil = -((-c.hi.numerator) // c.hi.denominator)
        if lo_ceil == hi_ceil:
            return int(lo_ceil)
        working *= 2
    raise ArithmeticError("choose_M: ceiling undecidable; c(K) suspiciously close to an integer")


def epsilon_for(
    ideal: FractionalIdeal, field: NumberField, M: int, prec: int = 128
) -> RealInterval:
    """epsilon with volume equality M = Vol(D)/Vol(U_eps):
    epsilon = (sqrt|disc| N(ideal) (2/pi)^r2 / M)^(1/d).  Raises if not < 1."""
    d = field.degree
    _, r2 = field.signature
    working = prec
    for _ in range(8):
        val = sqrt_interval(abs(field.field_disc), working) * ideal.norm() / M
        if r2:
            val = val * (RealInterval.exact(2) / pi_interval(working)).pow_int(r2)
        eps = nth_root_interval(val, d, working).rounded(working)
        if eps.hi < 1:
            return eps
        if eps.lo >= 1:
            raise EpsilonNotLessThanOne(
                f"M = {M} yields epsilon >= 1 (needs M > c(ideal,K) = {float(c_ideal(ideal, field).hi):.3f})"
            )
        working *= 2
    raise EpsilonNotLessThanOne(f"M = {M}: epsilon not certifiably below 1")


def c_MK(M: int, d: int, epsilon: RealInterval, t0: RealInterval, prec: int = 128) -> RealInterval:
    """The prime-norm threshold
    (M / (eps T0 ((( (1-eps^d)/(eps^d T0^d) + 1 ))^(1/d) - 1)))^d;
    always strictly larger than M^d."""
    eps_d = epsilon.pow_int(d)
    inner = (RealInterval.exact(1) - eps_d) / (eps_d * t0.pow_int(d)) + 1
    root = nth_root_interval(inner, d, prec)
    denom = epsilon * t0 * (root - 1)
    if not denom.certainly_positive():
        raise ArithmeticError("c(M,K) denominator not certifiably positive; raise precision")
    return ((RealInterval.exact(M) / denom).pow_int(d)).rounded(prec)


def epsilon_prime(
    q: int, M: int, d: int, epsilon: RealInterval, t0: RealInterval, prec: int = 128
) -> RealInterval:
    """eps^d (1 + T0^d ((1 + M/(eps T0 q^(1/d)))^d - 1)); decreasing in q,
    below 1 exactly when q clears the c(M,K) threshold."""
    if q < 2:
        raise ValueError("q must be at least 2")
    qroot = nth_root_interval(Fraction(q), d, prec)
    inner = (RealInterval.exact(1) + RealInterval.exact(M) / (epsilon * t0 * qroot)).pow_int(d) - 1
    return (epsilon.pow_int(d) * (RealInterval.exact(1) + t0.pow_int(d) * inner)).rounded(prec)


def c_alpha(alpha: NFElement, a0: NFElement, P: PrimeIdealData, prec: int = 128) -> int:
    """Iteration cap d*(2^(d+1)*ceil(C)+1)^(d+1), where C is the product of
    the per-embedding sqrt(|sigma(a0-alpha)|^2+1) and of sup(|a0-alpha|_w,1)
    over the finite places away from P."""
    field = alpha.field
    d = field.degree
    diff = a0 - alpha
    if diff.is_zero():
        c_hi = Fraction(1)
    else:
        c_inf = RealInterval.exact(1)
        for i in range(d):
            mag_sq = diff.embed(i, prec).abs_sq()
            c_inf = (c_inf * sqrt_interval(mag_sq + 1, prec)).rounded(prec + 16)
        den_norm = denominator_ideal_norm(diff)
        v = valuation(diff, P)
        if v < 0:
            den_norm = Fraction(den_norm, P.norm ** (-v))
            assert den_norm.denominator == 1
        c_hi = (c_inf * den_norm).hi
    c_ceil = -((-c_hi.numerator) // c_hi.denominator)
    return d * (2 ** (d + 1) * int(c_ceil) + 1) ** (d + 1)


# ---------------------------------------------------------------------------
# assembled report


@dataclass
class ConstantsReport:
    field_label: str
    abs_disc: int
    signature: tuple[int, int]
    minkowski_bound: RealInterval
    c_field: RealInterval
    M: int
    epsilon: RealInterval
    rho_upper: RealInterval
    t0: RealInterval
    c_MK: RealInterval
    epsilon_prime_at: list[tuple[int, RealInterval]] = dc_field(default_factory=list)
    warnings: list[str] = dc_field(default_factory=list)


def compute_constants(
    field: NumberField,
    units,
    label: str = "",
    M_override: int | None = None,
    epsilon_override: Fraction | None = None,
    epsilon_prime_samples: list[int] | None = None,
    prec: int = 128,
) -> ConstantsReport:
    """Full constants pipeline for the trivial-class representative O_K."""
    from . import geometry

    warnings: list[str] = []
    d = field.degree
    lat = geometry.log_lattice(field, units, prec)
    cf = c_field(field, prec)
    if M_override is None:
        M = choose_M(field, prec)
    else:
        M = M_override
        if RealInterval.exact(M).certainly_lt(cf):
            warnings.append(f"M = {M} is below c(K) (upper endpoint {float(cf.hi):.6g})")
    ok = whole_ring(field)
    if epsilon_override is not None:
        eps = RealInterval.exact(Fraction(epsilon_override))
        if not eps.certainly_lt(RealInterval.exact(1)) or not eps.certainly_positive():
            raise EpsilonNotLessThanOne(f"supplied epsilon {epsilon_override} outside (0,1)")
    else:
        eps = epsilon_for(ok, field, M, prec)
    cmk = c_MK(M, d, eps, lat.t0, prec)
    if not cmk.certainly_gt(RealInterval.exact(Fraction(M) ** d)):
        warnings.append("c(M,K) not certifiably above M^d; raise precision")
    report = ConstantsReport(
        field_label=label,
        abs_disc=abs(field.field_disc),
        signature=field.signature,
        minkowski_bound=minkowski_bound(field, prec),
        c_field=cf,
        M=M,
        epsilon=eps,
        rho_upper=lat.covering_radius_upper,
        t0=lat.t0,
        c_MK=cmk,
        warnings=warnings,
    )
    for q in epsilon_prime_samples or []:
        report.epsilon_prime_at.append((q, epsilon_prime(q, M, d, eps, lat.t0, prec)))
    return report
