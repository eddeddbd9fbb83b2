"""Floor functions, the expansion algorithm, and the finiteness criteria.

A type bundles a field, a finite place, a denominator set and a floor
function.  The expansion iterates alpha_{n+1} = 1/(alpha_n - s(alpha_n)) with
exact complete quotients, recording a certified ledger (heights, nu terms,
valuations) and detecting termination or exact periodicity.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np
import sympy

from .constants import c_alpha, c_MK, choose_M, epsilon_for
from .errors import (
    EvenPrime,
    FloorFailure,
    NotAdmissible,
    SearchExhausted,
    ZeroDenominator,
)
from .exactnf import NFElement, NumberField, denominator_ideal_norm, weil_height_pow_d
from .ideals import (
    PrimeIdealData,
    canonical_lift,
    primes_above,
    principal_generator,
    valuation,
    whole_ring,
)
from .intervals import RealInterval, sqrt_interval

HARD_CAP = 10_000


# ---------------------------------------------------------------------------
# floor functions


class BrowkinFloor:
    """Classical centered-digit floor on Q: digits in (-p/2, p/2), p odd."""

    def __init__(self, p: int):
        if p == 2:
            raise EvenPrime("the centered digit set needs an odd prime")
        if not sympy.isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def apply(self, eta: NFElement, prec: int = 128) -> NFElement:
        field = eta.field
        if field.degree != 1:
            raise FloorFailure("Browkin floor is defined over Q only")
        x = eta.coords[0]
        if x == 0:
            return field.zero()
        p = self.p
        num, den = x.numerator, x.denominator
        k = 0
        while den % p == 0:
            den //= p
            k += 1
        mod = p ** (k + 1)
        u = num * pow(den, -1, mod) % mod
        if 2 * u > mod:  # centered representative; mod is odd, no ties
            u -= mod
        return field.from_rational(Fraction(u, p ** k))

    def describe(self) -> str:
        return f"browkin(p={self.p})"


class RepresentativeFloor:
    """Floor built from a principal generator gamma of P and the
    short-representative search: s(eta) = gamma*(xi - tau/j) where
    xi = lift(eta)/gamma and (j, tau) is the first certified pair with
    every |sigma(j*xi - tau)| < epsilon, j = 1..M-1."""

    def __init__(
        self,
        prime: PrimeIdealData,
        gamma: NFElement,
        M: int,
        epsilon: RealInterval,
        prec: int = 128,
    ):
        if M < 2:
            raise ValueError("representative floor needs M >= 2")
        self.prime = prime
        self.gamma = gamma
        self.M = M
        self.epsilon = epsilon
        self.prec = prec
        field = prime.field
        d = field.degree
        self._basis = [
            field.from_integral_coords([int(i == j) for j in range(d)]) for i in range(d)
        ]
        self._embed_matrix = None  # float Babai data, built lazily

    def _babai_data(self):
        if self._embed_matrix is None:
            field = self.prime.field
            prec = self.prec
            boxes = field.embeddings(prec)
            rows = []
            for b in self._basis:
                vec: list[float] = []
                for i, box in enumerate(boxes):
                    e = b.embed(i, prec)
                    if box.im.is_exact() and box.im.lo == 0:
                        vec.append(float(e.re.midpoint()))
                    elif box.im.lo > 0:
                        vec.extend(
                            (float(e.re.midpoint()) * 2 ** 0.5, float(e.im.midpoint()) * 2 ** 0.5)
                        )
                rows.append(vec)
            mat = np.array(rows, dtype=float)
            self._embed_matrix = (mat, np.linalg.inv(mat))
        return self._embed_matrix

    def _float_vector(self, x: NFElement) -> "np.ndarray":
        field = self.prime.field
        boxes = field.embeddings(self.prec)
        vec: list[float] = []
        for i, box in enumerate(boxes):
            e = x.embed(i, self.prec)
            if box.im.is_exact() and box.im.lo == 0:
                vec.append(float(e.re.midpoint()))
            elif box.im.lo > 0:
                vec.extend(
                    (float(e.re.midpoint()) * 2 ** 0.5, float(e.im.midpoint()) * 2 ** 0.5)
                )
        return np.array(vec, dtype=float)

    def apply(self, eta: NFElement, prec: int | None = None) -> NFElement:
        prec = prec or self.prec
        field = self.prime.field
        if eta.is_zero() or valuation(eta, self.prime) >= 1:
            return field.zero()
        alpha_prime = canonical_lift(eta, self.prime, self.gamma)
        xi = alpha_prime / self.gamma
        eps_sq = self.epsilon.square()
        d = field.degree
        _, mat_inv = self._babai_data()
        best_margin = None
        for j in range(1, self.M):
            if j % self.prime.p == 0:
                continue  # j in P would break the coset condition
            jxi = xi * j
            coeffs = self._float_vector(jxi) @ mat_inv
            center = [round(c) for c in coeffs]
            for radius in (0, 1, 2):
                for offset in itertools.product(range(-radius, radius + 1), repeat=d):
                    if radius and max(abs(o) for o in offset) != radius:
                        continue
                    n = [c + o for c, o in zip(center, offset)]
                    tau = field.zero()
                    for ni, b in zip(n, self._basis):
                        if ni:
                            tau = tau + b * ni
                    u = jxi - tau
                    verdict, margin = self._certify(u, eps_sq, prec)
                    if best_margin is None or (margin is not None and margin < best_margin):
                        best_margin = margin
                    if verdict:
                        return self.gamma * (xi - tau / j)
        raise SearchExhausted(
            f"no (j, tau) pair certified below epsilon "
            f"(best squared margin {best_margin}); the prime may be too small "
            "for this M or the precision too low"
        )

    def _certify(self, u: NFElement, eps_sq: RealInterval, prec: int):
        """Certified check max_sigma |sigma(u)|^2 < epsilon^2; returns
        (accepted, float margin of the worst embedding)."""
        field = self.prime.field
        working = prec
        for _ in range(4):
            worst_hi = Fraction(0)
            undecided = False
            for i in range(field.degree):
                mag_sq = u.embed(i, working).abs_sq()
                if mag_sq.lo > eps_sq.hi:
                    return False, float(mag_sq.lo - eps_sq.hi)
                if not mag_sq.certainly_lt(eps_sq):
                    undecided = True
                worst_hi = max(worst_hi, mag_sq.hi)
            if not undecided:
                return True, float(eps_sq.lo - worst_hi)
            working *= 2
        return False, None

    def describe(self) -> str:
        return f"representative(p={self.prime.p}, M={self.M})"


class ShiftedFloor:
    """Negative-control wrapper: returns base floor + shift (breaks axiom i)."""

    def __init__(self, base, shift: int = 1):
        self.base = base
        self.shift = shift

    def apply(self, eta: NFElement, prec: int = 128) -> NFElement:
        s = self.base.apply(eta, prec)
        return s + s.field.from_rational(self.shift)

    def describe(self) -> str:
        return f"corrupted({self.base.describe()}, +{self.shift})"


# ---------------------------------------------------------------------------
# types


@dataclass
class TypeSpec:
    """A type: field, finite place, denominator set, floor function.

    Membership alpha - s(alpha) in P is read as v_P(alpha - s(alpha)) >= 1 in
    the local ring, which covers inputs of negative valuation.
    """

    field: NumberField
    prime: PrimeIdealData
    denom_set: tuple[NFElement, ...]
    floor: object
    warnings: list[str] = dc_field(default_factory=list)

    def floor_apply(self, eta: NFElement, prec: int = 128) -> NFElement:
        return self.floor.apply(eta, prec)


def make_browkin_type(field: NumberField, p: int) -> TypeSpec:
    if field.degree != 1:
        raise ValueError("Browkin floor types require K = Q")
    prime = primes_above(field, p)[0]
    return TypeSpec(
        field=field,
        prime=prime,
        denom_set=(field.one(),),
        floor=BrowkinFloor(p),
    )


def make_representative_type(
    field: NumberField,
    prime: PrimeIdealData,
    units,
    M: int | None = None,
    epsilon: RealInterval | None = None,
    gamma: NFElement | None = None,
    prec: int = 128,
) -> TypeSpec:
    """Assemble the explicit floor from the constants pipeline; warns when
    the prime norm is at or below the c(M,K) threshold."""
    from . import geometry

    warnings: list[str] = []
    if M is None:
        M = choose_M(field, prec)
    if epsilon is None:
        epsilon = epsilon_for(whole_ring(field), field, M, prec)
    if gamma is None:
        gamma = principal_generator(prime, units, prec=prec)
    lat = geometry.log_lattice(field, units, prec)
    threshold = c_MK(M, field.degree, epsilon, lat.t0, prec)
    if not RealInterval.exact(prime.norm).certainly_gt(threshold):
        warnings.append(
            f"N(P) = {prime.norm} is not above c(M,K) "
            f"(upper endpoint {float(threshold.hi):.6g}); finiteness is not guaranteed"
        )
    denoms = tuple(field.from_rational(t) for t in range(1, M + 1))
    for t in range(1, M + 1):
        if t % prime.p == 0 and valuation(field.from_rational(t), prime) > 0:
            warnings.append(f"denominator {t} lies in P")
            break
    spec = TypeSpec(
        field=field,
        prime=prime,
        denom_set=denoms,
        floor=RepresentativeFloor(prime, gamma, M, epsilon, prec),
        warnings=warnings,
    )
    return spec


# ---------------------------------------------------------------------------
# expansion


@dataclass
class StepRecord:
    index: int
    complete_quotient: NFElement
    partial_quotient: NFElement
    v_complete: int
    height_pow_d: RealInterval
    nu: RealInterval | None


@dataclass
class CFExpansion:
    spec: TypeSpec
    alpha: NFElement
    partial_quotients: list[NFElement]
    complete_quotients: list[NFElement]
    v_sequence: list[NFElement]  # V_{-1}, V_0, V_1, ...
    steps: list[StepRecord]
    status: tuple
    cap: int

    @property
    def is_finite(self) -> bool:
        return self.status[0] == "finite"

    def nu_max(self) -> Fraction | None:
        vals = [s.nu.hi for s in self.steps if s.nu is not None]
        return max(vals) if vals else None


def expand(
    alpha: NFElement,
    spec: TypeSpec,
    cap: int | None = None,
    prec: int = 128,
) -> CFExpansion:
    """Run the expansion with exact complete quotients.

    Stops Finite when alpha_n = s(alpha_n), Periodic on an exact repeat of a
    complete quotient, else Truncated at the cap (default: the explicit
    iteration bound from the height criterion, clipped to a hard cap).
    """
    field = spec.field
    prime = spec.prime
    a0 = spec.floor_apply(alpha, prec)
    if cap is None:
        cap = min(c_alpha(alpha, a0, prime, prec), HARD_CAP)
    cap = max(cap, 1)

    partial: list[NFElement] = []
    complete: list[NFElement] = []
    vseq: list[NFElement] = [field.one()]  # V_{-1}
    steps: list[StepRecord] = []
    seen: dict[NFElement, int] = {}
    status: tuple | None = None

    current = alpha
    seen[current] = 0
    n = 0
    while True:
        a_n = a0 if n == 0 else spec.floor_apply(current, prec)
        diff = current - a_n
        if not diff.is_zero() and valuation(diff, prime) < 1:
            raise FloorFailure(
                f"floor output at step {n} violates v_P(alpha - s(alpha)) >= 1"
            )
        partial.append(a_n)
        complete.append(current)
        if n == 0:
            vseq.append(a_n - alpha)  # V_0
        else:
            if a_n.is_zero() or valuation(a_n, prime) >= 0:
                raise FloorFailure(f"partial quotient at step {n} has v_P >= 0")
            vseq.append(a_n * vseq[-1] + vseq[-2])
        v_complete = valuation(current, prime) if not current.is_zero() else 0
        nu_iv = None
        if n >= 1 or (not a_n.is_zero() and valuation(a_n, prime) < 0):
            nu_iv = nu_term(a_n, spec, prec)
        steps.append(
            StepRecord(
                index=n,
                complete_quotient=current,
                partial_quotient=a_n,
                v_complete=v_complete,
                height_pow_d=weil_height_pow_d(current, prec),
                nu=nu_iv,
            )
        )
        if diff.is_zero():
            status = ("finite", n + 1)
            break
        if n + 1 >= cap:
            status = ("truncated", cap)
            break
        current = diff.inverse()
        if current in seen:
            status = ("periodic", seen[current], n + 1 - seen[current])
            break
        seen[current] = n + 1
        n += 1

    return CFExpansion(
        spec=spec,
        alpha=alpha,
        partial_quotients=partial,
        complete_quotients=complete,
        v_sequence=vseq,
        steps=steps,
        status=status,
        cap=cap,
    )


def evaluate_cf(quotients: list[NFElement]) -> NFElement:
    """Exact value of [a_0, a_1, ..., a_k] via the continuant recurrences.

    Raises ZeroDenominator when any tail [a_j, ..., a_k] evaluates to zero
    (an intermediate division by zero in the nested form)."""
    if not quotients:
        raise ValueError("empty quotient list")
    field = quotients[0].field
    # tail scan detects intermediate zero denominators exactly
    tail = quotients[-1]
    for q in reversed(quotients[:-1]):
        if tail.is_zero():
            raise ZeroDenominator("intermediate zero denominator in nested evaluation")
        tail = q + tail.inverse()
    a_prev, a_cur = field.one(), quotients[0]
    b_prev, b_cur = field.zero(), field.one()
    for q in quotients[1:]:
        a_prev, a_cur = a_cur, q * a_cur + a_prev
        b_prev, b_cur = b_cur, q * b_cur + b_prev
    if b_cur.is_zero():
        raise ZeroDenominator("continued fraction has zero denominator")
    return a_cur / b_cur


def nu_term(a: NFElement, spec: TypeSpec, prec: int = 128) -> RealInterval:
    """Certified value of
    |a|_{w0}^{-d_{w0}} * prod_sigma theta(sigma(a)) * prod_{w != w0} max(|a|_w, 1)^{d_w}.

    The two non-archimedean factors combine into the exact rational
    N(P)^{2 v_P(a)} * N(denominator ideal of a)."""
    if a.is_zero():
        raise NotAdmissible("nu term needs |a|_{w0} > 1")
    v = valuation(a, spec.prime)
    if v >= 0:
        raise NotAdmissible(f"v_P(a) = {v} >= 0")
    finite_part = Fraction(denominator_ideal_norm(a), spec.prime.norm ** (-2 * v))
    arch = RealInterval.exact(1)
    for i in range(spec.field.degree):
        mag_sq = a.embed(i, prec).abs_sq()
        t = (sqrt_interval(mag_sq, prec) + sqrt_interval(mag_sq + 4, prec)) * Fraction(1, 2)
        arch = (arch * t).rounded(prec + 16)
    return (arch * finite_part).rounded(prec)


# ---------------------------------------------------------------------------
# verification reports


@dataclass
class AxiomCheck:
    sample: NFElement
    coset_shift_ok: bool
    membership_ok: bool
    denominator_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.coset_shift_ok and self.membership_ok and self.denominator_ok


@dataclass
class FloorAxiomReport:
    checks: list[AxiomCheck]
    zero_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.zero_ok and all(c.all_ok for c in self.checks)

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.all_ok]


def verify_floor_axioms(spec: TypeSpec, samples: list[NFElement], prec: int = 128) -> FloorAxiomReport:
    """Check the floor-function axioms on each sample:
    (i) v_P(eta - s(eta)) >= 1; (ii) some t in the denominator set makes
    t*s(eta) integral outside P; (iii) s(0) = 0; (iv) same-coset inputs give
    the same output."""
    field = spec.field
    prime = spec.prime
    zero_ok = spec.floor_apply(field.zero(), prec).is_zero()
    checks = []
    shift_elements = [field.from_integral_coords(row) for row in prime.as_ideal.hnf]
    for idx, eta in enumerate(samples):
        s = spec.floor_apply(eta, prec)
        diff = eta - s
        membership_ok = diff.is_zero() or valuation(diff, prime) >= 1
        denominator_ok = _some_denominator_clears(s, spec)
        shift = shift_elements[idx % len(shift_elements)] * (1 + idx % 3)
        s_shifted = spec.floor_apply(eta + shift, prec)
        coset_ok = s_shifted == s
        checks.append(
            AxiomCheck(
                sample=eta,
                coset_shift_ok=coset_ok,
                membership_ok=membership_ok,
                denominator_ok=denominator_ok,
            )
        )
    return FloorAxiomReport(checks=checks, zero_ok=zero_ok)


def _some_denominator_clears(s: NFElement, spec: TypeSpec) -> bool:
    if s.is_zero():
        return True
    for t in spec.denom_set:
        x = t * s
        _, b = x.content_split()
        if b == 1:
            return True
        ok = True
        for p in sympy.factorint(b):
            for q in primes_above(spec.field, int(p)):
                if q == spec.prime:
                    continue
                if valuation(x, q) < 0:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


@dataclass
class TypeCriterionReport:
    nu_values: list[RealInterval]
    empirical_sup: Fraction | None
    flagged: list[int]  # indices with nu upper endpoint >= 1
    chain_ok: bool
    expansions: list[CFExpansion]

    @property
    def all_below_one(self) -> bool:
        return not self.flagged


def verify_type_criterion(
    spec: TypeSpec, samples: list[NFElement], prec: int = 128, cap: int | None = None
) -> TypeCriterionReport:
    """Empirical criterion run: nu of every floor output, plus the certified
    height chain H(alpha_{n+1})^d <= C * nubar^n along each expansion."""
    nu_values: list[RealInterval] = []
    flagged: list[int] = []
    expansions: list[CFExpansion] = []
    chain_ok = True
    for eta in samples:
        exp = expand(eta, spec, cap=cap, prec=prec)
        expansions.append(exp)
        for s in exp.steps:
            if s.nu is not None:
                nu_values.append(s.nu)
                if s.nu.hi >= 1:
                    flagged.append(len(nu_values) - 1)
        if not check_height_chain(exp, prec)[0]:
            chain_ok = False
    sup = max((v.hi for v in nu_values), default=None)
    return TypeCriterionReport(
        nu_values=nu_values,
        empirical_sup=sup,
        flagged=flagged,
        chain_ok=chain_ok,
        expansions=expansions,
    )


def check_height_chain(exp: CFExpansion, prec: int = 128) -> tuple[bool, list[Fraction]]:
    """Certified H(alpha_{n+1})^d <= C * nubar^n along the expansion ledger,
    with C the product of the per-embedding sqrt(|sigma(a_0-alpha)|^2+1) and
    the denominator norm of a_0 - alpha away from P."""
    if len(exp.steps) <= 1:
        return True, []
    field = exp.spec.field
    diff = exp.partial_quotients[0] - exp.alpha
    if diff.is_zero():
        return True, []
    c_iv = RealInterval.exact(1)
    for i in range(field.degree):
        mag_sq = diff.embed(i, prec).abs_sq()
        c_iv = (c_iv * sqrt_interval(mag_sq + 1, prec)).rounded(prec + 16)
    den_norm = denominator_ideal_norm(diff)
    v = valuation(diff, exp.spec.prime)
    if v < 0:
        den_norm = Fraction(den_norm, exp.spec.prime.norm ** (-v))
    c_iv = c_iv * den_norm
    nubar = exp.nu_max()
    if nubar is None:
        return True, []
    margins: list[Fraction] = []
    ok = True
    bound = c_iv.hi
    for step in exp.steps[1:]:
        # step.index = n+1; bound currently C * nubar^n
        if step.height_pow_d.hi > bound:
            ok = False
        margins.append(bound - step.height_pow_d.hi)
        bound = bound * nubar
    return ok, margins
