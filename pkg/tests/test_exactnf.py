from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from padiccf.errors import DiscMismatch, DivideByZero, NotIrreducible
from padiccf.exactnf import NumberField, denominator_ideal_norm, new_field, weil_height_pow_d

F = Fraction

coords14 = st.lists(
    st.fractions(min_value=F(-50), max_value=F(50), max_denominator=20),
    min_size=2, max_size=2,
)


def elements14(field):
    return coords14.map(field.element)


# -- construction -------------------------------------------------------------


def test_new_field_examples():
    k = new_field([-14, 0, 1])
    assert k.degree == 2 and k.signature == (2, 0) and k.field_disc == 56
    k3 = new_field([1, -2, -1, 1])
    assert k3.signature == (3, 0) and abs(k3.field_disc) == 49
    kg = new_field([1, 0, 1])
    assert kg.signature == (0, 1) and kg.field_disc == -4


def test_new_field_errors():
    with pytest.raises(NotIrreducible):
        new_field([-4, 0, 1])  # x^2 - 4
    with pytest.raises(NotIrreducible):
        new_field([0, 0, 2])  # not monic
    with pytest.raises(DiscMismatch):
        new_field([-14, 0, 1], field_disc=14)


def test_integral_basis_field():
    # x^2 - 5 has disc 20 = 5 * 2^2; the maximal order needs (1+sqrt5)/2
    k = new_field([-5, 0, 1], integral_basis=[[1, 0], [F(1, 2), F(1, 2)]], field_disc=5)
    assert k.field_disc == 5 and k.index == 2
    golden = k.from_integral_coords([0, 1])  # (1+sqrt5)/2
    assert golden.coords == (F(1, 2), F(1, 2))
    assert golden.is_integral()
    assert golden.norm() == -1  # it is a unit
    with pytest.raises(DiscMismatch):
        new_field([-5, 0, 1], integral_basis=[[1, 0], [F(1, 2), F(1, 2)]], field_disc=20)


# -- arithmetic ----------------------------------------------------------------


def test_arith_examples(k14):
    a = k14.generator()
    assert (a * a).coords == (F(14), F(0))
    x = k14.element([3, 1])
    inv = x.inverse()
    assert inv.coords == (F(-3, 5), F(1, 5))
    assert (x * inv) == k14.one()
    assert (x + k14.zero()) == x
    with pytest.raises(DivideByZero):
        k14.zero().inverse()


@settings(max_examples=100, deadline=None)
@given(coords14, coords14, coords14)
def test_field_axioms(c1, c2, c3):
    k = new_field([-14, 0, 1])
    x, y, z = k.element(c1), k.element(c2), k.element(c3)
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x + y == y + x and x * y == y * x
    if not x.is_zero():
        assert x * x.inverse() == k.one()


def test_norm_trace_examples(k14):
    assert k14.element([3, 1]).norm() == -5
    assert k14.element([15, 4]).norm() == 1
    assert k14.generator().trace() == 0


@settings(max_examples=100, deadline=None)
@given(coords14, coords14)
def test_norm_multiplicative_trace_linear(c1, c2):
    k = new_field([-14, 0, 1])
    x, y = k.element(c1), k.element(c2)
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x + y).trace() == x.trace() + y.trace()


def test_quartic_norm_against_resultant():
    k = new_field([-1, -1, 0, 0, 1])
    x = k.element([2, -1, 3, 1])
    t = sympy.Symbol("t")
    res = sympy.resultant(t ** 4 - t - 1, 2 - t + 3 * t ** 2 + t ** 3)
    assert x.norm() == F(int(res))


# -- embeddings ------------------------------------------------------------------


def test_embed_examples(k14):
    a = k14.generator()
    e = a.embed(1, 128)
    assert e.re.contains(F(37416573867739413, 10 ** 16)) or abs(
        float(e.re.midpoint()) - 3.7416573867739413
    ) < 1e-12
    one = k14.one().embed(0, 64)
    assert one.re.is_exact() and one.re.lo == 1 and one.im.lo == 0
    u = k14.element([15, 4]).embed(1, 128)
    assert abs(float(u.re.midpoint()) - 29.966629547095767) < 1e-10


def test_embedding_precision_nesting(k14):
    x = k14.element([F(7, 3), F(2, 5)])
    coarse = x.embed(0, 64)
    fine = x.embed(0, 256)
    assert coarse.re.lo <= fine.re.lo and fine.re.hi <= coarse.re.hi


def test_embed_rejects_low_precision(k14):
    with pytest.raises(ValueError):
        k14.generator().embed(0, 16)


def test_embedding_order_real_ascending_then_pairs():
    k = new_field([-1, -1, 0, 0, 1])  # signature (2,1)
    boxes = k.embeddings(96)
    assert boxes[0].re.hi < boxes[1].re.lo  # ascending real roots
    assert boxes[2].im.lo > 0  # positive imaginary first
    assert boxes[3].im.hi < 0


# -- heights ---------------------------------------------------------------------


def test_height_rational_exact(kq):
    h = weil_height_pow_d(kq.from_rational(F(3, 2)))
    assert h.is_exact() and h.lo == 3
    assert weil_height_pow_d(kq.zero()).lo == 1
    assert weil_height_pow_d(kq.one()).lo == 1


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=-10 ** 6, max_value=10 ** 6), st.integers(min_value=1, max_value=10 ** 6))
def test_height_rational_formula(a, b):
    kq = new_field([0, 1])
    h = weil_height_pow_d(kq.from_rational(F(a, b)))
    q = F(a, b)
    assert h.lo == max(abs(q.numerator), q.denominator)


def test_height_sqrt14(k14):
    h = weil_height_pow_d(k14.generator(), 128)
    assert h.contains(14)
    assert h.width() < F(1, 1 << 64)


def test_denominator_ideal_norm(k14):
    x = k14.element([F(1, 5), F(3, 5)])  # denominator (5) entirely? v at both primes
    n = denominator_ideal_norm(x)
    # (1+3*sqrt14)/5: numerator 1+3*sqrt14 has norm 1-126=-125; v at split primes
    assert n in (5, 25)
    assert denominator_ideal_norm(k14.element([2, 3])) == 1


@settings(max_examples=60, deadline=None)
@given(coords14.filter(lambda c: any(x != 0 for x in c)))
def test_product_formula(coords):
    """Finite absolute-value exponents recombine to 1/|N(x)| exactly, and the
    archimedean product encloses |N(x)|: both routes multiply to one."""
    from padiccf.ideals import primes_above, valuation

    k = new_field([-14, 0, 1])
    x = k.element(coords)
    nrm = x.norm()
    finite = F(1)
    support = set(sympy.factorint(abs(nrm.numerator)).keys()) | set(
        sympy.factorint(nrm.denominator).keys()
    )
    for p in support:
        for q in primes_above(k, int(p)):
            v = valuation(x, q)
            finite *= F(q.norm) ** (-v)
    assert finite == 1 / abs(nrm)
    arch = x.embed(0, 128).abs_interval(128) * x.embed(1, 128).abs_interval(128)
    assert arch.lo <= abs(nrm) <= arch.hi


def test_height_inversion_invariance(k14):
    """H(1/x) = H(x); exercises denominator norms at ramified primes."""
    x = k14.generator()  # sqrt14; 1/sqrt14 has denominators at 2 and 7, both ramified
    h_inv = weil_height_pow_d(x.inverse(), 128)
    assert h_inv.contains(14) and h_inv.width() < F(1, 1 << 64)


def test_height_root_of_unity_exact(gauss_field):
    i = gauss_field.generator()
    h = weil_height_pow_d(i, 96)
    assert h.is_exact() and h.lo == 1
