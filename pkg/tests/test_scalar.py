from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqalg import I, Scalar
from sqalg.scalar import ONE, ZERO, squarefree_split

from strategies import rationals

small = st.integers(0, 60)


@st.composite
def scalars(draw):
    s = ZERO
    for _ in range(draw(st.integers(0, 3))):
        m = Scalar.coerce(draw(rationals))
        if draw(st.booleans()):
            m = m * I
        r = draw(st.sampled_from([1, 2, 3, 6]))
        if r > 1:
            m = m * Scalar.sqrt(r)
        if draw(st.booleans()):
            m = m * Scalar.param(draw(st.sampled_from(["t", "U"])))
        if draw(st.booleans()):
            m = m * Scalar.delta(draw(st.sampled_from(["k", "l", 1])), draw(st.sampled_from(["q", 2])))
        s = s + m
    return s


def test_coerce_and_zero():
    assert Scalar.coerce(0) == ZERO and not ZERO
    assert Scalar.coerce(Fraction(3, 4)) * 4 == Scalar.coerce(3)
    with pytest.raises(TypeError):
        Scalar.coerce(0.5)


def test_imaginary_unit():
    assert I * I == Scalar.coerce(-1)
    assert (I * I * I).conj() == I


@given(small)
def test_squarefree_split(n):
    s, r = squarefree_split(n + 1)
    assert s * s * r == n + 1
    assert all(r % (p * p) for p in range(2, r + 1))


def test_sqrt_products_reduce():
    assert Scalar.sqrt(2) * Scalar.sqrt(2) == Scalar.coerce(2)
    assert Scalar.sqrt(6) * Scalar.sqrt(3) == Scalar.sqrt(2) * 3
    assert Scalar.sqrt(8) == Scalar.sqrt(2) * 2
    assert Scalar.sqrt(Fraction(1, 2)) == Scalar.sqrt(2) / 2


def test_inverse_of_sqrt():
    assert Scalar.sqrt(3).inverse() * Scalar.sqrt(3) == ONE
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_deltas():
    assert Scalar.delta(1, 1) == ONE
    assert Scalar.delta(1, 2) == ZERO
    assert Scalar.delta("k", "l") == Scalar.delta("l", "k")
    # a class with two different integers vanishes
    assert Scalar.delta("k", 1) * Scalar.delta("k", 2) == ZERO
    # transitivity: d(k,l) d(l,m) = d(k,l) d(k,m)
    assert Scalar.delta("k", "l") * Scalar.delta("l", "m") == Scalar.delta("k", "l") * Scalar.delta("k", "m")
    assert Scalar.delta("k", "l") ** 2 == Scalar.delta("k", "l")


def test_delta_substitutes_param_indexes():
    e = Scalar.param("eps", ("l",)) * Scalar.delta("k", "l")
    assert e == Scalar.param("eps", ("k",)) * Scalar.delta("k", "l")


def test_conj_marks_complex_params():
    v = Scalar.param("V")
    assert v.conj({"V"}) == Scalar.param("V", conj=True)
    assert v.conj({"V"}).conj({"V"}) == v
    assert v.conj() == v


def test_substitute():
    s = Scalar.param("t") * 2 + Scalar.param("U")
    assert s.substitute({"t": ONE}) == Scalar.coerce(2) + Scalar.param("U")
    assert s.substitute({"t": ONE, "U": Scalar.coerce(4)}) == Scalar.coerce(6)
    vc = Scalar.param("V", conj=True)
    assert vc.substitute({"V": I}) == -I


@given(scalars(), scalars(), scalars())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO


@given(scalars(), scalars())
def test_conj_is_ring_homomorphism(a, b):
    cf = {"t"}
    assert (a * b).conj(cf) == a.conj(cf) * b.conj(cf)
    assert a.conj(cf).conj(cf) == a


@given(scalars())
def test_hash_consistent(a):
    b = a + ZERO
    assert a == b and hash(a) == hash(b)


def test_to_complex():
    assert (Scalar.sqrt(2) * I).to_complex() == pytest.approx(1.4142135623730951j)
    with pytest.raises(ValueError):
        Scalar.param("t").to_complex()
