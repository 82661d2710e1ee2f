from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqalg import ContextBuilder, I, commutator, conj, const, nc, parse, vev
from sqalg.macros import (
    PROJECTOR_KINDS, hop, hubbard, number, projector, spin_component, spinspin, spinx, spiny, spinz, sminus,
    splus, total_number, total_spin,
)

from conftest import spinful_ctx, spinless_ctx

SCTX = spinful_ctx()


def spin_ctx(S):
    b = ContextBuilder()
    b.fermion("f", spin=Fraction(S))
    return b.freeze()


def test_number_and_hop():
    assert number(SCTX, ("c", 1)) == parse(SCTX, "c+(1, UP) c(1, UP) + c+(1, DO) c(1, DO)")
    assert hop(SCTX, ("c", 1), ("c", 2)) == parse(
        SCTX, "c+(1, UP) c(2, UP) + c+(2, UP) c(1, UP) + c+(1, DO) c(2, DO) + c+(2, DO) c(1, DO)"
    )
    ctx = spinless_ctx()
    assert number(ctx, "c") == number(ctx, ("c",))
    assert hop(ctx, ("c", 1), ("c", 2)) == parse(ctx, "c+(1) c(2) + c+(2) c(1)")


def test_number_of_composite_operator():
    ctx = spinless_ctx()
    d = parse(ctx, "c(1) + c(2)")
    assert number(ctx, d) == nc(ctx, conj(ctx, d), d)


def test_hubbard_form():
    assert hubbard(SCTX, ("c", 1)) == parse(SCTX, "-c+(1, DO) c+(1, UP) c(1, DO) c(1, UP)")


def test_spinx_form():
    assert spinx(SCTX, ("c", 1)) == parse(SCTX, "1/2 c+(1, DO) c(1, UP) + 1/2 c+(1, UP) c(1, DO)")


def test_projectors_sum_to_one():
    s = ("c", 1)
    total = projector(SCTX, s, "empty") + projector(SCTX, s, "single") + projector(SCTX, s, "double")
    assert total == const(SCTX, 1)
    assert projector(SCTX, s, "up") + projector(SCTX, s, "down") == projector(SCTX, s, "single")
    for k in PROJECTOR_KINDS:
        p = projector(SCTX, s, k)
        assert nc(SCTX, p, p) == p
    with pytest.raises(ValueError):
        projector(SCTX, s, "triple")


@pytest.mark.parametrize("S", ["1/2", "1", "3/2"])
def test_su2(S):
    ctx = spin_ctx(S)
    s = "f"
    x, y, z = spinx(ctx, s), spiny(ctx, s), spinz(ctx, s)
    assert commutator(ctx, x, y) == z.scale(I)
    assert commutator(ctx, y, z) == x.scale(I)
    assert commutator(ctx, z, x) == y.scale(I)
    assert commutator(ctx, splus(ctx, s), sminus(ctx, s)) == 2 * z
    # S^2 = S(S+1) on a singly occupied level: <0| f_v S^2 f+_w |0>
    s2 = nc(ctx, x, x) + nc(ctx, y, y) + nc(ctx, z, z)
    q = Fraction(S)
    slots = range(int(2 * q) + 1)
    for v in slots:
        for w in slots:
            val = vev(ctx, nc(ctx, parse(ctx, f"f({v})"), s2, parse(ctx, f"f+({w})")))
            assert val == (q * (q + 1) if v == w else 0)


def test_spin_hermiticity():
    for ax in "xyz":
        e = spin_component(SCTX, ("c", 1), ax)
        assert conj(SCTX, e) == e
    assert conj(SCTX, splus(SCTX, ("c", 1))) == sminus(SCTX, ("c", 1))


def test_spinless_rejected():
    ctx = spinless_ctx()
    with pytest.raises(ValueError):
        spinz(ctx, ("c", 1))
    with pytest.raises(ValueError):
        spin_component(SCTX, ("c", 1), "w")


def test_totals_commute_with_hamiltonian():
    sites = [("c", 1), ("c", 2)]
    H = parse(SCTX, "t hop(c[1], c[2]) + U hubbard(c[1]) + U hubbard(c[2])")
    for ax in "xyz+-":
        assert commutator(SCTX, H, total_spin(SCTX, sites, ax)) == 0
    assert commutator(SCTX, H, total_number(SCTX, sites)) == 0


@given(st.sampled_from(["x", "y", "z"]))
def test_spinspin_symmetric(ax):
    a, b = ("c", 1), ("c", 2)
    assert spinspin(SCTX, a, b) == spinspin(SCTX, b, a)
