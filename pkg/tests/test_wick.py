import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqalg import Scalar, canonicalize, const, contractions, literal, normal_order, parse, vev, vev_expr, vev_fermisea
from sqalg.factors import AN, CR, Op
from sqalg.oracle import oracle_vev
from sqalg.wick import elementary, pairing_sum

from conftest import fermisea_ctx, spinless_ctx
from strategies import exprs, fermion_ops, random_word, words

CTX = spinless_ctx()
FCTX = fermisea_ctx()
SEA_OPS = fermion_ops("d", (-2, -1, 1, 2))


def test_elementary_empty_band():
    a, ad = Op("c", AN, ("k",)), Op("c", CR, ("l",))
    assert elementary(CTX, a, ad) == Scalar.delta("k", "l")
    assert elementary(CTX, ad, a) == 0
    assert elementary(CTX, a, Op("c", AN, ("l",))) == 0


def test_elementary_fermi_sea():
    d = lambda k, i: Op("d", k, (i,))
    assert elementary(FCTX, d(CR, -1), d(AN, -1)) == 1
    assert elementary(FCTX, d(AN, -1), d(CR, -1)) == 0
    assert elementary(FCTX, d(AN, 1), d(CR, 1)) == 1
    assert elementary(FCTX, d(CR, 1), d(AN, 1)) == 0
    assert elementary(FCTX, d(CR, 1), d(AN, -1)) == 0


def test_boson_vev():
    assert vev(CTX, parse(CTX, "a(1) a+(1)")) == 1
    assert vev(CTX, parse(CTX, "a(1) a(1) a+(1) a+(1)")) == 2
    assert vev(CTX, parse(CTX, "a+(1) a(1)")) == 0


def test_symbolic_vev():
    e = literal(CTX, [Op("c", AN, ("k",)), Op("c", AN, ("l",)), Op("c", CR, ("m",)), Op("c", CR, ("n",))])
    expected = Scalar.delta("l", "m") * Scalar.delta("k", "n") - Scalar.delta("k", "m") * Scalar.delta("l", "n")
    assert vev(CTX, e) == expected


def test_vev_keeps_grassmann():
    e = parse(CTX, "z c(1) c+(1)")
    assert vev_expr(CTX, e) == parse(CTX, "z")
    with pytest.raises(ValueError):
        vev(CTX, e)


def test_majorana_rejected():
    with pytest.raises(ValueError):
        vev(CTX, parse(CTX, "g(1) g(2)"))
    with pytest.raises(ValueError):
        contractions(CTX, literal(CTX, [Op("g", None, (1,)), Op("g", None, (2,))]))


def test_fermi_sea_override():
    e = parse(CTX, "c+(-1) c(-1)")
    assert vev(CTX, e) == 0
    assert vev_fermisea(CTX, e) == 1


def test_contractions_structure():
    w = [Op("c", AN, (1,)), Op("c", AN, (2,)), Op("c", CR, (3,)), Op("c", CR, (4,))]
    ps = contractions(CTX, w)
    assert sorted(p.pairs for p in ps) == [((0, 2), (1, 3)), ((0, 3), (1, 2))]
    assert all(p.value == 0 for p in ps)
    w = [Op("c", AN, (1,)), Op("c", AN, (2,)), Op("c", CR, (2,)), Op("c", CR, (1,))]
    ps = contractions(CTX, w)
    assert len(ps) == 2 and sum(1 for p in ps if not p.value) == 1
    assert pairing_sum(ps) == vev(CTX, literal(CTX, w)) == 1
    assert contractions(CTX, w[:3]) == []


def test_normal_order_has_zero_vev():
    e = parse(CTX, "c(1) c+(1) + 3 c(2) c(1) c+(1) c+(2)")
    assert vev(CTX, normal_order(CTX, e)) == 0


@given(words(fermion_ops(), max_size=8))
def test_vev_matches_oracle_empty(w):
    e = literal(CTX, w)
    assert vev(CTX, e) == oracle_vev(CTX, e)


@given(words(SEA_OPS, max_size=8))
def test_vev_matches_oracle_sea(w):
    e = literal(FCTX, w)
    assert vev(FCTX, e) == oracle_vev(FCTX, e)


@given(exprs(CTX, max_size=6))
def test_vev_invariant_under_canonicalization(e):
    assert vev(CTX, e) == vev(CTX, canonicalize(CTX, e))


def test_vev_is_linear():
    rng = random.Random(5)
    for _ in range(20):
        a = literal(CTX, random_word(rng))
        b = literal(CTX, random_word(rng))
        assert vev(CTX, a + 3 * b) == vev(CTX, a) + 3 * vev(CTX, b)


@given(st.integers(0, 3))
def test_number_operator_vev(p):
    e = parse(CTX, f"c+({p + 1}) c({p + 1})")
    assert vev(CTX, e) == 0
    assert vev_expr(CTX, e) == const(CTX, 0)
