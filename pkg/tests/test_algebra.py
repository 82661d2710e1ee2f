from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqalg import (
    AN, CR, ContextBuilder, I, Scalar, anticommutator, canonicalize, commutator, conj, const, expr_equal,
    literal, nc, substitute,
)
from sqalg.factors import Op

from conftest import spinless_ctx
from strategies import exprs, fermion_ops, rationals, words

CTX = spinless_ctx()


def P(s):
    return CTX.parse(s)


def c(kind, *idx):
    return CTX.cr("c", *idx) if kind == CR else CTX.an("c", *idx)


# --- declarations ----------------------------------------------------------


def test_redeclare_with_other_properties_fails():
    b = ContextBuilder()
    b.fermion("c")
    b.fermion("c")  # identical redeclaration is harmless
    with pytest.raises(ValueError):
        b.boson("c")


def test_fermi_sea_requires_dirac():
    with pytest.raises(ValueError):
        ContextBuilder().boson("b", vacuum="fermi-sea")


def test_reserved_names():
    with pytest.raises(ValueError):
        ContextBuilder().fermion("sum")


def test_frozen_builder():
    b = ContextBuilder()
    b.freeze()
    with pytest.raises(RuntimeError):
        b.fermion("c")


# --- nc -------------------------------------------------------------------


def test_nc_empty_and_single():
    assert nc(CTX) == const(CTX, 1)
    assert nc(CTX, c(CR, 1)) == c(CR, 1)


def test_car():
    assert nc(CTX, c(AN, "k"), c(CR, "l")) == const(CTX, Scalar.delta("k", "l")) - nc(CTX, c(CR, "l"), c(AN, "k"))
    assert nc(CTX, c(CR, 1), c(CR, 1)) == 0
    assert nc(CTX, c(AN, 2), c(CR, 1)) == -literal(CTX, [Op("c", CR, (1,)), Op("c", AN, (2,))])


def test_already_canonical_unchanged():
    b = ContextBuilder()
    b.fermion("c", spin=Fraction(1, 2))
    ctx = b.freeze()
    e = nc(ctx, ctx.cr("c", "k", 1), ctx.an("c", "k", 1))
    assert e == literal(ctx, [Op("c", CR, ("k", 1)), Op("c", AN, ("k", 1))])


def test_ccr_for_bosons():
    a, ad = CTX.an("a", 1), CTX.cr("a", 1)
    assert nc(CTX, a, ad) == nc(CTX, ad, a) + 1
    assert commutator(CTX, a, ad) == 1


def test_bosons_commute_with_fermions():
    assert commutator(CTX, CTX.cr("a", 1), c(CR, 1)) == 0
    # and are placed left of them
    (_, w, _), = nc(CTX, c(CR, 1), CTX.cr("a", 1)).items()
    assert w[0].symbol == "a"


def test_majorana():
    g = CTX.majorana
    assert nc(CTX, g("g", 1), g("g", 1)) == Fraction(1, 2)
    assert anticommutator(CTX, g("g", 1), g("g", 2)) == 0
    assert anticommutator(CTX, g("g", "k"), g("g", "l")) == const(CTX, Scalar.delta("k", "l"))
    assert conj(CTX, g("g", 1)) == g("g", 1)
    # majorana left of Dirac fermions, with a sign
    (_, w, coeff), = nc(CTX, c(CR, 1), g("g", 1)).items()
    assert w[0].symbol == "g" and coeff == -1


def test_grassmann():
    z = P("z")
    assert nc(CTX, z, z) == 0
    z1, z2 = P("z[1]"), P("z[2]")
    assert nc(CTX, z1, z2) == -nc(CTX, z2, z1)
    assert nc(CTX, c(CR, 1), z) == -nc(CTX, z, c(CR, 1))
    assert nc(CTX, CTX.cr("a", 1), z) == nc(CTX, z, CTX.cr("a", 1))


def test_fermi_sea_ordering():
    b = ContextBuilder()
    b.fermion("d", vacuum="fermi-sea")
    ctx = b.freeze()
    e = nc(ctx, ctx.cr("d", -1), ctx.an("d", -2))
    assert e == -literal(ctx, [Op("d", AN, (-2,)), Op("d", CR, (-1,))])
    with pytest.raises(ValueError):
        nc(ctx, ctx.cr("d", "k"), ctx.an("d", 1))
    with pytest.raises(ValueError):
        nc(ctx, ctx.cr("d", 0), ctx.an("d", 1))
    ctx0 = b.freeze(fermi_level_occupied=True)
    assert nc(ctx0, ctx0.cr("d", 0), ctx0.an("d", 0)) == 1 - nc(ctx0, ctx0.an("d", 0), ctx0.cr("d", 0))


def test_reorder_disabled():
    b = ContextBuilder()
    b.fermion("f", reorder=False)
    ctx = b.freeze()
    e = nc(ctx, ctx.an("f", 1), ctx.cr("f", 1))
    assert e == literal(ctx, [Op("f", AN, (1,)), Op("f", CR, (1,))])
    assert nc(ctx, ctx.cr("f", 1), ctx.cr("f", 1)) == 0
    # syntactic only: f f+ and 1 - f+ f are different expressions
    assert not expr_equal(ctx, e, 1 - nc(ctx, ctx.cr("f", 1), ctx.an("f", 1)))


def test_arity_mismatch():
    with pytest.raises(ValueError):
        nc(CTX, c(CR, 1), c(AN, 1, 2))


def test_declared_arity():
    b = ContextBuilder()
    b.fermion("c", arity=2)
    ctx = b.freeze()
    with pytest.raises(ValueError):
        ctx.cr("c", 1)


def test_spin_slot_range():
    b = ContextBuilder()
    b.fermion("c", spin=Fraction(1, 2))
    ctx = b.freeze()
    with pytest.raises(ValueError):
        ctx.cr("c", 1, 2)


def test_delta_substitution_into_words():
    e = nc(CTX, const(CTX, Scalar.delta("k", "l")), c(CR, "l"))
    assert e == nc(CTX, const(CTX, Scalar.delta("k", "l")), c(CR, "k"))


def test_conj_examples():
    assert conj(CTX, c(CR, "k")) == c(AN, "k")
    b = ContextBuilder()
    b.fermion("c", spin=Fraction(1, 2))
    ctx = b.freeze()
    e = nc(ctx, ctx.cr("c", 1), ctx.an("c", 0)).scale(I)
    assert conj(ctx, e) == nc(ctx, ctx.cr("c", 0), ctx.an("c", 1)).scale(-I)
    assert conj(CTX, P("V c+(1)")) == P("conj(V) c(1)")


def test_commutator_examples():
    n1 = nc(CTX, c(CR, 1), c(AN, 1))
    assert commutator(CTX, n1, c(CR, 1)) == c(CR, 1)
    assert anticommutator(CTX, c(AN, "k"), c(CR, "l")) == const(CTX, Scalar.delta("k", "l"))


def test_substitute():
    e = P("t c+(1) c(1) + eps c+(2) c(2)")
    assert substitute(CTX, e, {"t": 4}) == P("4 c+(1) c(1) + eps c+(2) c(2)")
    assert substitute(CTX, e, {}) == e
    with pytest.raises(KeyError):
        substitute(CTX, e, {"nope": 1})


def test_expr_equal_examples():
    assert expr_equal(CTX, nc(CTX, c(AN, 1), c(CR, 1)), 1 - nc(CTX, c(CR, 1), c(AN, 1)))
    assert expr_equal(CTX, const(CTX, 0) * c(CR, 1), 0)
    a, b = c(AN, 1), CTX.an("c", 2)
    assert not expr_equal(CTX, nc(CTX, a, b), nc(CTX, b, a))


# --- properties ------------------------------------------------------------

sym_ops = st.builds(
    lambda k, i: Op("c", k, (i,)), st.sampled_from([CR, AN]), st.sampled_from([1, 2, "k", "l"])
)
mixed_ops = st.one_of(
    sym_ops,
    st.builds(lambda k, i: Op("a", k, (i,)), st.sampled_from([CR, AN]), st.sampled_from([1, 2])),
    st.builds(lambda i: Op("g", None, (i,)), st.sampled_from([1, 2])),
)


@given(exprs(CTX, mixed_ops, max_size=6))
def test_idempotent(e):
    once = canonicalize(CTX, e)
    assert canonicalize(CTX, once) == once


@given(st.permutations([1, 2, 3, 4, 5]))
def test_permutation_sign(perm):
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    e = canonicalize(CTX, literal(CTX, [Op("c", CR, (i,)) for i in perm]))
    assert e == literal(CTX, [Op("c", CR, (i,)) for i in range(1, 6)], sign)


@given(exprs(CTX, sym_ops, max_size=4, complex_coeff=True), exprs(CTX, sym_ops, max_size=4, complex_coeff=True))
def test_conj_anti_homomorphism(a, b):
    a, b = canonicalize(CTX, a), canonicalize(CTX, b)
    assert conj(CTX, conj(CTX, a)) == a
    assert conj(CTX, nc(CTX, a, b)) == nc(CTX, conj(CTX, b), conj(CTX, a))


@given(exprs(CTX, mixed_ops, max_size=3), exprs(CTX, mixed_ops, max_size=3), exprs(CTX, mixed_ops, max_size=3))
def test_linearity_and_associativity(a, x, y):
    assert nc(CTX, a, x + y) == nc(CTX, a, x) + nc(CTX, a, y)
    assert nc(CTX, nc(CTX, a, x), y) == nc(CTX, a, nc(CTX, x, y))


@given(words(fermion_ops(), max_size=6), rationals)
def test_scalar_multiplication_commutes(w, q):
    e = literal(CTX, w)
    assert nc(CTX, q, e) == nc(CTX, e, q)
