from fractions import Fraction

import pytest

from sqalg import ContextBuilder, Scalar, apply, inner, qsbasis, qszbasis
from sqalg.basis import dot, sector_states
from sqalg.macros import total_spin

from conftest import spinful_ctx

H = Fraction(1, 2)


def test_qsz_sectors_partition_fock_space():
    ctx = spinful_ctx(2)
    b = qszbasis(ctx, [("c", 1), ("c", 2)])
    assert b.total_dimension() == 16
    assert b.dims()[(0, 0)] == 4
    assert b.dims()[(-2, 0)] == 1


def test_qs_dimer():
    ctx = spinful_ctx(2)
    b = qsbasis(ctx, [("c", 1), ("c", 2)])
    assert b.labels() == [(-2, 0), (-1, H), (0, 0), (0, 1), (1, H), (2, 0)]
    assert [len(b.states(q)) for q in b.labels()] == [1, 2, 3, 1, 2, 1]
    assert b.total_dimension() == 16


@pytest.mark.parametrize("n", [1, 2, 3])
def test_qs_states_are_highest_weight_and_orthonormal(n):
    ctx = spinful_ctx(n)
    sites = [("c", i) for i in range(1, n + 1)]
    b = qsbasis(ctx, sites)
    assert b.total_dimension() == 4 ** n
    splus, sz = total_spin(ctx, sites, "+"), total_spin(ctx, sites, "z")
    for (q, S), states in b:
        for i, u in enumerate(states):
            e = u.to_expr(ctx)
            assert apply(ctx, splus, e) == 0
            assert apply(ctx, sz, e) == e.scale(Scalar.coerce(S))
            assert u.norm2() == 1
            for w in states[i + 1:]:
                assert dot(u.as_dict(), w.as_dict()) == 0


def test_singlet_has_sqrt_half_components():
    ctx = spinful_ctx(2)
    b = qsbasis(ctx, [("c", 1), ("c", 2)])
    coeffs = {c for s in b.states((0, 0)) for _, c in s.components}
    assert Scalar.sqrt(Fraction(1, 2)) in coeffs


def test_first_component_positive():
    ctx = spinful_ctx(2)
    for _, states in qsbasis(ctx, [("c", 1), ("c", 2)]):
        for s in states:
            assert s.components[0][1].to_complex().real > 0


def test_site_mismatch_rejected():
    ctx = spinful_ctx(2)
    with pytest.raises(ValueError):
        qsbasis(ctx, [("c", 1)])
    b = ContextBuilder()
    b.fermion("c")
    b.orbitals([("c", (1,))])
    with pytest.raises(ValueError):
        qszbasis(b.freeze(), [("c", 1)])


def test_sector_states_binary_order():
    ctx = spinful_ctx(1)
    s = sector_states(ctx, [("c", 1)])
    assert set(s) == {(-1, 0), (0, H), (0, -H), (1, 0)}


def test_to_expr_inner():
    ctx = spinful_ctx(2)
    b = qsbasis(ctx, [("c", 1), ("c", 2)])
    u = b.states((0, 0))[0].to_expr(ctx)
    assert inner(ctx, u, u) == 1
