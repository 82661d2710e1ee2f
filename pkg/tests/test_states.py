import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqalg import Scalar, apply, bra, inner, ket, merge_kets, nc, parse, vc, vc_to_ops, NULL
from sqalg.factors import AN, CR
from sqalg.oracle import bits_index, index_bits, oracle_matrix
from sqalg.states import norm2, single_op, vacuum, vc_action, vc_components

from conftest import spinless_ctx

CTX = spinless_ctx()
bits4 = st.tuples(*[st.integers(0, 1)] * 4)


def test_dirac_kets():
    assert inner(CTX, bra(CTX, "m", "n"), ket(CTX, "i", "j")) == Scalar.delta("m", "i") * Scalar.delta("n", "j")
    assert inner(CTX, ket(CTX, 1), ket(CTX, 2)) == 0
    assert merge_kets(CTX, ket(CTX, 1, NULL), ket(CTX, NULL, 2)) == ket(CTX, 1, 2)


def test_outer_product_unsupported():
    with pytest.raises(ValueError):
        nc(CTX, ket(CTX, 1), bra(CTX, 1))


def test_apply_signs():
    # c+(1) c+(2) |0> = |1100>, c+(2) c+(1) |0> = -|1100>
    assert apply(CTX, parse(CTX, "c+(1) c+(2)"), vacuum(CTX)) == vc(CTX, 1, 1, 0, 0)
    assert apply(CTX, parse(CTX, "c+(2)"), vc(CTX, 1, 0, 0, 0)) == -vc(CTX, 1, 1, 0, 0)
    assert apply(CTX, parse(CTX, "c(3)"), vc(CTX, 1, 0, 0, 0)) == 0


def test_apply_rejects_states_in_operator():
    with pytest.raises(ValueError):
        apply(CTX, vc(CTX, 0, 0, 0, 0), vc(CTX, 0, 0, 0, 0))


def test_inner_conjugates_ket():
    s = vc(CTX, 1, 0, 0, 0).scale(Scalar.coerce(1j)) + vc(CTX, 0, 1, 0, 0)
    assert norm2(CTX, s) == 2


@given(bits4, st.integers(0, 3), st.sampled_from([CR, AN]))
def test_apply_matches_oracle_column(bits, p, kind):
    op = single_op(CTX, p, kind)
    got = vc_components(apply(CTX, op, vc(CTX, *bits)))
    m = oracle_matrix(CTX, op)
    j = bits_index(bits)
    expected = {index_bits(i, 4): m[i, j] for i in range(16) if m[i, j]}
    assert got == expected


@given(bits4)
def test_vc_to_ops_round_trip(bits):
    assert apply(CTX, vc_to_ops(CTX, bits), vacuum(CTX)) == vc(CTX, *bits)
    assert vc_action(CTX, vc_to_ops(CTX, bits), (0, 0, 0, 0)) == {bits: 1}


def test_wrong_length():
    with pytest.raises(ValueError):
        vc(CTX, 1, 0)
    with pytest.raises(ValueError):
        vc_to_ops(CTX, (1, 0))
