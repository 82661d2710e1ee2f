import warnings

import pytest

from sqalg import Scalar, commutator, nc, sum_equal, sum_make, sum_nc, sum_simplify
from sqalg.sums import UnusedDummyWarning

from conftest import spinless_ctx

CTX = spinless_ctx()


def P(s):
    return CTX.parse(s)


def dummies_of(e):
    return {d for d, _, _ in e.items()}


def free_atoms(e):
    from sqalg.algebra import term_atoms

    out = set()
    for d, w, c in e.items():
        out |= term_atoms((), w, c) - set(d)
    return out


def test_commutator_of_sums_vanishes():
    h = sum_make(CTX, P("eps[k] c+(k) c(k)"), ["k"])
    n = sum_make(CTX, P("c+(q) c(q)"), ["q"])
    assert sum_simplify(CTX, commutator(CTX, h, n)).is_zero()


def test_delta_sifting():
    e = sum_make(CTX, P("delta(k, l) c+(k)"), ["k"])
    assert sum_simplify(CTX, e) == P("c+(l)")
    e = sum_make(CTX, P("eps[k] delta(k, q) c+(q) c(k)"), ["k", "q"])
    assert sum_equal(CTX, e, sum_make(CTX, P("eps[k] c+(k) c(k)"), ["k"]))


def test_alpha_equivalence():
    a = sum_make(CTX, P("eps[k] c+(k) c(k)"), ["k"])
    b = sum_make(CTX, P("eps[p] c+(p) c(p)"), ["p"])
    assert sum_equal(CTX, a, b)
    assert sum_simplify(CTX, a) == sum_simplify(CTX, b)
    c = sum_make(CTX, P("c+(k) c(l)"), ["k", "l"])
    d = sum_make(CTX, P("c+(l) c(k)"), ["k", "l"])
    assert sum_equal(CTX, c, d)
    assert not sum_equal(CTX, a, sum_make(CTX, P("c+(k) c(k)"), ["k"]))


def test_free_index_is_not_alpha_renamed():
    a = sum_make(CTX, P("c+(k) c(l)"), ["k"])
    b = sum_make(CTX, P("c+(k) c(m)"), ["k"])
    assert not sum_equal(CTX, a, b)


def test_unused_dummy_dropped_with_warning():
    with pytest.warns(UnusedDummyWarning):
        e = sum_make(CTX, P("c+(1)"), ["k"])
    assert e == P("c+(1)")


@pytest.mark.parametrize("free", ["k1", "k", "l"])
def test_product_renaming_never_captures_free_index(free):
    # the free index shares names with the dummies and with the renaming scheme
    s = sum_make(CTX, P("c+(k) c(k)"), ["k"])
    t = sum_make(CTX, P(f"c+(p) c({free})"), ["p"])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        prod = sum_nc(CTX, s, t)
    assert free in free_atoms(prod)
    for d in dummies_of(prod):
        assert free not in d
    simp = sum_simplify(CTX, prod)
    assert free in free_atoms(simp)
    for d in dummies_of(simp):
        assert free not in d


def test_sum_over_clashing_free_name():
    # summing over k a body that already contains an inner sum over k
    inner = sum_make(CTX, P("c+(k) c(k)"), ["k"])
    outer = sum_make(CTX, nc(CTX, P("c+(k)"), inner), ["k"])
    for d, w, _ in outer.items():
        assert len(set(d)) == len(d) == 2


def test_product_of_sums_keeps_dummies_distinct():
    s = sum_make(CTX, P("c+(k)"), ["k"])
    p = sum_nc(CTX, s, s)
    for d, w, _ in p.items():
        assert len(d) == 2
        assert {f.indexes[0] for f in w} == set(d)


def test_invalid_dummy():
    with pytest.raises(ValueError):
        sum_make(CTX, P("c+(1)"), [1])


def test_simplify_is_fixpoint():
    e = sum_make(CTX, P("delta(k, l) delta(l, m) c+(k) c(m)"), ["k", "l"])
    once = sum_simplify(CTX, e)
    assert sum_simplify(CTX, once) == once
    assert once == P("c+(m) c(m)")


def test_scalar_sums():
    e = sum_make(CTX, P("eps[k] delta(k, 1)"), ["k"])
    assert sum_simplify(CTX, e) == P("eps[1]")
    assert sum_simplify(CTX, e).scalar() == Scalar.param("eps", (1,))
