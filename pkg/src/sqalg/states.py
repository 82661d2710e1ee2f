"""Operator application to states, inner products and ONR helpers."""

from __future__ import annotations

from .algebra import Expr, conj, nc, vc
from .factors import BRA_TYPES, CR, KET_TYPES, STATE_TYPES, Ket, Op, VcKet
from .context import Context
from .scalar import Scalar

__all__ = [
    "apply", "inner", "merge_kets", "vc_to_ops", "vacuum", "single_op", "is_ket_like", "is_bra_like", "norm2",
    "vc_components", "vc_action",
]


def is_ket_like(e: Expr) -> bool:
    return bool(e) and all(w and isinstance(w[-1], KET_TYPES) for _, w in e._terms)


def is_bra_like(e: Expr) -> bool:
    return bool(e) and all(
        any(isinstance(f, BRA_TYPES) for f in w) and not any(isinstance(f, KET_TYPES) for f in w)
        for _, w in e._terms
    )


def apply(ctx: Context, op: Expr, s: Expr) -> Expr:
    """Apply an operator expression to a ket-like state expression."""
    for _, w in op._terms:
        if any(isinstance(f, STATE_TYPES) for f in w):
            raise ValueError("the operator argument contains state factors")
    if s and not is_ket_like(s):
        raise ValueError("apply expects a ket-like state")
    return nc(ctx, op, s)


def inner(ctx: Context, b: Expr, k: Expr) -> Scalar:
    """<b|k>; a ket-like first argument is conjugated first."""
    if b and is_ket_like(b):
        b = conj(ctx, b)
    r = nc(ctx, b, k)
    if not r.is_scalar():
        raise ValueError(f"inner product did not reduce to a number: {r!r}")
    return r.scalar()


def norm2(ctx: Context, k: Expr) -> Scalar:
    return inner(ctx, k, k)


def merge_kets(ctx: Context, k1: Expr, k2: Expr) -> Expr:
    """Slotwise merge of kets from orthogonal subspaces."""
    for e in (k1, k2):
        if not all(len(w) == 1 and isinstance(w[0], Ket) for _, w in e._terms):
            raise ValueError("merge_kets expects Dirac kets")
    return nc(ctx, k1, k2)


def _bits_of(v) -> tuple:
    if isinstance(v, VcKet):
        return v.bits
    if isinstance(v, Expr):
        (key, c), = v._terms.items()
        _, w = key
        if len(w) != 1 or not isinstance(w[0], VcKet) or c != 1:
            raise ValueError("expected a single ONR ket")
        return w[0].bits
    return tuple(v)


def vc_to_ops(ctx: Context, v) -> Expr:
    """Creation-operator string for an ONR vector, ascending orbital order."""
    bits = _bits_of(v)
    if len(bits) != len(ctx.orbitals):
        raise ValueError(f"ONR vector has {len(bits)} entries, context has {len(ctx.orbitals)} orbitals")
    ops = [Expr._raw(ctx, {((), (Op(sym, CR, idx),)): Scalar.coerce(1)})
           for b, (sym, idx) in zip(bits, ctx.orbitals) if b]
    return nc(ctx, *ops)


def vacuum(ctx: Context) -> Expr:
    return vc(ctx, *([0] * len(ctx.orbitals)))


def single_op(ctx: Context, p: int, kind: int) -> Expr:
    """Elementary CR/AN operator on the p-th registered orbital (zero-based)."""
    sym, idx = ctx.orbitals[p]
    return Expr._raw(ctx, {((), (Op(sym, kind, idx),)): Scalar.coerce(1)})



def vc_components(e: Expr) -> dict:
    """{bits: coefficient} of a state expression made of ONR kets only."""
    out = {}
    for dummies, w, c in e.items():
        if dummies or len(w) != 1 or not isinstance(w[0], VcKet):
            raise ValueError(f"not a pure ONR state: {e!r}")
        out[w[0].bits] = c
    return out


def vc_action(ctx: Context, op: Expr, bits: tuple) -> dict:
    """{bits': coefficient} of op applied to the ONR ket ``bits`` (memoised per op)."""
    cache = ctx.cache("vc_action")
    key = (op, bits)
    hit = cache.get(key)
    if hit is None:
        hit = vc_components(apply(ctx, op, vc(ctx, *bits)))
        cache[key] = hit
    return hit
