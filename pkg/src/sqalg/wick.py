"""Vacuum expectation values by Wick's theorem.

Works on the stored factor strings as they are, so it also applies to
literal (non-canonical) words and to symbols with reordering disabled.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .algebra import Expr, canonicalize, fermi_occupied
from .context import Context, Statistics, Vacuum
from .factors import AN, CR, STATE_TYPES, Grassmann, Op
from .scalar import ONE, ZERO, Scalar

__all__ = [
    "Pairing", "contractions", "elementary", "vev", "vev_expr", "vev_fermisea", "vev_word",
    "normal_order", "pairing_sum",
]


def _sea(ctx: Context, op: Op, fermi_sea: bool | None) -> bool:
    if fermi_sea is None:
        return ctx.decl(op.symbol).vacuum is Vacuum.FERMI_SEA
    return fermi_sea


def elementary(ctx: Context, a: Op, b: Op, fermi_sea: bool | None = None) -> Scalar:
    """<0| a b |0> for two single operators."""
    if a.symbol != b.symbol:
        return ZERO
    d = ctx.decl(a.symbol)
    if d.statistics is Statistics.BOSON:
        return Scalar.deltas(a.indexes, b.indexes) if (a.kind, b.kind) == (AN, CR) else ZERO
    if d.statistics is Statistics.MAJORANA:
        raise ValueError("Majorana operators have no vacuum expectation value")
    if a.kind == b.kind:
        return ZERO
    if _sea(ctx, a, fermi_sea):
        occ_a = fermi_occupied(ctx, a)
        occ_b = fermi_occupied(ctx, b)
        if occ_a != occ_b:
            return ZERO
        # AN.CR contracts on empty levels, CR.AN on filled ones
        if (a.kind == AN) == occ_a:
            return ZERO
    elif a.kind != AN:
        return ZERO
    return Scalar.deltas(a.indexes, b.indexes)


def _structural(ctx, a: Op, b: Op, fermi_sea) -> bool:
    if a.symbol != b.symbol:
        return False
    if a.kind == b.kind:
        return False
    if ctx.decl(a.symbol).statistics is not Statistics.BOSON and _sea(ctx, a, fermi_sea):
        return True
    return a.kind == AN


def _wick(ctx: Context, ops: tuple, fermionic: bool, fermi_sea, memo: dict) -> Scalar:
    if not ops:
        return ONE
    if len(ops) % 2:
        return ZERO
    hit = memo.get(ops)
    if hit is not None:
        return hit
    first = ops[0]
    acc = ZERO
    for j in range(1, len(ops)):
        c = elementary(ctx, first, ops[j], fermi_sea)
        if not c:
            continue
        rest = _wick(ctx, ops[1:j] + ops[j + 1 :], fermionic, fermi_sea, memo)
        if not rest:
            continue
        term = c * rest
        acc = acc - term if fermionic and j % 2 == 0 else acc + term
    memo[ops] = acc
    return acc


def _split(ctx: Context, word) -> tuple[int, tuple, tuple, tuple]:
    """(sign, grassmann, bosons, fermions) with Grassmann atoms pulled left."""
    sign = 1
    grass, bos, ferm = [], [], []
    for f in word:
        if isinstance(f, STATE_TYPES):
            raise ValueError("vev is not defined for terms containing states")
        if isinstance(f, Grassmann):
            if len(ferm) % 2:
                sign = -sign
            grass.append(f)
            continue
        d = ctx.decl(f.symbol)
        if d.statistics is Statistics.BOSON:
            bos.append(f)
        elif d.statistics is Statistics.MAJORANA:
            raise ValueError("Majorana operators have no vacuum expectation value")
        else:
            ferm.append(f)
    return sign, tuple(grass), tuple(bos), tuple(ferm)


def vev_word(ctx: Context, word, fermi_sea: bool | None = None) -> tuple[Scalar, tuple]:
    """(value, grassmann prefix) for a single factor string."""
    sign, grass, bos, ferm = _split(ctx, tuple(word))
    memo = ctx.cache(("wick", fermi_sea))
    v = _wick(ctx, ferm, True, fermi_sea, memo)
    if v and bos:
        v = v * _wick(ctx, bos, False, fermi_sea, ctx.cache("wick-boson"))
    return (v if sign == 1 else -v), grass


def vev_expr(ctx: Context, e: Expr, fermi_sea: bool | None = None) -> Expr:
    """VEV as an expression; Grassmann atoms of each term are kept."""
    out = {}
    for dummies, word, coeff in e.items():
        v, grass = vev_word(ctx, word, fermi_sea)
        if not v:
            continue
        key = (dummies, grass)
        prev = out.get(key)
        val = coeff * v if prev is None else prev + coeff * v
        if val:
            out[key] = val
        else:
            out.pop(key, None)
    return canonicalize(ctx, Expr(ctx, out))


def vev(ctx: Context, e: Expr, fermi_sea: bool | None = None) -> Scalar:
    """Vacuum expectation value of a Grassmann-free expression.

    Each symbol uses its declared vacuum unless ``fermi_sea`` overrides it.
    """
    r = vev_expr(ctx, e, fermi_sea)
    if r.has_sums():
        raise ValueError("vev of a symbolic sum does not reduce to a number; use vev_expr")
    if not r.is_scalar():
        raise ValueError("expression contains Grassmann constants; use vev_expr")
    return r.scalar()


def vev_fermisea(ctx: Context, e: Expr) -> Scalar:
    """VEV in the filled Fermi sea for every Dirac symbol (momentum = first index)."""
    return vev(ctx, e, fermi_sea=True)


def normal_order(ctx: Context, e: Expr, fermi_sea: bool | None = None) -> Expr:
    """``e`` minus its vacuum expectation value."""
    return e - vev_expr(ctx, e, fermi_sea)


@dataclass(frozen=True)
class Pairing:
    pairs: tuple
    sign: int
    value: Scalar


def _matchings(n: int):
    def rec(rest):
        if not rest:
            yield ()
            return
        i = rest[0]
        for k in range(1, len(rest)):
            j = rest[k]
            for m in rec(rest[1:k] + rest[k + 1 :]):
                yield ((i, j),) + m
    yield from rec(tuple(range(n)))


def _crossings(pairs) -> int:
    n = 0
    for (a, b), (c, d) in combinations(pairs, 2):
        if a < c < b < d or c < a < d < b:
            n += 1
    return n


def contractions(ctx: Context, factors, fermi_sea: bool | None = None) -> list[Pairing]:
    """All complete pairings whose pairs are contractible by kind and symbol.

    The value of a pairing is the product of its elementary contractions and
    may vanish for mismatched numeric indexes.
    """
    if isinstance(factors, Expr):
        (_, word, _), = factors.items()
        factors = word
    ops = tuple(factors)
    if any(not isinstance(f, Op) for f in ops):
        raise ValueError("contractions expects operator factors only")
    stats = {ctx.decl(f.symbol).statistics for f in ops}
    if Statistics.MAJORANA in stats:
        raise ValueError("Majorana operators have no vacuum expectation value")
    if len(stats) > 1:
        raise ValueError("contractions: mixed statistics in one string")
    if len(ops) % 2:
        return []
    fermionic = stats != {Statistics.BOSON}
    out = []
    for m in _matchings(len(ops)):
        if not all(_structural(ctx, ops[i], ops[j], fermi_sea) for i, j in m):
            continue
        value = ONE
        for i, j in m:
            value = value * elementary(ctx, ops[i], ops[j], fermi_sea)
        sign = -1 if fermionic and _crossings(m) % 2 else 1
        out.append(Pairing(m, sign, value))
    return out


def pairing_sum(pairings) -> Scalar:
    acc = ZERO
    for p in pairings:
        acc = acc + (p.value if p.sign == 1 else -p.value)
    return acc

