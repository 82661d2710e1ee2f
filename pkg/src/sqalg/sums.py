"""Formal sums over dummy indexes.

A summed term is stored in an :class:`Expr` under the key (dummies, word);
this module builds such terms and simplifies them.
"""

from __future__ import annotations

import warnings
from itertools import permutations

from .algebra import Expr, _add_terms, _fresh, _settle, nc, rename_term, term_atoms
from .context import RESERVED, Context
from .factors import factor_repr_key
from .scalar import Scalar, index_key

__all__ = ["sum_make", "sum_nc", "sum_simplify", "sum_equal", "rename_dummies", "UnusedDummyWarning"]

MAX_PERMUTED = 6


class UnusedDummyWarning(UserWarning):
    """A summation index does not occur in the summand and was dropped."""


def _check_dummy(d):
    if not isinstance(d, str) or not d.isidentifier() or d in RESERVED:
        raise ValueError(f"summation index {d!r} is not a symbolic atom")
    return d


def sum_make(ctx: Context, body: Expr, dummies) -> Expr:
    """Sum ``body`` over ``dummies``; dummies not occurring in a term are dropped."""
    if isinstance(dummies, str):
        dummies = [dummies]
    new = sorted({_check_dummy(d) for d in dummies})
    out: dict = {}
    for d0, word, coeff in body.items():
        atoms = term_atoms(d0, word, coeff)
        clash = {d: _fresh(d, atoms | set(new)) for d in d0 if d in new}
        if clash:
            terms = rename_term(ctx, d0, word, coeff, clash)
        else:
            terms = {(d0, word): coeff}
        for (d1, w1), c1 in terms.items():
            free = term_atoms((), w1, c1)
            used = [d for d in new if d in free]
            unused = [d for d in new if d not in free]
            if unused:
                warnings.warn(
                    f"summation index {', '.join(unused)} does not occur in the summand; dropped",
                    UnusedDummyWarning,
                    stacklevel=2,
                )
            _add_terms(out, [((tuple(sorted(set(d1) | set(used))), w1), c1)])
    return Expr._raw(ctx, out)


def sum_nc(ctx: Context, *operands) -> Expr:
    """Product of sums; colliding dummies are renamed (k -> k1, k2, ...)."""
    return nc(ctx, *operands)


def _sift(ctx: Context, dummies: tuple, word: tuple, coeff: Scalar) -> dict | None:
    """Collapse deltas that tie a dummy to another index; None if nothing applies."""
    dset = set(dummies)
    changed = False
    out: dict = {}
    for mono in coeff.split_monomials():
        (m, _), = mono.monomials()
        classes: dict = {}
        for rep, x in m.deltas:
            classes.setdefault(rep, [rep]).append(x)
        mapping = {}
        for members in classes.values():
            ds = [x for x in members if x in dset]
            if not ds:
                continue
            others = sorted((x for x in members if x not in dset), key=index_key)
            target = others[0] if others else min(ds, key=index_key)
            for x in ds:
                if x != target:
                    mapping[x] = target
        if not mapping:
            _add_terms(out, [((dummies, word), mono)])
            continue
        changed = True
        kept = tuple(d for d in dummies if d not in mapping)
        for (d2, w2), c2 in rename_term(ctx, dummies, word, mono, mapping).items():
            d2 = tuple(sorted(set(d2) & set(kept)))
            _add_terms(out, [((d2, w2), c2)])
    return out if changed else None


def _fixed_names(n: int, avoid: set) -> list:
    names, k = [], 1
    while len(names) < n:
        cand = f"k{k}"
        if cand not in avoid:
            names.append(cand)
        k += 1
    return names


def _term_key(word, coeff: Scalar) -> tuple:
    return (
        tuple(factor_repr_key(f) for f in word),
        tuple(sorted(repr(Scalar._raw({m: q})) for m, q in coeff.monomials())),
    )


def _first_appearance(dummies, word, coeff) -> list:
    order = []
    for f in word:
        for i in getattr(f, "indexes", getattr(f, "slots", ())):
            if i in dummies and i not in order:
                order.append(i)
    for d in sorted(coeff.atoms(), key=index_key):
        if d in dummies and d not in order:
            order.append(d)
    return order + [d for d in dummies if d not in order]


def rename_dummies(ctx: Context, dummies: tuple, word: tuple, coeff: Scalar) -> dict:
    """Canonical renaming of the dummies of a single term to k1, k2, ..."""
    if not dummies:
        return {((), word): coeff}
    free = term_atoms((), word, coeff) - set(dummies)
    names = _fixed_names(len(dummies), free)
    # rename through temporaries so that overlapping names cannot collide
    tmp = {d: f"_t{n}" for n, d in enumerate(dummies)}
    staged = rename_term(ctx, dummies, word, coeff, tmp)
    best = None
    for (d1, w1), c1 in staged.items():
        if len(dummies) <= MAX_PERMUTED:
            orders = permutations(d1)
        else:
            orders = [_first_appearance(d1, w1, c1)]
        for order in orders:
            cand = rename_term(ctx, d1, w1, c1, dict(zip(order, names)))
            if len(cand) != 1:
                continue
            ((d2, w2), c2), = cand.items()
            key = _term_key(w2, c2)
            if best is None or key < best[0]:
                best = (key, {(d2, w2): c2})
    if best is None:
        return staged
    return best[1]


def sum_simplify(ctx: Context, e: Expr, max_rounds: int = 50) -> Expr:
    """Delta sifting, canonical dummy names and merging, iterated to a fixpoint."""
    terms = dict(e._terms)
    for _ in range(max_rounds):
        nxt: dict = {}
        for (d, w), c in terms.items():
            if not d:
                _add_terms(nxt, [((d, w), c)])
                continue
            sifted = _sift(ctx, d, w, c)
            if sifted is not None:
                _add_terms(nxt, sifted.items())
                continue
            _add_terms(nxt, rename_dummies(ctx, d, w, c).items())
        nxt = _settle(ctx, nxt)
        if nxt == terms:
            break
        terms = nxt
    return Expr._raw(ctx, terms)


def sum_equal(ctx: Context, a: Expr, b: Expr) -> bool:
    return sum_simplify(ctx, a - b).is_zero()
