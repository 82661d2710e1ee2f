"""Expressions and non-commutative multiplication with canonical reordering.

Every product is kept in canonical order.  Factor categories are ordered as
Grassmann constants, bosons, Majorana fermions, Dirac fermions, bras, kets.
Dirac fermions are normal ordered with respect to their vacuum: the
creation-like block comes first, then the annihilation-like block, each
sorted ascending by (symbol, indexes).  With DO < UP this prints the
Hubbard term as -c+(DO) c+(UP) c(DO) c(UP).

Canonicalization works by insertion: a canonical word times one more factor
is expanded by moving the new factor left, emitting a contraction term at each
swap with a non-trivial (anti)commutator.  Deleting two factors from a sorted
word leaves it sorted, so every emitted word is canonical as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .context import Context, Statistics, Vacuum
from .factors import (
    AN, CR, Bra, Grassmann, Ket, Op, VcBra, VcKet, factor_atoms, factor_repr_key,
)
from .scalar import NULL, ONE, ZERO, Scalar, delta_map, index_key

__all__ = [
    "Expr", "Term", "nc", "canonicalize", "conj", "commutator", "anticommutator",
    "substitute", "expr_equal", "operator", "param", "grassmann", "const", "literal",
    "ket", "bra", "vc", "vcbra",
]


# --- ordering ------------------------------------------------------------


def _idx(t):
    return tuple(index_key(i) for i in t)


def fermi_occupied(ctx: Context, op: Op) -> bool:
    """Whether the level addressed by a Fermi-sea operator lies in the filled sea."""
    if not op.indexes:
        raise ValueError(f"Fermi-sea operator {op.symbol} needs a momentum index")
    k = op.indexes[0]
    if not isinstance(k, int):
        raise ValueError(f"Fermi-sea operator {op.symbol} has symbolic momentum {k!r}")
    if k == 0:
        if not ctx.fermi_level_occupied:
            raise ValueError(
                f"{op.symbol}: momentum exactly at the Fermi level; set fermi_level_occupied"
            )
        return True
    return k < 0


def is_creation_like(ctx: Context, op: Op) -> bool:
    """True if the Dirac operator belongs to the left (creation-like) block."""
    d = ctx.decl(op.symbol)
    if d.vacuum is Vacuum.FERMI_SEA:
        return (op.kind == CR) != fermi_occupied(ctx, op)
    return op.kind == CR


def order_key(ctx: Context, f) -> tuple:
    cache = ctx.cache("key")
    k = cache.get(f)
    if k is not None:
        return k
    if isinstance(f, Grassmann):
        k = (0, 0, f.name, _idx(f.indexes), f.conj)
    elif isinstance(f, Op):
        d = ctx.decl(f.symbol)
        if d.statistics is Statistics.BOSON:
            inner = (f.symbol, _idx(f.indexes))
            k = (1, f.kind, inner)
        elif d.statistics is Statistics.MAJORANA:
            k = (2, 0, (f.symbol, _idx(f.indexes)))
        elif is_creation_like(ctx, f):
            k = (3, 0, (f.symbol, f.kind, _idx(f.indexes)))
        else:
            k = (3, 1, (f.symbol, 1 - f.kind, _idx(f.indexes)))
    elif isinstance(f, Bra):
        k = (4,)
    elif isinstance(f, VcBra):
        k = (5,)
    elif isinstance(f, Ket):
        k = (6,)
    elif isinstance(f, VcKet):
        k = (7,)
    else:
        raise TypeError(f"not a factor: {f!r}")
    cache[f] = k
    return k


def is_odd(ctx: Context, f) -> bool:
    if isinstance(f, Grassmann):
        return True
    if isinstance(f, Op):
        return ctx.decl(f.symbol).is_fermion
    return False


def _is_barrier(ctx, f) -> bool:
    return isinstance(f, Op) and not ctx.decl(f.symbol).reorder


def _contraction(ctx: Context, g, f) -> Scalar | None:
    """``g f - s f g`` for a swap of adjacent ``g f`` (s the exchange sign)."""
    if not (isinstance(g, Op) and isinstance(f, Op)) or g.symbol != f.symbol:
        return None
    d = ctx.decl(g.symbol)
    if d.statistics is Statistics.MAJORANA:
        return Scalar.deltas(g.indexes, f.indexes)
    if g.kind == f.kind:
        return None
    if d.statistics is Statistics.BOSON:
        # [b, b+] = delta; the canonical order never asks to move AN past CR leftwards otherwise
        c = Scalar.deltas(g.indexes, f.indexes)
        return c if g.kind == AN else -c
    return Scalar.deltas(g.indexes, f.indexes)


def _check_index_value(ctx: Context, op: Op):
    d = ctx.decl(op.symbol)
    if d.arity is not None and len(op.indexes) != d.arity:
        raise ValueError(f"{op.symbol} expects {d.arity} indexes, got {len(op.indexes)}")
    if d.spin is not None:
        if not op.indexes:
            raise ValueError(f"{op.symbol} is spinful and needs a spin index")
        s = op.indexes[-1]
        if isinstance(s, int) and not 0 <= s <= 2 * d.spin:
            raise ValueError(f"{op.symbol}: spin slot {s} out of range for S={d.spin}")


# --- states inside words -------------------------------------------------


def apply_op_to_bits(ctx: Context, op: Op, bits: tuple) -> tuple[int, tuple] | None:
    """Elementary action of a Dirac operator on an ONR vector: (sign, bits) or None."""
    if ctx.decl(op.symbol).statistics is not Statistics.DIRAC:
        raise ValueError(f"{op.symbol} cannot act on an occupation-number vector")
    p = ctx.orbital_position(op.symbol, op.indexes)
    occ = bits[p]
    if (op.kind == CR and occ) or (op.kind == AN and not occ):
        return None
    sign = -1 if sum(bits[:p]) % 2 else 1
    new = bits[:p] + (1 - occ,) + bits[p + 1 :]
    return sign, new


def _slot_inner(xs: tuple, ys: tuple) -> Scalar:
    if len(xs) != len(ys):
        raise ValueError(f"bra/ket slot count mismatch: {len(xs)} vs {len(ys)}")
    out = ONE
    for a, b in zip(xs, ys):
        if a is NULL and b is NULL:
            continue
        if a is NULL or b is NULL:
            raise ValueError("Null slot paired with a determined quantum number")
        out = out * Scalar.delta(a, b)
        if not out:
            return ZERO
    return out


def merge_slots(xs: tuple, ys: tuple) -> tuple:
    if len(xs) != len(ys):
        raise ValueError(f"cannot merge kets with {len(xs)} and {len(ys)} slots")
    out = []
    for a, b in zip(xs, ys):
        if a is not NULL and b is not NULL:
            raise ValueError("kets collide: both determine the same slot")
        out.append(b if a is NULL else a)
    return tuple(out)


def _find(word, cls):
    for n, g in enumerate(word):
        if type(g) is cls:
            return n
    return -1


def _insert_state(ctx: Context, word: tuple, f) -> list:
    if isinstance(f, Ket):
        n = _find(word, Ket)
        if n >= 0:
            return [(ONE, word[:n] + (Ket(merge_slots(word[n].slots, f.slots)),) + word[n + 1 :])]
        n = _find(word, Bra)
        if n >= 0:
            c = _slot_inner(word[n].slots, f.slots)
            return [(c, word[:n] + word[n + 1 :])] if c else []
        return [(ONE, _place(ctx, word, f))]
    if isinstance(f, Bra):
        if _find(word, Ket) >= 0:
            raise ValueError("ket times bra (outer product) is not supported")
        n = _find(word, Bra)
        if n >= 0:
            return [(ONE, word[:n] + (Bra(merge_slots(word[n].slots, f.slots)),) + word[n + 1 :])]
        return [(ONE, _place(ctx, word, f))]
    if isinstance(f, VcKet):
        if len(f.bits) != len(ctx.orbitals):
            raise ValueError(f"ONR vector has {len(f.bits)} entries, context has {len(ctx.orbitals)} orbitals")
        if _find(word, VcKet) >= 0:
            raise ValueError("product of two occupation-number kets")
        n = _find(word, VcBra)
        if n >= 0:
            return [(ONE, word[:n] + word[n + 1 :])] if word[n].bits == f.bits else []
        bits, sign, rest = f.bits, 1, []
        ops = [g for g in word if isinstance(g, Op) and ctx.decl(g.symbol).statistics is Statistics.DIRAC]
        for g in reversed(ops):
            r = apply_op_to_bits(ctx, g, bits)
            if r is None:
                return []
            s, bits = r
            sign *= s
        rest = tuple(g for g in word if not (isinstance(g, Op) and g in ops))
        if any(isinstance(g, Op) and ctx.decl(g.symbol).statistics is Statistics.MAJORANA for g in rest):
            raise ValueError("Majorana operators cannot act on occupation-number vectors")
        return [(Scalar.coerce(sign), _place(ctx, rest, VcKet(bits)))]
    if isinstance(f, VcBra):
        if len(f.bits) != len(ctx.orbitals):
            raise ValueError(f"ONR vector has {len(f.bits)} entries, context has {len(ctx.orbitals)} orbitals")
        if _find(word, VcKet) >= 0:
            raise ValueError("ket times bra (outer product) is not supported")
        if _find(word, VcBra) >= 0:
            raise ValueError("product of two occupation-number bras")
        if any(isinstance(g, Op) and ctx.decl(g.symbol).is_fermion for g in word):
            raise ValueError("fermionic operator to the left of an occupation-number bra")
        return [(ONE, _place(ctx, word, f))]
    raise TypeError(f"not a state: {f!r}")


def _place(ctx, word, f):
    kf = order_key(ctx, f)
    p = len(word)
    while p > 0 and order_key(ctx, word[p - 1]) > kf:
        p -= 1
    return word[:p] + (f,) + word[p:]


def _insert(ctx: Context, word: tuple, f) -> list:
    """Canonical expansion of ``word * f`` as a list of (coefficient, word)."""
    cache = ctx.cache("insert")
    hit = cache.get((word, f))
    if hit is not None:
        return hit
    res = _insert_uncached(ctx, word, f)
    cache[(word, f)] = res
    return res


def _insert_uncached(ctx: Context, word: tuple, f) -> list:
    if isinstance(f, (Ket, Bra, VcKet, VcBra)):
        return _insert_state(ctx, word, f)
    if isinstance(f, Op):
        _check_index_value(ctx, f)
        d = ctx.decl(f.symbol)
        if word and isinstance(word[-1], VcKet) and d.is_fermion:
            raise ValueError("fermionic operator to the right of an occupation-number ket")
        n = _find(word, VcBra)
        if n >= 0 and d.statistics is Statistics.DIRAC:
            r = apply_op_to_bits(ctx, f.dagger(), word[n].bits)
            if r is None:
                return []
            s, bits = r
            return [(Scalar.coerce(s), word[:n] + (VcBra(bits),) + word[n + 1 :])]
        if n >= 0 and d.statistics is Statistics.MAJORANA:
            raise ValueError("Majorana operators cannot act on occupation-number vectors")
    out = []
    sign = 1
    odd_f = is_odd(ctx, f)
    kf = order_key(ctx, f)
    barrier_f = _is_barrier(ctx, f)
    p = len(word)
    while p > 0:
        g = word[p - 1]
        kg = order_key(ctx, g)
        state_g = isinstance(g, (Ket, Bra, VcKet, VcBra))
        if state_g:
            if kg > kf:
                p -= 1
                continue
            break
        if barrier_f or _is_barrier(ctx, g):
            if g == f and odd_f:
                return out
            break
        if kg < kf:
            break
        if kg == kf:
            if isinstance(g, Op) and ctx.decl(g.symbol).statistics is Statistics.MAJORANA:
                out.append((Scalar.coerce(Fraction(sign, 2)), word[: p - 1] + word[p:]))
                return out
            if odd_f:
                return out
            break
        c = _contraction(ctx, g, f)
        if c:
            out.append((c if sign == 1 else -c, word[: p - 1] + word[p:]))
        if odd_f and is_odd(ctx, g):
            sign = -sign
        p -= 1
    out.append((ONE if sign == 1 else -ONE, word[:p] + (f,) + word[p:]))
    return out


def canonical_word(ctx: Context, factors: Iterable) -> dict:
    """Canonical expansion of a plain factor sequence: {word: Scalar}."""
    acc = {(): ONE}
    for f in factors:
        acc = _times_factor(ctx, acc, f)
        if not acc:
            break
    return acc


def _times_factor(ctx: Context, acc: dict, f) -> dict:
    out: dict = {}
    for word, c in acc.items():
        for c2, w2 in _insert(ctx, word, f):
            v = c * c2
            prev = out.get(w2)
            v = v if prev is None else prev + v
            if v:
                out[w2] = v
            else:
                out.pop(w2, None)
    return out


# --- expressions ---------------------------------------------------------


@dataclass(frozen=True)
class Term:
    coeff: Scalar
    factors: tuple
    dummies: tuple = ()


def _term_sort_key(item):
    (dummies, word), _ = item
    return (len(word), tuple(factor_repr_key(f) for f in word), dummies)


class Expr:
    """Linear combination of canonical words, possibly under symbolic sums.

    Terms are stored as ``{(dummies, word): coefficient}``; ``dummies`` is the
    sorted tuple of summation indexes of that term (empty for plain terms).
    """

    __slots__ = ("ctx", "_terms", "_hash")

    def __init__(self, ctx: Context, terms: Mapping | None = None):
        self.ctx = ctx
        self._terms = {k: v for k, v in (terms or {}).items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, ctx, terms: dict) -> "Expr":
        e = cls.__new__(cls)
        e.ctx = ctx
        e._terms = terms
        e._hash = None
        return e

    # inspection

    def items(self):
        """(dummies, word, coeff) triples in deterministic print order."""
        return [(d, w, c) for (d, w), c in sorted(self._terms.items(), key=_term_sort_key)]

    def terms(self) -> list[Term]:
        return [Term(c, w, d) for d, w, c in self.items()]

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_scalar(self) -> bool:
        return all(not w and not d for d, w in self._terms)

    def scalar(self) -> Scalar:
        """The value of a factor-free expression."""
        if not self.is_scalar():
            raise ValueError(f"{self!r} is not a scalar")
        return self._terms.get(((), ()), ZERO)

    def constant_term(self) -> Scalar:
        return self._terms.get(((), ()), ZERO)

    def has_sums(self) -> bool:
        return any(d for d, _ in self._terms)

    def coefficient(self, *factors, dummies=()) -> Scalar:
        return self._terms.get((tuple(dummies), tuple(factors)), ZERO)

    # comparisons

    def __eq__(self, other):
        if isinstance(other, Expr):
            return self._terms == other._terms
        try:
            s = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == ({((), ()): s} if s else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # arithmetic

    def _lift(self, other) -> "Expr":
        if isinstance(other, Expr):
            if other.ctx is not self.ctx:
                raise ValueError("expressions belong to different contexts")
            return other
        return const(self.ctx, other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return Expr._raw(self.ctx, _add_terms(dict(self._terms), other._terms))

    __radd__ = __add__

    def __neg__(self):
        return Expr._raw(self.ctx, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, s) -> "Expr":
        s = Scalar.coerce(s)
        if not s:
            return Expr(self.ctx)
        if s == ONE:
            return self
        terms = {}
        for k, v in self._terms.items():
            p = v * s
            if p:
                terms[k] = p
        return Expr._raw(self.ctx, _settle(self.ctx, terms) if s.has_deltas() else terms)

    def __mul__(self, other):
        if isinstance(other, Expr):
            return nc(self.ctx, self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __truediv__(self, other):
        return self.scale(Scalar.coerce(other).inverse())

    def __pow__(self, n: int):
        out = const(self.ctx, 1)
        for _ in range(n):
            out = nc(self.ctx, out, self)
        return out

    def dagger(self) -> "Expr":
        return conj(self.ctx, self)

    def __repr__(self):
        from .dsl import print_ascii

        return print_ascii(self.ctx, self)

    def __str__(self):
        from .dsl import print_unicode

        return print_unicode(self.ctx, self)


def _add_terms(acc: dict, terms) -> dict:
    for k, v in (terms.items() if isinstance(terms, dict) else terms):
        prev = acc.get(k)
        v = v if prev is None else prev + v
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc


# --- delta substitution --------------------------------------------------


def _word_atoms(word) -> set:
    out = set()
    for f in word:
        out |= factor_atoms(f)
    return out


def term_atoms(dummies, word, coeff: Scalar) -> set:
    return set(dummies) | _word_atoms(word) | coeff.atoms()


def _settle(ctx: Context, terms: dict) -> dict:
    """Rewrite indexes in words to the representatives of their delta classes."""
    out: dict = {}
    pending = list(terms.items())
    rounds = 0
    while pending:
        rounds += 1
        if rounds > 100000:
            raise RuntimeError("delta substitution did not converge")
        (dummies, word), coeff = pending.pop()
        if not word or not coeff.has_deltas():
            _add_terms(out, [((dummies, word), coeff)])
            continue
        if not _word_atoms(word):
            # delta classes map symbolic atoms only
            _add_terms(out, [((dummies, word), coeff)])
            continue
        for mono in coeff.split_monomials():
            (m, _), = mono.monomials()
            mapping = delta_map(m.deltas)
            if not mapping:
                _add_terms(out, [((dummies, word), mono)])
                continue
            new = tuple(f.map_indexes(lambda i: mapping.get(i, i)) for f in word)
            if new == word:
                _add_terms(out, [((dummies, word), mono)])
                continue
            for w2, c2 in canonical_word(ctx, new).items():
                pending.append(((dummies, w2), c2 * mono))
    return out


# --- constructors --------------------------------------------------------


def const(ctx: Context, x) -> Expr:
    s = Scalar.coerce(x)
    return Expr._raw(ctx, {((), ()): s} if s else {})


def operator(ctx: Context, symbol: str, kind: int | None, *indexes) -> Expr:
    d = ctx.decl(symbol)
    if d.statistics is Statistics.MAJORANA:
        if kind is not None:
            raise ValueError(f"Majorana symbol {symbol} has no CR/AN slot")
    elif kind not in (CR, AN):
        raise ValueError(f"{symbol} needs CR or AN as first index")
    op = Op(symbol, kind, tuple(indexes))
    _check_index_value(ctx, op)
    return Expr._raw(ctx, {((), (op,)): ONE})


def param(ctx: Context, name: str, *indexes) -> Expr:
    from .context import ParamKind

    kind = ctx.param_kind(name)
    if kind is ParamKind.GRASSMANN:
        return grassmann(ctx, name, *indexes)
    return Expr._raw(ctx, {((), ()): Scalar.param(name, tuple(indexes))})


def grassmann(ctx: Context, name: str, *indexes, conj: bool = False) -> Expr:
    from .context import ParamKind

    if ctx.param_kind(name) is not ParamKind.GRASSMANN:
        raise ValueError(f"{name} is not a Grassmann constant")
    return Expr._raw(ctx, {((), (Grassmann(name, tuple(indexes), conj),)): ONE})


def ket(ctx: Context, *slots) -> Expr:
    return Expr._raw(ctx, {((), (Ket(tuple(slots)),)): ONE})


def bra(ctx: Context, *slots) -> Expr:
    return Expr._raw(ctx, {((), (Bra(tuple(slots)),)): ONE})


def _check_bits(ctx, bits):
    bits = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in bits):
        raise ValueError("occupancies must be 0 or 1")
    if len(bits) != len(ctx.orbitals):
        raise ValueError(f"ONR vector has {len(bits)} entries, context has {len(ctx.orbitals)} orbitals")
    return bits


def vc(ctx: Context, *bits) -> Expr:
    return Expr._raw(ctx, {((), (VcKet(_check_bits(ctx, bits)),)): ONE})


def vcbra(ctx: Context, *bits) -> Expr:
    return Expr._raw(ctx, {((), (VcBra(_check_bits(ctx, bits)),)): ONE})


def literal(ctx: Context, factors: Iterable, coeff=1, dummies: Iterable = ()) -> Expr:
    """A single product term taken verbatim, without reordering.

    Useful to build non-canonical inputs for :func:`canonicalize`.
    """
    factors = tuple(factors)
    for f in factors:
        if isinstance(f, Op):
            _check_index_value(ctx, f)
    c = Scalar.coerce(coeff)
    return Expr._raw(ctx, {(tuple(sorted(dummies)), factors): c} if c else {})


# --- core operations -----------------------------------------------------


def _check_arity(ctx: Context, exprs: Iterable[Expr]):
    seen: dict = {}
    for e in exprs:
        for _, word in e._terms:
            for f in word:
                if isinstance(f, Op):
                    n = seen.setdefault(f.symbol, len(f.indexes))
                    if n != len(f.indexes):
                        raise ValueError(f"{f.symbol} used with {n} and {len(f.indexes)} indexes")


def _fresh(name: str, used: set) -> str:
    base = name.rstrip("0123456789") or name
    n = 1
    while f"{base}{n}" in used:
        n += 1
    new = f"{base}{n}"
    used.add(new)
    return new


def _rename(mapping: dict):
    return lambda i: mapping.get(i, i)


def rename_term(ctx: Context, dummies, word, coeff, mapping) -> dict:
    """Rename index atoms of a single term; returns canonical {(dummies, word): coeff}."""
    fn = _rename(mapping)
    new_d = tuple(sorted(fn(d) for d in dummies))
    new_c = coeff.map_indexes(fn)
    new_w = tuple(f.map_indexes(fn) for f in word)
    if not new_c:
        return {}
    out = {}
    for w2, c2 in canonical_word(ctx, new_w).items():
        _add_terms(out, [((new_d, w2), c2 * new_c)])
    return out


def _avoid_capture(ctx, left: tuple, right: tuple):
    """Rename dummies so that multiplying ``left * right`` captures nothing.

    Dummies of the right operand clashing with any atom of the left are
    renamed; dummies of the left clashing with free atoms of the right are
    renamed as well.  Returns the two (dummies, word, coeff) triples.
    """
    (da, wa, ca), (db, wb, cb) = left, right
    atoms_a = term_atoms(da, wa, ca)
    atoms_b = term_atoms(db, wb, cb)
    used = atoms_a | atoms_b
    ren_b = {d: _fresh(d, used) for d in db if d in atoms_a}
    free_b = atoms_b - set(db)
    ren_a = {d: _fresh(d, used) for d in da if d in free_b}
    if ren_b:
        fn = _rename(ren_b)
        db = tuple(sorted(fn(d) for d in db))
        wb = tuple(f.map_indexes(fn) for f in wb)
        cb = cb.map_indexes(fn)
    if ren_a:
        fn = _rename(ren_a)
        da = tuple(sorted(fn(d) for d in da))
        wa = tuple(f.map_indexes(fn) for f in wa)
        ca = ca.map_indexes(fn)
    return (da, wa, ca), (db, wb, cb)


def _nc2(ctx: Context, a: Expr, b: Expr) -> Expr:
    if not a._terms or not b._terms:
        return Expr(ctx)
    out: dict = {}
    need_settle = False
    plain_a = {w: c for (d, w), c in a._terms.items() if not d}
    summed_a = [(d, w, c) for (d, w), c in a._terms.items() if d]
    for (db, wb), cb in b._terms.items():
        if not db and plain_a:
            partial = dict(plain_a)
            for f in wb:
                partial = _times_factor(ctx, partial, f)
                if not partial:
                    break
            for w, c in partial.items():
                v = c * cb
                need_settle = need_settle or v.has_deltas()
                _add_terms(out, [(((), w), v)])
        pairs = summed_a if not db else [(d, w, c) for (d, w), c in a._terms.items()]
        for ta in pairs:
            (da, wa, ca), (db2, wb2, cb2) = _avoid_capture(ctx, ta, (db, wb, cb))
            dummies = tuple(sorted(set(da) | set(db2)))
            partial = {wa: ca}
            for f in wb2:
                partial = _times_factor(ctx, partial, f)
                if not partial:
                    break
            for w, c in partial.items():
                v = c * cb2
                need_settle = need_settle or v.has_deltas()
                _add_terms(out, [((dummies, w), v)])
    if need_settle:
        out = _settle(ctx, out)
    return Expr._raw(ctx, out)


def nc(ctx: Context, *operands) -> Expr:
    """Non-commutative product, distributed and canonically reordered.

    ``nc()`` is 1 and ``nc(x)`` is the canonical form of ``x``.  Numbers are
    accepted as operands.
    """
    exprs = [o if isinstance(o, Expr) else const(ctx, o) for o in operands]
    for e in exprs:
        if e.ctx is not ctx:
            raise ValueError("operand belongs to a different context")
    _check_arity(ctx, exprs)
    if not exprs:
        return const(ctx, 1)
    # insertion assumes a canonical left operand
    out = canonicalize(ctx, exprs[0])
    for e in exprs[1:]:
        out = _nc2(ctx, out, e)
    return out


def canonicalize(ctx: Context, e: Expr) -> Expr:
    """Bring every term of ``e`` into canonical order (idempotent)."""
    out: dict = {}
    for (d, w), c in e._terms.items():
        for w2, c2 in canonical_word(ctx, w).items():
            _add_terms(out, [((d, w2), c2 * c)])
    return Expr._raw(ctx, _settle(ctx, out))


def conj(ctx: Context, e: Expr) -> Expr:
    """Hermitian conjugate: reverse words, flip CR/AN, conjugate coefficients."""
    out: dict = {}
    for (d, w), c in e._terms.items():
        cc = c.conj(ctx.is_complex)
        flipped = [f.dagger() for f in reversed(w)]
        for w2, c2 in canonical_word(ctx, flipped).items():
            _add_terms(out, [((d, w2), c2 * cc)])
    return Expr._raw(ctx, _settle(ctx, out))


def _pre_rename(ctx: Context, a: Expr, b: Expr) -> Expr:
    """Rename dummies of ``b`` once, so both orders of a product share names."""
    if not b.has_sums() and not a.has_sums():
        return b
    atoms_a = set()
    for (d, w), c in a._terms.items():
        atoms_a |= term_atoms(d, w, c)
    out: dict = {}
    for (d, w), c in b._terms.items():
        used = atoms_a | term_atoms(d, w, c)
        ren = {x: _fresh(x, used) for x in d if x in atoms_a}
        if ren:
            _add_terms(out, rename_term(ctx, d, w, c, ren).items())
        else:
            _add_terms(out, [((d, w), c)])
    return Expr._raw(ctx, out)


def commutator(ctx: Context, a: Expr, b: Expr) -> Expr:
    b = _pre_rename(ctx, a, b)
    return nc(ctx, a, b) - nc(ctx, b, a)


def anticommutator(ctx: Context, a: Expr, b: Expr) -> Expr:
    b = _pre_rename(ctx, a, b)
    return nc(ctx, a, b) + nc(ctx, b, a)


def _binding_scalar(x) -> Scalar:
    s = Scalar.coerce(x)
    if not s.is_numeric():
        raise ValueError(f"binding value {x!r} is not an exact number")
    return s


def substitute(ctx: Context, e: Expr, bindings: Mapping) -> Expr:
    """Replace parameters by exact numbers; unbound parameters stay symbolic."""
    from .context import ParamKind

    values = {}
    for name, x in bindings.items():
        if not ctx.has_param(name):
            raise KeyError(f"{name!r} is not a declared parameter")
        if ctx.param_kind(name) is ParamKind.GRASSMANN:
            raise ValueError(f"Grassmann constant {name!r} cannot be bound to a number")
        values[name] = _binding_scalar(x)
    if not values:
        return e
    out: dict = {}
    for k, c in e._terms.items():
        _add_terms(out, [(k, c.substitute(values))])
    return Expr._raw(ctx, out)


def expr_equal(ctx: Context, a, b) -> bool:
    """Structural equality of canonical forms.

    For symbols with reordering disabled this is syntactic equality only.
    """
    a = a if isinstance(a, Expr) else const(ctx, a)
    b = b if isinstance(b, Expr) else const(ctx, b)
    return canonicalize(ctx, a) == canonicalize(ctx, b)
