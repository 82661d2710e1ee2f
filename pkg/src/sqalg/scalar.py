"""Exact commutative scalar ring used for operator coefficients.

A :class:`Scalar` is a finite sum of monomials.  Each monomial is a rational
number times ``i**k`` (k in {0, 1}) times ``sqrt(r)`` (r a square-free
positive integer) times a product of parameter powers times a product of
Kronecker deltas.  All arithmetic is exact and every value has a unique
normal form, so structural equality is semantic equality.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Union

Index = Union[int, str]

UP = 1
DO = 0


class _Null:
    """Placeholder for an unspecified quantum number in a ket or bra."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Null"

    def __reduce__(self):
        return (_Null, ())


NULL = _Null()


def index_key(i) -> tuple:
    """Total order on indexes: integers, then symbolic atoms, then Null."""
    if i is NULL:
        return (2, "")
    if isinstance(i, int):
        return (0, i)
    return (1, i)


def is_symbolic(i) -> bool:
    return isinstance(i, str)


class ParamAtom(NamedTuple):
    name: str
    indexes: tuple = ()
    conj: bool = False

    def key(self):
        return (self.name, tuple(index_key(i) for i in self.indexes), self.conj)


class Mono(NamedTuple):
    """Monomial key; the rational coefficient is stored next to it."""

    i: int = 0
    rad: int = 1
    params: tuple = ()  # ((ParamAtom, power), ...) sorted by atom key
    deltas: tuple = ()  # ((rep, member), ...) canonical partition form

    def key(self):
        return (
            tuple((a.key(), p) for a, p in self.params),
            tuple((index_key(a), index_key(b)) for a, b in self.deltas),
            self.rad,
            self.i,
        )

    @property
    def is_numeric(self):
        return not self.params and not self.deltas


UNIT = Mono()


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, r)`` with ``n == s*s*r`` and ``r`` square-free."""
    if n <= 0:
        raise ValueError(f"expected a positive integer, got {n}")
    s, r = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            r *= p
        p += 1
    return s, r * n


def normalize_deltas(pairs: Iterable[tuple]) -> tuple | None:
    """Canonical form of a product of Kronecker deltas.

    A product of deltas is an equivalence relation on indexes.  Each class is
    written as deltas between its smallest member and every other member.
    Returns None when a class contains two different integer literals (the
    product vanishes).
    """
    parent: dict = {}

    def find(x):
        root = x
        while parent.setdefault(root, root) != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    classes: dict = {}
    for x in list(parent):
        classes.setdefault(find(x), []).append(x)
    out = []
    for members in classes.values():
        if len(members) < 2:
            continue
        if sum(1 for m in members if isinstance(m, int)) > 1:
            return None
        members.sort(key=index_key)
        rep = members[0]
        out.extend((rep, m) for m in members[1:])
    out.sort(key=lambda p: (index_key(p[0]), index_key(p[1])))
    return tuple(out)


def delta_map(deltas: tuple) -> dict:
    """Map every non-representative index of a delta product to its class representative."""
    return {m: rep for rep, m in deltas}


def _merge_params(items: Iterable[tuple]) -> tuple:
    acc: dict = {}
    for atom, power in items:
        acc[atom] = acc.get(atom, 0) + power
    return tuple(sorted(((a, p) for a, p in acc.items() if p), key=lambda ap: ap[0].key()))


def _map_params(params: tuple, mapping: Mapping) -> tuple:
    if not mapping:
        return params
    changed = False
    out = []
    for atom, power in params:
        idx = tuple(mapping.get(i, i) for i in atom.indexes)
        if idx != atom.indexes:
            changed = True
            atom = atom._replace(indexes=idx)
        out.append((atom, power))
    return _merge_params(out) if changed else params


def _mono_mul(a: Mono, b: Mono) -> tuple[Fraction, Mono] | None:
    if a is UNIT or a == UNIT:
        return Fraction(1), b
    if b == UNIT:
        return Fraction(1), a
    factor = Fraction(1)
    i = a.i + b.i
    if i >= 2:
        i -= 2
        factor = -factor
    rad = a.rad * b.rad
    if a.rad > 1 and b.rad > 1:
        g = math.gcd(a.rad, b.rad)
        factor *= g
        rad //= g * g
    if a.deltas and b.deltas:
        deltas = normalize_deltas(a.deltas + b.deltas)
        if deltas is None:
            return None
    else:
        deltas = a.deltas or b.deltas
    params = _merge_params(a.params + b.params) if (a.params and b.params) else (a.params or b.params)
    params = _map_params(params, delta_map(deltas))
    return factor, Mono(i, rad, params, deltas)


Number = Union[int, Fraction, complex]


class Scalar:
    """Element of the exact coefficient ring; immutable."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Mono, Fraction] | None = None):
        self._terms = {m: Fraction(q) for m, q in (terms or {}).items() if q}
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def _raw(cls, terms: dict) -> "Scalar":
        s = cls.__new__(cls)
        s._terms = terms
        s._hash = None
        return s

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, (int, Fraction)):
            return cls._raw({UNIT: Fraction(x)}) if x else ZERO
        if isinstance(x, complex):
            re, im = Fraction(x.real), Fraction(x.imag)
            terms = {}
            if re:
                terms[UNIT] = re
            if im:
                terms[Mono(i=1)] = im
            return cls._raw(terms)
        if isinstance(x, float):
            raise TypeError("floats are not exact; pass a Fraction or an int")
        raise TypeError(f"cannot convert {type(x).__name__} to Scalar")

    @classmethod
    def param(cls, name: str, indexes: tuple = (), conj: bool = False, power: int = 1) -> "Scalar":
        return cls._raw({Mono(params=((ParamAtom(name, tuple(indexes), conj), power),)): Fraction(1)})

    @classmethod
    def delta(cls, a, b) -> "Scalar":
        if a is NULL or b is NULL:
            raise ValueError("Null slot compared against a value")
        d = normalize_deltas([(a, b)])
        if d is None:
            return ZERO
        if not d:
            return ONE
        return cls._raw({Mono(deltas=d): Fraction(1)})

    @classmethod
    def deltas(cls, xs: Iterable, ys: Iterable) -> "Scalar":
        xs, ys = tuple(xs), tuple(ys)
        if len(xs) != len(ys):
            return ZERO
        d = normalize_deltas(zip(xs, ys))
        if d is None:
            return ZERO
        if not d:
            return ONE
        return cls._raw({Mono(deltas=d): Fraction(1)})

    @classmethod
    def sqrt(cls, q) -> "Scalar":
        """Exact square root of a non-negative rational."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        if q == 0:
            return ZERO
        s, r = squarefree_split(q.numerator * q.denominator)
        return cls._raw({Mono(rad=r): Fraction(s, q.denominator)})

    # -- inspection ---------------------------------------------------------

    def monomials(self) -> Iterator[tuple[Mono, Fraction]]:
        return iter(sorted(self._terms.items(), key=lambda mq: mq[0].key()))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_numeric(self) -> bool:
        return all(m.is_numeric for m in self._terms)

    def is_rational(self) -> bool:
        return all(m == UNIT for m in self._terms)

    def has_deltas(self) -> bool:
        return any(m.deltas for m in self._terms)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self._terms.get(UNIT, Fraction(0))

    def atoms(self) -> set:
        """Symbolic index atoms appearing in parameter indexes and deltas."""
        out = set()
        for m in self._terms:
            for atom, _ in m.params:
                out.update(i for i in atom.indexes if isinstance(i, str))
            for a, b in m.deltas:
                out.update(i for i in (a, b) if isinstance(i, str))
        return out

    def param_names(self) -> set:
        return {atom.name for m in self._terms for atom, _ in m.params}

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self._terms == other._terms
        try:
            return self._terms == Scalar.coerce(other)._terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        terms = dict(self._terms)
        for m, q in other._terms.items():
            v = terms.get(m, 0) + q
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        return Scalar._raw(terms)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw({m: -q for m, q in self._terms.items()})

    def __sub__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def scale(self, q) -> "Scalar":
        q = Fraction(q)
        if not q:
            return ZERO
        if q == 1:
            return self
        return Scalar._raw({m: v * q for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        if len(other._terms) == 1 and UNIT in other._terms:
            return self.scale(other._terms[UNIT])
        if len(self._terms) == 1 and UNIT in self._terms:
            return other.scale(self._terms[UNIT])
        terms: dict = {}
        for ma, qa in self._terms.items():
            for mb, qb in other._terms.items():
                r = _mono_mul(ma, mb)
                if r is None:
                    continue
                f, m = r
                v = terms.get(m, 0) + qa * qb * f
                if v:
                    terms[m] = v
                else:
                    terms.pop(m, None)
        return Scalar._raw(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> "Scalar":
        """Multiplicative inverse of a numeric single monomial or Gaussian rational."""
        if not self._terms:
            raise ZeroDivisionError("inverse of zero")
        if len(self._terms) == 1:
            (m, q), = self._terms.items()
            if m.is_numeric:
                # 1/(q i^k sqrt(r)) = sqrt(r)/(q r) * i^-k
                inv = Scalar._raw({Mono(rad=m.rad): 1 / (q * m.rad)})
                return -(inv * I) if m.i else inv
        if all(m.is_numeric and m.rad == 1 for m in self._terms):
            re = self._terms.get(UNIT, Fraction(0))
            im = self._terms.get(Mono(i=1), Fraction(0))
            n = re * re + im * im
            return Scalar.coerce(re / n) - I * (im / n)
        raise ValueError(f"cannot invert {self!r} exactly")

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        return self * Scalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    # -- transformations ----------------------------------------------------

    def conj(self, complex_params: Callable[[str], bool] | frozenset | set = frozenset()) -> "Scalar":
        """Complex conjugate; parameters named in ``complex_params`` get a conjugation mark."""
        is_complex = complex_params if callable(complex_params) else complex_params.__contains__
        terms: dict = {}
        for m, q in self._terms.items():
            if m.i:
                q = -q
            if m.params and any(is_complex(a.name) for a, _ in m.params):
                params = _merge_params(
                    (a._replace(conj=not a.conj) if is_complex(a.name) else a, p) for a, p in m.params
                )
                m = m._replace(params=params)
            terms[m] = terms.get(m, 0) + q
        return Scalar._raw({m: q for m, q in terms.items() if q})

    def map_indexes(self, fn: Callable) -> "Scalar":
        """Rename index atoms in parameter indexes and deltas."""
        out = ZERO
        for m, q in self._terms.items():
            params = tuple((a._replace(indexes=tuple(fn(i) for i in a.indexes)), p) for a, p in m.params)
            deltas = normalize_deltas((fn(a), fn(b)) for a, b in m.deltas)
            if deltas is None:
                continue
            params = _map_params(_merge_params(params), delta_map(deltas))
            out = out + Scalar._raw({Mono(m.i, m.rad, params, deltas): q})
        return out

    def substitute(self, bindings: Mapping[str, "Scalar"]) -> "Scalar":
        """Replace parameters by numeric Scalars; conjugation marks conjugate the value."""
        if not bindings:
            return self
        out = ZERO
        for m, q in self._terms.items():
            keep = []
            value = Scalar._raw({Mono(m.i, m.rad, (), m.deltas): q})
            for atom, power in m.params:
                if atom.name in bindings:
                    v = bindings[atom.name]
                    if atom.conj:
                        v = v.conj(lambda _: True)
                    value = value * v ** power
                else:
                    keep.append((atom, power))
            if keep:
                value = value * Scalar._raw({Mono(params=tuple(keep)): Fraction(1)})
            out = out + value
        return out

    def split_monomials(self) -> list["Scalar"]:
        return [Scalar._raw({m: q}) for m, q in self.monomials()]

    def to_complex(self) -> complex:
        if not self.is_numeric():
            raise ValueError(f"{self!r} still contains parameters or deltas")
        total = 0j
        for m, q in self._terms.items():
            v = float(q) * math.sqrt(m.rad)
            total += 1j * v if m.i else v
        return total

    def __repr__(self):
        from .dsl import format_scalar_ascii

        return format_scalar_ascii(self)


ZERO = Scalar._raw({})
ONE = Scalar._raw({UNIT: Fraction(1)})
I = Scalar._raw({Mono(i=1): Fraction(1)})
