"""Fock-space bases with conserved charge and spin quantum numbers.

Q counts particles relative to half filling, Q = n - n_sites.  ``qszbasis``
labels subspaces by (Q, Sz); ``qsbasis`` by (Q, S) and lists only the
highest-weight member (Sz = S) of each multiplet.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import sympy

from .algebra import Expr, vc
from .context import Context, Site, site_orbitals
from .macros import total_spin, _require_half
from .scalar import ONE, ZERO, Scalar, UP
from .states import vc_action

__all__ = ["BasisState", "BasisSet", "qszbasis", "qsbasis", "sector_states", "check_sites"]


@dataclass(frozen=True)
class BasisState:
    """Normalised linear combination of ONR kets: ((bits, coeff), ...) sorted by bits."""

    components: tuple

    @classmethod
    def single(cls, bits) -> "BasisState":
        return cls(((tuple(bits), ONE),))

    @classmethod
    def from_dict(cls, d: dict) -> "BasisState":
        return cls(tuple(sorted((b, c) for b, c in d.items() if c)))

    def as_dict(self) -> dict:
        return dict(self.components)

    def to_expr(self, ctx: Context) -> Expr:
        out = Expr(ctx)
        for bits, c in self.components:
            out = out + vc(ctx, *bits).scale(c)
        return out

    def norm2(self) -> Scalar:
        acc = ZERO
        for _, c in self.components:
            acc = acc + c.conj(lambda _: True) * c
        return acc


def dot(u: dict, w: dict, conj=lambda s: s.conj(lambda _: True)) -> Scalar:
    """<u|w> for {bits: coeff} vectors."""
    if len(u) > len(w):
        acc = ZERO
        for b, y in w.items():
            x = u.get(b)
            if x is not None:
                acc = acc + conj(x) * y
        return acc
    acc = ZERO
    for b, x in u.items():
        y = w.get(b)
        if y is not None:
            acc = acc + conj(x) * y
    return acc


@dataclass(frozen=True)
class BasisSet:
    """List of (quantum numbers, states) pairs."""

    kind: str  # "qs" or "qsz"
    sites: tuple
    subspaces: tuple

    def __iter__(self):
        return iter(self.subspaces)

    def __len__(self):
        return len(self.subspaces)

    def labels(self) -> list:
        return [qn for qn, _ in self.subspaces]

    def dims(self) -> dict:
        return {qn: len(states) for qn, states in self.subspaces}

    def states(self, qn) -> tuple:
        for q, st in self.subspaces:
            if q == qn:
                return st
        raise KeyError(qn)

    def degeneracy(self, qn) -> int:
        return int(2 * qn[1] + 1) if self.kind == "qs" else 1

    def total_dimension(self) -> int:
        return sum(self.degeneracy(qn) * len(st) for qn, st in self.subspaces)


def check_sites(ctx: Context, sites) -> tuple:
    """Validate spin-1/2 sites and the registered orbital list."""
    sites = tuple(Site.of(s) for s in sites)
    if not sites:
        raise ValueError("basis needs at least one site")
    for s in sites:
        _require_half(ctx, s)
    expected = tuple(site_orbitals(ctx, sites))
    if tuple(ctx.orbitals) != expected:
        raise ValueError(
            "context orbitals do not match the basis sites; build the context with "
            "ContextBuilder.sites(...) or Context.with_sites(...)"
        )
    return sites


def _qn(ctx: Context, bits: tuple, n_sites: int) -> tuple:
    n = sum(bits)
    sz = Fraction(0)
    for b, (_, idx) in zip(bits, ctx.orbitals):
        if b:
            sz += Fraction(1, 2) if idx[-1] == UP else Fraction(-1, 2)
    return (n - n_sites, sz)


def sector_states(ctx: Context, sites) -> dict:
    """{(Q, Sz): [bits, ...]} with bits in ascending binary order."""
    sites = check_sites(ctx, sites)
    out: dict = {}
    for bits in product((0, 1), repeat=len(ctx.orbitals)):
        out.setdefault(_qn(ctx, bits, len(sites)), []).append(bits)
    return dict(sorted(out.items()))


def qszbasis(ctx: Context, sites) -> BasisSet:
    sites = check_sites(ctx, sites)
    sectors = sector_states(ctx, sites)
    subs = tuple((qn, tuple(BasisState.single(b) for b in bl)) for qn, bl in sectors.items())
    return BasisSet("qsz", sites, subs)


def _to_rational(s: Scalar) -> Fraction:
    if not s.is_rational():
        raise ValueError(f"S+ matrix entry {s!r} is not rational")
    return s.as_fraction()


def _gram_schmidt(vectors: list) -> list:
    """Rational Gram-Schmidt on lists of Fractions (no normalisation)."""
    out = []
    for v in vectors:
        w = list(v)
        for u in out:
            uu = sum(x * x for x in u)
            c = sum(a * b for a, b in zip(w, u)) / uu
            w = [a - c * b for a, b in zip(w, u)]
        if any(w):
            out.append(w)
    return out


def _normalise(vec: list, bits_list: list) -> BasisState:
    first = next(x for x in vec if x)
    if first < 0:
        vec = [-x for x in vec]
    n2 = sum(x * x for x in vec)
    inv = Scalar.sqrt(n2).inverse()
    return BasisState.from_dict({b: inv.scale(x) for b, x in zip(bits_list, vec) if x})


def qsbasis(ctx: Context, sites) -> BasisSet:
    """Highest-weight multiplet states from the nullspace of the total S+."""
    sites = check_sites(ctx, sites)
    sectors = sector_states(ctx, sites)
    splus = total_spin(ctx, sites, "+")
    subs = []
    for (q, sz), bl in sectors.items():
        if sz < 0:
            continue
        target = sectors.get((q, sz + 1), [])
        pos = {b: i for i, b in enumerate(target)}
        if target:
            m = sympy.zeros(len(target), len(bl))
            for j, b in enumerate(bl):
                for b2, c in vc_action(ctx, splus, b).items():
                    m[pos[b2], j] = sympy.Rational(_to_rational(c))
            null = [[Fraction(int(x.p), int(x.q)) for x in v] for v in m.nullspace()]
        else:
            null = [[Fraction(int(i == j)) for i in range(len(bl))] for j in range(len(bl))]
        vecs = _gram_schmidt(null)
        if vecs:
            subs.append(((q, sz), tuple(_normalise(v, bl) for v in vecs)))
    subs.sort(key=lambda t: t[0])
    return BasisSet("qs", sites, tuple(subs))
