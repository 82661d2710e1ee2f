"""Non-commuting factor types that make up the words of a term."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .scalar import NULL, index_key

CR = 0
AN = 1


@dataclass(frozen=True)
class Op:
    """Second-quantization operator.  ``kind`` is CR/AN, or None for Majorana."""

    symbol: str
    kind: int | None
    indexes: tuple = ()

    def map_indexes(self, fn: Callable) -> "Op":
        return Op(self.symbol, self.kind, tuple(fn(i) for i in self.indexes))

    def dagger(self) -> "Op":
        if self.kind is None:
            return self
        return Op(self.symbol, 1 - self.kind, self.indexes)


@dataclass(frozen=True)
class Grassmann:
    """Anticommuting constant."""

    name: str
    indexes: tuple = ()
    conj: bool = False

    def map_indexes(self, fn):
        return Grassmann(self.name, tuple(fn(i) for i in self.indexes), self.conj)

    def dagger(self):
        return Grassmann(self.name, self.indexes, not self.conj)


@dataclass(frozen=True)
class Ket:
    """Dirac ket with quantum-number slots; a slot may be NULL."""

    slots: tuple

    def map_indexes(self, fn):
        return Ket(tuple(s if s is NULL else fn(s) for s in self.slots))

    def dagger(self):
        return Bra(self.slots)


@dataclass(frozen=True)
class Bra:
    slots: tuple

    def map_indexes(self, fn):
        return Bra(tuple(s if s is NULL else fn(s) for s in self.slots))

    def dagger(self):
        return Ket(self.slots)


@dataclass(frozen=True)
class VcKet:
    """Occupation-number vector over the context's registered orbitals."""

    bits: tuple

    def map_indexes(self, fn):
        return self

    def dagger(self):
        return VcBra(self.bits)


@dataclass(frozen=True)
class VcBra:
    bits: tuple

    def map_indexes(self, fn):
        return self

    def dagger(self):
        return VcKet(self.bits)


STATE_TYPES = (Bra, VcBra, Ket, VcKet)
KET_TYPES = (Ket, VcKet)
BRA_TYPES = (Bra, VcBra)


def factor_atoms(f) -> set:
    """Symbolic index atoms of a factor."""
    if isinstance(f, (Op, Grassmann)):
        return {i for i in f.indexes if isinstance(i, str)}
    if isinstance(f, (Ket, Bra)):
        return {s for s in f.slots if isinstance(s, str)}
    return set()


_TYPE_RANK = {Grassmann: 0, Op: 1, Bra: 2, VcBra: 3, Ket: 4, VcKet: 5}


def factor_repr_key(f) -> tuple:
    """Context-free deterministic sort key, used only for ordering printed terms."""
    rank = _TYPE_RANK[type(f)]
    if isinstance(f, Op):
        return (rank, f.symbol, -1 if f.kind is None else f.kind, tuple(index_key(i) for i in f.indexes))
    if isinstance(f, Grassmann):
        return (rank, f.name, 0, tuple(index_key(i) for i in f.indexes) + ((0, int(f.conj)),))
    if isinstance(f, (Ket, Bra)):
        return (rank, "", 0, tuple(index_key(s) for s in f.slots))
    return (rank, "", 0, tuple((0, b) for b in f.bits))
