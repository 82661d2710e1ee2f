"""Symbol and parameter declarations.

A :class:`ContextBuilder` collects declarations; :meth:`ContextBuilder.freeze`
returns an immutable :class:`Context` that every algebra operation reads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

from .scalar import DO, UP

RESERVED = frozenset(
    {
        "I", "UP", "DO", "Null", "sqrt", "conj", "delta", "sum", "ket", "bra", "vc", "vcbra",
        "number", "hop", "hubbard", "spinx", "spiny", "spinz", "splus", "sminus",
        "snegx", "snegy", "snegz", "spinspin", "projector", "projector0",
    }
)

MAX_ORBITALS = 12


class OrbitalLimitError(ValueError):
    """Raised when a Fock space would exceed :data:`MAX_ORBITALS` orbitals."""


class Statistics(str, enum.Enum):
    DIRAC = "dirac-fermion"
    MAJORANA = "majorana-fermion"
    BOSON = "boson"


class Vacuum(str, enum.Enum):
    EMPTY_BAND = "empty-band"
    FERMI_SEA = "fermi-sea"


class ParamKind(str, enum.Enum):
    INTEGER = "integer"
    REAL = "real"
    COMPLEX = "complex"
    GRASSMANN = "grassmann-constant"


@dataclass(frozen=True)
class SymbolDecl:
    name: str
    statistics: Statistics = Statistics.DIRAC
    vacuum: Vacuum = Vacuum.EMPTY_BAND
    reorder: bool = True
    spin: Fraction | None = None
    arity: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "statistics", Statistics(self.statistics))
        object.__setattr__(self, "vacuum", Vacuum(self.vacuum))
        if not self.name.isidentifier():
            raise ValueError(f"symbol name {self.name!r} is not an identifier")
        if self.vacuum is Vacuum.FERMI_SEA and self.statistics is not Statistics.DIRAC:
            raise ValueError(f"{self.name}: fermi-sea vacuum requires a Dirac fermion")
        if self.spin is not None:
            s = Fraction(self.spin)
            if s < 0 or (2 * s).denominator != 1:
                raise ValueError(f"{self.name}: spin must be a non-negative half-integer")
            if self.statistics is not Statistics.DIRAC:
                raise ValueError(f"{self.name}: only Dirac fermions carry a spin index")
            object.__setattr__(self, "spin", s)
            if self.arity is not None and self.arity < 1:
                raise ValueError(f"{self.name}: spinful symbols need at least the spin index")

    @property
    def is_fermion(self) -> bool:
        return self.statistics is not Statistics.BOSON

    @property
    def spin_values(self) -> tuple:
        """Projection slot values, highest projection first."""
        if self.spin is None:
            return ()
        return tuple(range(int(2 * self.spin), -1, -1))


class Site(NamedTuple):
    """A symbol together with its site indexes (everything but the spin slot)."""

    symbol: str
    index: tuple = ()

    @classmethod
    def of(cls, s) -> "Site":
        if isinstance(s, Site):
            return s
        if isinstance(s, str):
            return cls(s, ())
        symbol, *idx = s
        if len(idx) == 1 and isinstance(idx[0], tuple):
            idx = idx[0]
        return cls(symbol, tuple(idx))


@dataclass(frozen=True, eq=False)
class Context:
    """Immutable registry of symbols, parameters and the ONR orbital list.

    Equality and hashing are by identity; expressions from different
    contexts never mix.
    """

    symbols: tuple = ()
    params: tuple = ()
    orbitals: tuple = ()
    fermi_level_occupied: bool = False
    _symbols: dict = field(default_factory=dict, repr=False)
    _params: dict = field(default_factory=dict, repr=False)
    _orbital_pos: dict = field(default_factory=dict, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._symbols.update((d.name, d) for d in self.symbols)
        self._params.update(self.params)
        for n, orb in enumerate(self.orbitals):
            if orb in self._orbital_pos:
                raise ValueError(f"orbital {orb} registered twice")
            self._orbital_pos[orb] = n
        if len(self.orbitals) > MAX_ORBITALS:
            raise OrbitalLimitError(f"{len(self.orbitals)} orbitals exceed the cap of {MAX_ORBITALS}")
        for sym, _ in self.orbitals:
            if sym not in self._symbols or self._symbols[sym].statistics is not Statistics.DIRAC:
                raise ValueError(f"orbital symbol {sym!r} is not a declared Dirac fermion")

    def decl(self, name: str) -> SymbolDecl:
        try:
            return self._symbols[name]
        except KeyError:
            raise KeyError(f"undeclared symbol {name!r}") from None

    def has_symbol(self, name: str) -> bool:
        return name in self._symbols

    def has_param(self, name: str) -> bool:
        return name in self._params

    def param_kind(self, name: str) -> ParamKind:
        try:
            return self._params[name]
        except KeyError:
            raise KeyError(f"undeclared parameter {name!r}") from None

    def is_complex(self, name: str) -> bool:
        return self._params.get(name) is ParamKind.COMPLEX

    def orbital_position(self, symbol: str, indexes: tuple) -> int:
        try:
            return self._orbital_pos[(symbol, tuple(indexes))]
        except KeyError:
            raise ValueError(f"operator {symbol}{tuple(indexes)} acts on an unregistered orbital") from None

    def has_orbital(self, symbol: str, indexes: tuple) -> bool:
        return (symbol, tuple(indexes)) in self._orbital_pos

    def with_orbitals(self, orbitals: Iterable) -> "Context":
        """Copy of this context with a new ONR orbital list (fresh caches)."""
        orbitals = tuple((s, tuple(i)) for s, i in orbitals)
        return Context(self.symbols, self.params, orbitals, self.fermi_level_occupied)

    def with_sites(self, sites: Iterable) -> "Context":
        return self.with_orbitals(site_orbitals(self, sites))

    def cache(self, name: str) -> dict:
        return self._cache.setdefault(name, {})

    # convenience constructors -------------------------------------------

    def cr(self, symbol: str, *indexes):
        from .algebra import operator
        from .factors import CR

        return operator(self, symbol, CR, *indexes)

    def an(self, symbol: str, *indexes):
        from .algebra import operator
        from .factors import AN

        return operator(self, symbol, AN, *indexes)

    def majorana(self, symbol: str, *indexes):
        from .algebra import operator

        return operator(self, symbol, None, *indexes)

    def param(self, name: str, *indexes):
        from .algebra import param

        return param(self, name, *indexes)

    def const(self, x):
        from .algebra import const

        return const(self, x)

    def parse(self, text: str):
        from .dsl import parse

        return parse(self, text)


def site_orbitals(ctx: Context, sites: Iterable) -> list:
    """Site-major, spin-minor orbital list with the highest projection first."""
    out = []
    for s in sites:
        site = Site.of(s)
        d = ctx.decl(site.symbol)
        if d.spin is None:
            out.append((site.symbol, site.index))
        else:
            out.extend((site.symbol, site.index + (v,)) for v in d.spin_values)
    return out


class ContextBuilder:
    """Mutable collector of declarations; call :meth:`freeze` when done."""

    def __init__(self):
        self._symbols: dict[str, SymbolDecl] = {}
        self._params: dict[str, ParamKind] = {}
        self._orbitals: list = []
        self._frozen = False

    def _check_open(self):
        if self._frozen:
            raise RuntimeError("context already frozen")

    def _check_name(self, name):
        if name in RESERVED:
            raise ValueError(f"{name!r} is a reserved word")

    def declare_symbol(self, decl: SymbolDecl | str, **kwargs) -> SymbolDecl:
        self._check_open()
        if isinstance(decl, str):
            decl = SymbolDecl(decl, **kwargs)
        self._check_name(decl.name)
        old = self._symbols.get(decl.name)
        if old is not None and old != decl:
            raise ValueError(f"symbol {decl.name!r} already declared with different properties")
        if decl.name in self._params:
            raise ValueError(f"{decl.name!r} already declared as a parameter")
        self._symbols[decl.name] = decl
        return decl

    def declare_param(self, name: str, kind: ParamKind | str = ParamKind.REAL) -> str:
        self._check_open()
        self._check_name(name)
        kind = ParamKind(kind)
        if not name.isidentifier():
            raise ValueError(f"parameter name {name!r} is not an identifier")
        old = self._params.get(name)
        if old is not None and old is not kind:
            raise ValueError(f"parameter {name!r} already declared as {old.value}")
        if name in self._symbols:
            raise ValueError(f"{name!r} already declared as an operator symbol")
        self._params[name] = kind
        return name

    def fermion(self, name, **kw):
        return self.declare_symbol(SymbolDecl(name, Statistics.DIRAC, **kw))

    def boson(self, name, **kw):
        return self.declare_symbol(SymbolDecl(name, Statistics.BOSON, **kw))

    def majorana(self, name, **kw):
        return self.declare_symbol(SymbolDecl(name, Statistics.MAJORANA, **kw))

    def orbitals(self, orbitals: Iterable) -> None:
        self._check_open()
        self._orbitals = [(s, tuple(i)) for s, i in orbitals]

    def sites(self, sites: Iterable) -> None:
        """Register the ONR orbitals of ``sites`` (site-major, UP before DO)."""
        self._check_open()
        tmp = Context(tuple(self._symbols.values()), tuple(self._params.items()))
        self._orbitals = site_orbitals(tmp, sites)

    def freeze(self, fermi_level_occupied: bool = False) -> Context:
        self._frozen = True
        return Context(
            tuple(self._symbols.values()),
            tuple(self._params.items()),
            tuple(self._orbitals),
            fermi_level_occupied,
        )


__all__ = [
    "Context", "ContextBuilder", "SymbolDecl", "Statistics", "Vacuum", "ParamKind", "Site",
    "site_orbitals", "UP", "DO", "MAX_ORBITALS", "OrbitalLimitError",
]
