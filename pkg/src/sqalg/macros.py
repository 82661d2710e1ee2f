"""Generators for standard operators: occupancy, hopping, Hubbard term, spin."""

from __future__ import annotations

from fractions import Fraction

from .algebra import Expr, conj, const, nc, operator
from .context import Context, Site, Statistics
from .factors import AN, CR
from .scalar import DO, UP, I, Scalar

__all__ = [
    "number", "hop", "hubbard", "spin_component", "spinx", "spiny", "spinz", "splus", "sminus",
    "spinspin", "projector", "total_number", "total_spin", "PROJECTOR_KINDS",
]

PROJECTOR_KINDS = ("empty", "up", "down", "double", "single")


def _site(ctx: Context, s) -> tuple[Site, object]:
    site = Site.of(s)
    d = ctx.decl(site.symbol)
    if d.statistics is not Statistics.DIRAC:
        raise ValueError(f"{site.symbol} is not a Dirac fermion")
    return site, d


def _spinful(ctx, s):
    site, d = _site(ctx, s)
    if d.spin is None:
        raise ValueError(f"{site.symbol} is spinless")
    return site, d


def _cdag(ctx, site, *extra):
    return operator(ctx, site.symbol, CR, *site.index, *extra)


def _c(ctx, site, *extra):
    return operator(ctx, site.symbol, AN, *site.index, *extra)


def number(ctx: Context, s, spin=None) -> Expr:
    """Occupancy, summed over spin projections unless ``spin`` is given.

    ``s`` may also be an expression d (a linear combination of annihilators);
    the result is then conj(d) d.
    """
    if isinstance(s, Expr):
        return nc(ctx, conj(ctx, s), s)
    site, d = _site(ctx, s)
    if d.spin is None:
        if spin is not None:
            raise ValueError(f"{site.symbol} is spinless")
        return nc(ctx, _cdag(ctx, site), _c(ctx, site))
    values = d.spin_values
    if spin is not None:
        if spin not in values:
            raise ValueError(f"spin projection {spin} out of range for {site.symbol}")
        values = (spin,)
    out = Expr(ctx)
    for v in values:
        out = out + nc(ctx, _cdag(ctx, site, v), _c(ctx, site, v))
    return out


def hop(ctx: Context, s1, s2) -> Expr:
    """Hermitian hopping between two sites, summed over spin."""
    a, da = _site(ctx, s1)
    b, db = _site(ctx, s2)
    if da.spin != db.spin:
        raise ValueError(f"hop between {a.symbol} and {b.symbol} with different spin")
    values = da.spin_values or (None,)
    out = Expr(ctx)
    for v in values:
        ex = () if v is None else (v,)
        out = out + nc(ctx, _cdag(ctx, a, *ex), _c(ctx, b, *ex))
        out = out + nc(ctx, _cdag(ctx, b, *ex), _c(ctx, a, *ex))
    return out


def _require_half(ctx, s):
    site, d = _spinful(ctx, s)
    if d.spin != Fraction(1, 2):
        raise ValueError(f"{site.symbol} must be spin-1/2")
    return site, d


def hubbard(ctx: Context, s) -> Expr:
    """n_up n_down in canonical form."""
    site, _ = _require_half(ctx, s)
    return nc(ctx, number(ctx, site, UP), number(ctx, site, DO))


def _spin_matrix(S: Fraction, axis: str) -> dict:
    """{(v, v'): Scalar} entries of S_axis between projection slots v, v'."""
    n = int(2 * S)
    out = {}

    def ladder(m, up):
        x = S * (S + 1) - m * (m + 1 if up else m - 1)
        return Scalar.sqrt(x)

    for v in range(n + 1):
        m = v - S
        if axis == "z":
            if m:
                out[(v, v)] = Scalar.coerce(m)
        elif axis == "+":
            if v < n:
                out[(v + 1, v)] = ladder(m, True)
        elif axis == "-":
            if v > 0:
                out[(v - 1, v)] = ladder(m, False)
    if axis in ("x", "y"):
        p, mi = _spin_matrix(S, "+"), _spin_matrix(S, "-")
        half = Scalar.coerce(Fraction(1, 2))
        for k, x in p.items():
            out[k] = x * half if axis == "x" else x * half * (-I)
        for k, x in mi.items():
            out[k] = x * half if axis == "x" else x * half * I
    return out


_AXES = {"x": "x", "y": "y", "z": "z", "+": "+", "-": "-", "−": "-", "p": "+", "m": "-",
         "plus": "+", "minus": "-"}


def spin_component(ctx: Context, s, axis: str) -> Expr:
    """Sum over m, m' of c+_m (S_axis)_{m m'} c_m' for the symbol's spin S."""
    site, d = _spinful(ctx, s)
    try:
        ax = _AXES[axis]
    except KeyError:
        raise ValueError(f"unknown spin axis {axis!r}") from None
    out = Expr(ctx)
    for (v, w), x in _spin_matrix(d.spin, ax).items():
        out = out + nc(ctx, _cdag(ctx, site, v), _c(ctx, site, w)).scale(x)
    return out


def spinx(ctx, s):
    return spin_component(ctx, s, "x")


def spiny(ctx, s):
    return spin_component(ctx, s, "y")


def spinz(ctx, s):
    return spin_component(ctx, s, "z")


def splus(ctx, s):
    return spin_component(ctx, s, "+")


def sminus(ctx, s):
    return spin_component(ctx, s, "-")


def spinspin(ctx: Context, s1, s2) -> Expr:
    """S1 . S2."""
    out = Expr(ctx)
    for ax in "xyz":
        out = out + nc(ctx, spin_component(ctx, s1, ax), spin_component(ctx, s2, ax))
    return out


def projector(ctx: Context, s, kind: str = "empty") -> Expr:
    """Occupancy projector of a spin-1/2 site: empty, up, down, double or single."""
    site, _ = _require_half(ctx, s)
    one = const(ctx, 1)
    nu, nd = number(ctx, site, UP), number(ctx, site, DO)
    if kind in ("empty", "0"):
        return nc(ctx, one - nu, one - nd)
    if kind == "up":
        return nc(ctx, nu, one - nd)
    if kind == "down":
        return nc(ctx, nd, one - nu)
    if kind == "double":
        return nc(ctx, nu, nd)
    if kind == "single":
        return nc(ctx, nu, one - nd) + nc(ctx, nd, one - nu)
    raise ValueError(f"unknown projector kind {kind!r}; expected one of {PROJECTOR_KINDS}")


def total_number(ctx: Context, sites) -> Expr:
    out = Expr(ctx)
    for s in sites:
        out = out + number(ctx, s)
    return out


def total_spin(ctx: Context, sites, axis: str) -> Expr:
    out = Expr(ctx)
    for s in sites:
        out = out + spin_component(ctx, s, axis)
    return out
