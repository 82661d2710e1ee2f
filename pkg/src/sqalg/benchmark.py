"""Timing of canonicalization for long alternating operator strings."""

from __future__ import annotations

import time

from .algebra import Expr, canonicalize, literal
from .context import Context, ContextBuilder
from .factors import AN, CR, Op


def alternating_string(ctx: Context, n: int, symbol: str = "c") -> Expr:
    """c(k0) c+(k1) c(k2) ... with n distinct symbolic indexes (not canonical)."""
    return literal(ctx, [Op(symbol, AN if i % 2 == 0 else CR, (f"k{i}",)) for i in range(n)])


def time_canonicalization(lengths, repeat: int = 1) -> list:
    """[(length, number of result terms, best wall time in seconds)]."""
    b = ContextBuilder()
    b.fermion("c")
    ctx = b.freeze()
    rows = []
    for n in lengths:
        best, size = float("inf"), 0
        for _ in range(repeat):
            ctx._cache.clear()
            e = alternating_string(ctx, n)
            t0 = time.perf_counter()
            r = canonicalize(ctx, e)
            best = min(best, time.perf_counter() - t0)
            size = len(r)
        rows.append((n, size, best))
    return rows
