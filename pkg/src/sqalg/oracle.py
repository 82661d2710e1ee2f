"""Brute-force Fock-space matrices (Jordan-Wigner), used as the test oracle.

The basis of the 2^n dimensional space is ordered by the ONR bit pattern read
as a binary number, orbital 1 being the most significant bit.  Matrices hold
exact :class:`Scalar` entries so symbolic parameters survive.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

from .algebra import Expr, fermi_occupied
from .context import MAX_ORBITALS, Context, OrbitalLimitError, Statistics, Vacuum
from .factors import CR, Op
from .scalar import ONE, ZERO, Scalar

_SIGMA = np.array([[0, 1], [0, 0]], dtype=np.int64)  # lowering: |1> -> |0>
_Z = np.array([[1, 0], [0, -1]], dtype=np.int64)
_ID = np.eye(2, dtype=np.int64)


def _check_size(ctx: Context) -> int:
    n = len(ctx.orbitals)
    if n > MAX_ORBITALS:
        raise OrbitalLimitError(f"{n} orbitals exceed the cap of {MAX_ORBITALS}")
    return n


def jw_annihilator(n: int, p: int) -> np.ndarray:
    """Integer matrix of c_p (p zero-based) on n orbitals."""
    mats = [_Z] * p + [_SIGMA] + [_ID] * (n - p - 1)
    return reduce(np.kron, mats, np.ones((1, 1), dtype=np.int64))


def _op_matrix(ctx: Context, op: Op) -> np.ndarray:
    cache = ctx.cache("oracle")
    m = cache.get(op)
    if m is not None:
        return m
    d = ctx.decl(op.symbol)
    if d.statistics is not Statistics.DIRAC:
        raise ValueError(f"oracle supports Dirac fermions only, got {op.symbol}")
    if any(isinstance(i, str) for i in op.indexes):
        raise ValueError(f"symbolic index in {op.symbol}{op.indexes}")
    p = ctx.orbital_position(op.symbol, op.indexes)
    m = jw_annihilator(len(ctx.orbitals), p)
    if op.kind == CR:
        m = m.T.copy()
    cache[op] = m
    return m


def word_matrix(ctx: Context, word) -> np.ndarray:
    n = _check_size(ctx)
    m = np.eye(2 ** n, dtype=np.int64)
    for f in word:
        if not isinstance(f, Op):
            raise ValueError(f"oracle cannot represent factor {f!r}")
        m = m @ _op_matrix(ctx, f)
    return m


class DenseOp:
    """2^n x 2^n matrix of exact scalars."""

    def __init__(self, ctx: Context, data: np.ndarray):
        self.ctx = ctx
        self.data = data

    @property
    def shape(self):
        return self.data.shape

    def __eq__(self, other):
        if not isinstance(other, DenseOp):
            return NotImplemented
        return self.data.shape == other.data.shape and all(
            a == b for a, b in zip(self.data.flat, other.data.flat)
        )

    def __add__(self, other):
        return DenseOp(self.ctx, self.data + other.data)

    def __sub__(self, other):
        return DenseOp(self.ctx, self.data - other.data)

    def __matmul__(self, other):
        return DenseOp(self.ctx, _matmul(self.data, other.data))

    def __getitem__(self, ij):
        return self.data[ij]

    def dagger(self) -> "DenseOp":
        cf = self.ctx.is_complex
        return DenseOp(self.ctx, np.vectorize(lambda s: s.conj(cf), otypes=[object])(self.data.T))

    def is_zero(self) -> bool:
        return all(not s for s in self.data.flat)

    def substitute(self, bindings) -> "DenseOp":
        vals = {k: Scalar.coerce(v) for k, v in bindings.items()}
        return DenseOp(self.ctx, np.vectorize(lambda s: s.substitute(vals), otypes=[object])(self.data))

    def to_numpy(self, bindings=None) -> np.ndarray:
        m = self.substitute(bindings) if bindings else self
        return np.vectorize(lambda s: s.to_complex(), otypes=[complex])(m.data)


def _matmul(a, b):
    n, k = a.shape
    m = b.shape[1]
    out = np.empty((n, m), dtype=object)
    for i in range(n):
        for j in range(m):
            acc = ZERO
            for t in range(k):
                x, y = a[i, t], b[t, j]
                if x and y:
                    acc = acc + x * y
            out[i, j] = acc
    return out


def zeros(ctx: Context) -> np.ndarray:
    dim = 2 ** _check_size(ctx)
    out = np.empty((dim, dim), dtype=object)
    out.fill(ZERO)
    return out


def oracle_matrix(ctx: Context, e: Expr) -> DenseOp:
    """Dense matrix of ``e`` built from Jordan-Wigner operator matrices."""
    out = zeros(ctx)
    for dummies, word, coeff in e.items():
        if dummies:
            raise ValueError("symbolic sums cannot be represented by the oracle")
        m = word_matrix(ctx, word)
        for i, j in zip(*np.nonzero(m)):
            out[i, j] = out[i, j] + coeff.scale(int(m[i, j]))
    return DenseOp(ctx, out)


def bits_index(bits) -> int:
    v = 0
    for b in bits:
        v = 2 * v + int(b)
    return v


def index_bits(i: int, n: int) -> tuple:
    return tuple((i >> (n - 1 - p)) & 1 for p in range(n))


def vacuum_bits(ctx: Context, fermi_sea: bool | None = None) -> tuple:
    """Reference state: empty, or negative momenta filled.

    ``fermi_sea=None`` follows each symbol's declared vacuum; True fills the
    sea for every Dirac orbital.
    """
    bits = []
    for sym, idx in ctx.orbitals:
        sea = ctx.decl(sym).vacuum is Vacuum.FERMI_SEA if fermi_sea is None else fermi_sea
        bits.append(int(sea and fermi_occupied(ctx, Op(sym, CR, idx))))
    return tuple(bits)


def oracle_vev(ctx: Context, e: Expr, fermi_sea: bool | None = None) -> Scalar:
    """<0| M(e) |0> for the empty or Fermi-sea reference state."""
    v = bits_index(vacuum_bits(ctx, fermi_sea))
    acc = ZERO
    for dummies, word, coeff in e.items():
        if dummies:
            raise ValueError("symbolic sums cannot be represented by the oracle")
        # column of the vacuum only: cheaper than the full matrix
        n = _check_size(ctx)
        col = np.zeros(2 ** n, dtype=np.int64)
        col[v] = 1
        for f in reversed(word):
            if not isinstance(f, Op):
                raise ValueError(f"oracle cannot represent factor {f!r}")
            col = _op_matrix(ctx, f) @ col
        if col[v]:
            acc = acc + coeff.scale(int(col[v]))
    return acc


def oracle_identity(ctx: Context) -> DenseOp:
    out = zeros(ctx)
    for i in range(out.shape[0]):
        out[i, i] = ONE
    return DenseOp(ctx, out)


__all__ = [
    "DenseOp", "oracle_matrix", "oracle_vev", "oracle_identity", "jw_annihilator", "word_matrix",
    "bits_index", "index_bits", "vacuum_bits",
]
