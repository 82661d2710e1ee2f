"""Block matrices of operators over symmetry-adapted bases."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Expr
from .basis import BasisSet, BasisState, dot
from .context import Context
from .macros import total_spin
from .scalar import ZERO, Scalar
from .states import apply, inner, vc_action

__all__ = ["SymmetryError", "Block", "BlockMatrix", "matrix_element", "make_blocks", "expand_multiplets"]


class SymmetryError(ValueError):
    """The operator connects different subspaces of a symmetric basis."""


def _as_expr(ctx, s) -> Expr:
    return s.to_expr(ctx) if isinstance(s, BasisState) else s


def matrix_element(ctx: Context, bra, op: Expr, ket) -> Scalar:
    """<bra| op |ket> for basis states or ket expressions."""
    return inner(ctx, _as_expr(ctx, bra), apply(ctx, op, _as_expr(ctx, ket)))


@dataclass(frozen=True)
class Block:
    qn: tuple
    matrix: tuple  # rows of Scalars
    states: tuple

    @property
    def dim(self) -> int:
        return len(self.states)

    def to_numpy(self, bindings=None) -> np.ndarray:
        vals = {k: Scalar.coerce(v) for k, v in (bindings or {}).items()}
        m = np.empty((self.dim, self.dim), dtype=complex)
        for i, row in enumerate(self.matrix):
            for j, x in enumerate(row):
                m[i, j] = x.substitute(vals).to_complex()
        return m


@dataclass(frozen=True)
class BlockMatrix:
    kind: str
    blocks: tuple

    def __iter__(self):
        return iter(self.blocks)

    def __len__(self):
        return len(self.blocks)

    def labels(self) -> list:
        return [b.qn for b in self.blocks]

    def block(self, qn) -> Block:
        for b in self.blocks:
            if b.qn == qn:
                return b
        raise KeyError(qn)

    def degeneracy(self, qn) -> int:
        return int(2 * qn[1] + 1) if self.kind == "qs" else 1

    def substitute(self, bindings) -> "BlockMatrix":
        vals = {k: Scalar.coerce(v) for k, v in bindings.items()}
        return BlockMatrix(
            self.kind,
            tuple(
                Block(b.qn, tuple(tuple(x.substitute(vals) for x in row) for row in b.matrix), b.states)
                for b in self.blocks
            ),
        )

    def to_numpy(self, bindings=None) -> dict:
        return {b.qn: b.to_numpy(bindings) for b in self.blocks}

    def spectrum(self, bindings=None) -> np.ndarray:
        """All eigenvalues with multiplet degeneracies (blocks must be Hermitian)."""
        out = []
        for b in self.blocks:
            ev = np.linalg.eigvalsh(b.to_numpy(bindings)) if b.dim else np.array([])
            out.extend(list(ev) * self.degeneracy(b.qn))
        return np.sort(np.array(out, dtype=float))


def _apply_vec(ctx, op, vec: dict) -> dict:
    out: dict = {}
    for bits, c in vec.items():
        for b2, c2 in vc_action(ctx, op, bits).items():
            v = out.get(b2, ZERO) + c * c2
            if v:
                out[b2] = v
            else:
                out.pop(b2, None)
    return out


def expand_multiplets(ctx: Context, basis: BasisSet) -> list:
    """[(Q, S, Sz, multiplet index, {bits: coeff})] for the full space."""
    out = []
    if basis.kind != "qs":
        for (q, sz), states in basis:
            for n, s in enumerate(states):
                out.append((q, None, sz, n, s.as_dict()))
        return out
    sminus = total_spin(ctx, basis.sites, "-")
    for (q, S), states in basis:
        for n, s in enumerate(states):
            vec = s.as_dict()
            m = S
            out.append((q, S, m, n, vec))
            while m > -S:
                vec = _apply_vec(ctx, sminus, vec)
                norm = Scalar.sqrt(dot(vec, vec).as_fraction()).inverse()
                vec = {b: c * norm for b, c in vec.items()}
                m -= 1
                out.append((q, S, m, n, vec))
    return out


def _fmt_qn(qn) -> str:
    return "(" + ", ".join(str(x) for x in qn) + ")"


def make_blocks(ctx: Context, op: Expr, basis: BasisSet) -> BlockMatrix:
    """Per-subspace matrices; fails if ``op`` mixes subspaces of the basis."""
    full = expand_multiplets(ctx, basis)
    images = [_apply_vec(ctx, op, vec) for *_, vec in full]
    label = (lambda r: (r[0], r[1])) if basis.kind == "qs" else (lambda r: (r[0], r[2]))
    reference: dict = {}
    for i, ri in enumerate(full):
        for j, rj in enumerate(full):
            x = dot(ri[4], images[j])
            same = label(ri) == label(rj) and ri[2] == rj[2]
            if not same:
                if x:
                    raise SymmetryError(
                        f"operator connects subspace {_fmt_qn(label(rj))} (Sz={rj[2]}) with "
                        f"{_fmt_qn(label(ri))} (Sz={ri[2]}); the operator does not conserve the basis "
                        "quantum numbers"
                        + ("; use a qsz basis for Sz-dependent operators" if basis.kind == "qs" else "")
                    )
                continue
            key = (label(ri), ri[3], rj[3])
            prev = reference.get(key)
            if prev is None:
                reference[key] = x
            elif prev != x:
                raise SymmetryError(
                    f"matrix elements in subspace {_fmt_qn(label(ri))} depend on Sz; "
                    "the operator is not a spin scalar, use a qsz basis"
                )
    blocks = []
    for qn, states in basis:
        n = len(states)
        mat = tuple(tuple(reference[(qn, a, b)] for b in range(n)) for a in range(n))
        blocks.append(Block(qn, mat, states))
    return BlockMatrix(basis.kind, tuple(blocks))
