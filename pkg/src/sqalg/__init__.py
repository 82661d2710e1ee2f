"""Exact symbolic algebra of second-quantization operators."""

from .algebra import (
    Expr, Term, anticommutator, bra, canonicalize, commutator, conj, const, expr_equal, grassmann, ket,
    literal, nc, operator, param, substitute, vc, vcbra,
)
from .basis import BasisSet, BasisState, qsbasis, qszbasis
from .context import (
    DO, MAX_ORBITALS, UP, Context, ContextBuilder, OrbitalLimitError, ParamKind, Site, Statistics,
    SymbolDecl, Vacuum, site_orbitals,
)
from .dsl import DSLError, parse, print_ascii, print_latex, print_unicode
from .factors import AN, CR
from .macros import hop, hubbard, number, projector, spin_component, spinspin, spinx, spiny, spinz
from .matrixrep import BlockMatrix, SymmetryError, make_blocks, matrix_element
from .scalar import NULL, I, Scalar
from .states import apply, inner, merge_kets, vc_to_ops
from .sums import sum_equal, sum_make, sum_nc, sum_simplify
from .wick import contractions, normal_order, vev, vev_expr, vev_fermisea

__version__ = "0.1.0"
