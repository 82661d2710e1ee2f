"""Two-site Hubbard model: (Q,S) blocks, checked against dense diagonalization.

    python3 scripts/hubbard_dimer.py --t 1 --U 4
"""

import argparse
from fractions import Fraction

import numpy as np

from sqalg import ContextBuilder, make_blocks, qsbasis
from sqalg.dsl import print_unicode
from sqalg.oracle import oracle_matrix


def build(t=None, U=None):
    b = ContextBuilder()
    b.fermion("c", spin=Fraction(1, 2))
    b.declare_param("t")
    b.declare_param("U")
    sites = [("c", 1), ("c", 2)]
    b.sites(sites)
    ctx = b.freeze()
    H = ctx.parse("t hop(c[1],c[2]) + U hubbard(c[1]) + U hubbard(c[2])")
    return ctx, sites, H


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--t", type=Fraction, default=Fraction(1))
    ap.add_argument("--U", type=Fraction, default=Fraction(4))
    args = ap.parse_args()
    ctx, sites, H = build()
    print("H =", print_unicode(ctx, H))
    basis = qsbasis(ctx, sites)
    blocks = make_blocks(ctx, H, basis)
    vals = {"t": args.t, "U": args.U}
    for bl in blocks:
        q, s = bl.qn
        ev = np.linalg.eigvalsh(bl.to_numpy(vals))
        print(f"Q={q:+d} S={s}: {bl.dim} multiplet(s), E = {np.round(ev, 6).tolist()}")
    ed = np.sort(np.linalg.eigvalsh(oracle_matrix(ctx, H).to_numpy(vals)))
    diff = np.max(np.abs(blocks.spectrum(vals) - ed))
    print(f"max deviation from 16x16 dense spectrum: {diff:.2e}")
    t, U = float(args.t), float(args.U)
    print(f"ground state (0,0): {min(np.linalg.eigvalsh(blocks.block((0, 0)).to_numpy(vals))):.12f}"
          f"  closed form U/2 - sqrt((U/2)^2 + 4t^2) = {U / 2 - np.sqrt(U * U / 4 + 4 * t * t):.12f}")


if __name__ == "__main__":
    main()
