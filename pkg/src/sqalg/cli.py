"""Command-line driver.

    sqalg run model.txt --out outdir
    sqalg canon "c(1,UP)c+(1,UP)" --ctx decl.txt
    sqalg vev "c(k)c+(k)" --ctx decl.txt
    sqalg comm "c+(1)c(1)" "c+(1)" --ctx decl.txt
    sqalg latex "hubbard(c)" --ctx decl.txt

Model scripts are line oriented.  A line ending in ``:`` (or ``name: value``
at column 0) opens a section; indented ``key: value`` lines fill it.  ``#``
starts a comment.  Sections: symbols, params, hamiltonian, basis, output,
bindings.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .algebra import Expr, anticommutator, commutator
from .basis import BasisSet, qsbasis, qszbasis
from .context import Context, ContextBuilder, OrbitalLimitError, ParamKind, Statistics, SymbolDecl, Vacuum
from .dsl import ASCII, DSLError, format_scalar_ascii, parse, parse_site, print_ascii, print_latex, print_unicode
from .factors import AN, Op
from .matrixrep import BlockMatrix, SymmetryError, make_blocks
from .scalar import Scalar
from .sums import sum_simplify
from .wick import vev_expr

EXIT_OK, EXIT_INPUT, EXIT_SYMMETRY, EXIT_LIMIT = 0, 1, 2, 3

SECTIONS = ("symbols", "params", "hamiltonian", "basis", "output", "bindings")

_STATISTICS = {
    "dirac-fermion": Statistics.DIRAC, "fermion": Statistics.DIRAC, "dirac": Statistics.DIRAC,
    "majorana-fermion": Statistics.MAJORANA, "majorana": Statistics.MAJORANA,
    "boson": Statistics.BOSON,
}


class ScriptError(ValueError):
    def __init__(self, msg: str, section: str | None = None, line: int | None = None, path: str = ""):
        self.section, self.line = section, line
        where = f"{path}:{line}: " if line is not None else (f"{path}: " if path else "")
        sect = f"[{section}] " if section else ""
        super().__init__(f"{where}{sect}{msg}")


@dataclass
class ModelScript:
    path: str = ""
    symbols: list = field(default_factory=list)  # (SymbolDecl, line)
    params: list = field(default_factory=list)  # (name, kind, line)
    hamiltonian: list = field(default_factory=list)  # (text, line)
    basis_kind: str | None = None
    basis_sites: list = field(default_factory=list)  # (text, line)
    basis_line: int | None = None
    formats: tuple = ("json", "txt")
    targets: tuple = ("basis", "blocks")
    bindings: list = field(default_factory=list)  # (name, text, line)

    def error(self, msg, section=None, line=None):
        return ScriptError(msg, section, line, self.path)


def _split_list(value: str) -> list:
    return [v.strip() for v in value.replace(";", ",").split(",") if v.strip()]


def _split_sites(value: str) -> list:
    out, depth, cur = [], 0, ""
    for ch in value:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if depth == 0 and (ch.isspace() or ch == ","):
            if cur:
                out.append(cur)
            cur = ""
        else:
            cur += ch
    if cur:
        out.append(cur)
    return out


def _symbol_entry(script: ModelScript, name: str, value: str, n: int) -> SymbolDecl:
    items = _split_list(value)
    if not items:
        raise script.error(f"symbol {name!r} needs a statistics", "symbols", n)
    stats = _STATISTICS.get(items[0])
    if stats is None:
        raise script.error(f"unknown statistics {items[0]!r}", "symbols", n)
    kw: dict = {}
    for it in items[1:]:
        if "=" not in it:
            raise script.error(f"expected key=value, got {it!r}", "symbols", n)
        k, v = (s.strip() for s in it.split("=", 1))
        try:
            if k == "spin":
                kw["spin"] = Fraction(v)
            elif k == "vacuum":
                kw["vacuum"] = Vacuum(v)
            elif k == "reorder":
                if v not in ("on", "off", "true", "false"):
                    raise ValueError(f"reorder must be on/off, got {v!r}")
                kw["reorder"] = v in ("on", "true")
            elif k == "arity":
                kw["arity"] = int(v)
            else:
                raise script.error(f"unknown symbol property {k!r}", "symbols", n)
        except ScriptError:
            raise
        except ValueError as exc:
            raise script.error(str(exc), "symbols", n) from None
    try:
        return SymbolDecl(name, stats, **kw)
    except ValueError as exc:
        raise script.error(str(exc), "symbols", n) from None


def parse_script(text: str, path: str = "") -> ModelScript:
    """Read and validate the structure of a model script (no algebra yet)."""
    script = ModelScript(path=path)
    section = None
    seen: set = set()
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indented = line[0].isspace()
        body = line.strip()
        if not indented:
            head, sep, rest = body.partition(":")
            head = head.strip()
            if not sep or head not in SECTIONS:
                raise script.error(f"unknown section {head!r}; expected one of {', '.join(SECTIONS)}", None, n)
            if head in seen:
                raise script.error("section given twice", head, n)
            seen.add(head)
            section = head
            rest = rest.strip()
            if rest:
                _section_value(script, section, rest, n)
            continue
        if section is None:
            raise script.error("indented line outside any section", None, n)
        _entry(script, section, body, n)
    return script


def _section_value(script: ModelScript, section: str, value: str, n: int):
    if section == "hamiltonian":
        script.hamiltonian.append((value, n))
    elif section == "basis":
        parts = value.split(None, 1)
        _basis_kind(script, parts[0], n)
        if len(parts) > 1:
            script.basis_sites.extend((s, n) for s in _split_sites(parts[1]))
    else:
        raise script.error("this section takes indented key: value entries", section, n)


def _basis_kind(script, kind, n):
    if kind not in ("qs", "qsz"):
        raise script.error(f"basis kind must be qs or qsz, got {kind!r}", "basis", n)
    script.basis_kind = kind
    script.basis_line = n


def _entry(script: ModelScript, section: str, body: str, n: int):
    if section == "hamiltonian":
        script.hamiltonian.append((body, n))
        return
    key, sep, value = body.partition(":")
    if not sep:
        raise script.error(f"expected 'key: value', got {body!r}", section, n)
    key, value = key.strip(), value.strip()
    if section == "symbols":
        script.symbols.append((_symbol_entry(script, key, value, n), n))
    elif section == "params":
        try:
            kind = ParamKind(value or "real")
        except ValueError:
            raise script.error(f"unknown parameter kind {value!r}", section, n) from None
        script.params.append((key, kind, n))
    elif section == "basis":
        if key == "kind":
            _basis_kind(script, value, n)
        elif key == "sites":
            script.basis_sites.extend((s, n) for s in _split_sites(value))
        else:
            raise script.error(f"unknown key {key!r}", section, n)
    elif section == "output":
        vals = tuple(_split_list(value))
        if key == "formats":
            bad = [v for v in vals if v not in ("json", "txt")]
            if bad:
                raise script.error(f"unknown format {bad[0]!r}", section, n)
            script.formats = vals
        elif key == "targets":
            bad = [v for v in vals if v not in ("basis", "blocks")]
            if bad:
                raise script.error(f"unknown target {bad[0]!r}", section, n)
            script.targets = vals
        else:
            raise script.error(f"unknown key {key!r}", section, n)
    elif section == "bindings":
        script.bindings.append((key, value, n))


def build_context(script: ModelScript, fermi_level_occupied: bool = False, with_sites=True) -> Context:
    b = ContextBuilder()
    for decl, n in script.symbols:
        try:
            b.declare_symbol(decl)
        except ValueError as exc:
            raise script.error(str(exc), "symbols", n) from None
    for name, kind, n in script.params:
        try:
            b.declare_param(name, kind)
        except ValueError as exc:
            raise script.error(str(exc), "params", n) from None
    ctx = b.freeze(fermi_level_occupied)
    if with_sites and script.basis_sites:
        sites = []
        for text, n in script.basis_sites:
            try:
                sites.append(parse_site(ctx, text))
            except (DSLError, KeyError) as exc:
                raise script.error(str(exc), "basis", n) from None
        try:
            ctx = ctx.with_sites(sites)
        except OrbitalLimitError:
            raise
        except (ValueError, KeyError) as exc:
            raise script.error(str(exc), "basis", script.basis_line) from None
    return ctx


def load_context(path: str | None, fermi_level_occupied: bool = False) -> Context:
    if path is None:
        raise ScriptError("no declarations given; pass --ctx FILE with symbols: and params: sections")
    script = parse_script(Path(path).read_text(), path)
    return build_context(script, fermi_level_occupied)


def _bindings(script: ModelScript, ctx: Context) -> dict:
    out = {}
    for name, text, n in script.bindings:
        if not ctx.has_param(name):
            raise script.error(f"{name!r} is not a declared parameter", "bindings", n)
        try:
            val = parse(ctx, text)
        except DSLError as exc:
            raise script.error(str(exc), "bindings", n) from None
        if not val.is_scalar() or not val.scalar().is_numeric():
            raise script.error(f"binding for {name!r} is not an exact number", "bindings", n)
        out[name] = val.scalar()
    return out


# --- output --------------------------------------------------------------


def _num(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else str(float(x))


def label_text(qn) -> str:
    return f"{qn[0]}_{_num(Fraction(qn[1]))}"


def _label_json(kind: str, qn) -> dict:
    return {"Q": qn[0], "S" if kind == "qs" else "Sz": str(Fraction(qn[1]))}


def _decimal(s: Scalar):
    z = s.to_complex()
    if z.imag == 0:
        return z.real
    return [z.real, z.imag]


def basis_json(basis: BasisSet, ctx: Context) -> dict:
    subs = []
    for qn, states in basis:
        subs.append({
            "label": _label_json(basis.kind, qn),
            "dim": len(states),
            "states": [
                [{"bits": "".join(map(str, bits)), "coeff": format_scalar_ascii(c)} for bits, c in st.components]
                for st in states
            ],
        })
    return {
        "kind": basis.kind,
        "sites": [f"{s.symbol}[{','.join(map(str, s.index))}]" for s in basis.sites],
        "orbitals": [f"{sym}({ASCII.op_indexes(Op(sym, AN, idx), ctx.decl(sym))})" for sym, idx in ctx.orbitals],
        "subspaces": subs,
        "total_dimension": basis.total_dimension(),
    }


def block_json(kind: str, block, bindings: dict | None) -> dict:
    out = {
        "label": _label_json(kind, block.qn),
        "dim": block.dim,
        "entries": [[format_scalar_ascii(x) for x in row] for row in block.matrix],
    }
    if bindings is not None:
        vals = []
        for row in block.matrix:
            r = []
            for x in row:
                y = x.substitute(bindings)
                r.append(_decimal(y) if y.is_numeric() else None)
            vals.append(r)
        out["values"] = vals
    return out


def block_table(kind: str, block) -> str:
    q, s = block.qn
    lines = [f"# Q={q} {'S' if kind == 'qs' else 'Sz'}={Fraction(s)} dim={block.dim}"]
    cells = [[format_scalar_ascii(x) for x in row] for row in block.matrix]
    width = max((len(c) for row in cells for c in row), default=1)
    for row in cells:
        lines.append("  ".join(c.rjust(width) for c in row))
    return "\n".join(lines) + "\n"


def _dump(path: Path, obj):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


@dataclass
class RunResult:
    ctx: Context
    hamiltonian: Expr
    basis: BasisSet
    blocks: BlockMatrix
    files: list


def run_script(path: str, out: str | None = None, fermi_level_occupied: bool = False) -> RunResult:
    """Validate and execute a model script; writes basis and block files."""
    script = parse_script(Path(path).read_text(), path)
    if not script.hamiltonian:
        raise script.error("missing hamiltonian section")
    if script.basis_kind is None or not script.basis_sites:
        raise script.error("missing basis section (kind and sites)")
    ctx = build_context(script, fermi_level_occupied)
    text = " ".join(t for t, _ in script.hamiltonian)
    try:
        H = parse(ctx, text)
    except DSLError as exc:
        # map the error position back to a line of the section
        line = script.hamiltonian[0][1]
        if exc.pos is not None:
            acc = 0
            for t, n in script.hamiltonian:
                if exc.pos <= acc + len(t):
                    line = n
                    break
                acc += len(t) + 1
        raise script.error(str(exc), "hamiltonian", line) from None
    bindings = _bindings(script, ctx)
    sites = [parse_site(ctx, t) for t, _ in script.basis_sites]
    basis = (qsbasis if script.basis_kind == "qs" else qszbasis)(ctx, sites)
    blocks = make_blocks(ctx, H, basis)
    files = []
    outdir = Path(out) if out else Path(path).with_suffix("")
    outdir.mkdir(parents=True, exist_ok=True)
    if "basis" in script.targets and "json" in script.formats:
        p = outdir / "basis.json"
        _dump(p, basis_json(basis, ctx))
        files.append(p)
    if "blocks" in script.targets:
        for bl in blocks:
            stem = f"matrix_{label_text(bl.qn)}"
            if "json" in script.formats:
                p = outdir / f"{stem}.json"
                _dump(p, block_json(blocks.kind, bl, bindings if bindings else None))
                files.append(p)
            if "txt" in script.formats:
                p = outdir / f"{stem}.txt"
                p.write_text(block_table(blocks.kind, bl))
                files.append(p)
    return RunResult(ctx, H, basis, blocks, files)


# --- entry point ---------------------------------------------------------


def _printer(args):
    if getattr(args, "latex", False) or args.cmd == "latex":
        return print_latex
    if getattr(args, "ascii", False):
        return print_ascii
    return print_unicode


def _show(ctx, e: Expr, args) -> str:
    if e.has_sums():
        e = sum_simplify(ctx, e)
    return _printer(args)(ctx, e)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sqalg", description="Second-quantization operator algebra.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, fmt=True):
        sp.add_argument("--ctx", help="declaration file (symbols:/params: sections)")
        sp.add_argument("--fermi-level-occupied", action="store_true", help="treat momentum 0 as occupied")
        if fmt:
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--ascii", action="store_true")
            g.add_argument("--unicode", action="store_true")
            g.add_argument("--latex", action="store_true")

    r = sub.add_parser("run", help="execute a model script")
    r.add_argument("script")
    r.add_argument("--out", help="output directory (default: script name without suffix)")
    r.add_argument("--fermi-level-occupied", action="store_true")

    c = sub.add_parser("canon", help="canonical form of an expression")
    c.add_argument("expr")
    common(c)
    v = sub.add_parser("vev", help="vacuum expectation value")
    v.add_argument("expr")
    v.add_argument("--fermi-sea", action="store_true", help="Fermi-sea vacuum for every Dirac symbol")
    common(v)
    m = sub.add_parser("comm", help="commutator [e1, e2]")
    m.add_argument("e1")
    m.add_argument("e2")
    m.add_argument("--anti", action="store_true", help="anticommutator instead")
    common(m)
    lx = sub.add_parser("latex", help="LaTeX form of an expression")
    lx.add_argument("expr")
    common(lx, fmt=False)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "run":
            res = run_script(args.script, args.out, args.fermi_level_occupied)
            for bl in res.blocks:
                print(f"block {label_text(bl.qn)}: dim {bl.dim}")
            print(f"wrote {len(res.files)} files")
            return EXIT_OK
        ctx = load_context(args.ctx, args.fermi_level_occupied)
        if args.cmd in ("canon", "latex"):
            print(_show(ctx, parse(ctx, args.expr), args))
        elif args.cmd == "vev":
            e = parse(ctx, args.expr)
            print(_show(ctx, vev_expr(ctx, e, True if args.fermi_sea else None), args))
        elif args.cmd == "comm":
            a, b = parse(ctx, args.e1), parse(ctx, args.e2)
            r = (anticommutator if args.anti else commutator)(ctx, a, b)
            print(_show(ctx, r, args))
        return EXIT_OK
    except SymmetryError as exc:
        print(f"symmetry violation: {exc}", file=sys.stderr)
        return EXIT_SYMMETRY
    except OrbitalLimitError as exc:
        print(f"limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ScriptError, DSLError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
