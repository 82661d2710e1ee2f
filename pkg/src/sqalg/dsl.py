"""ASCII operator notation: parser and ASCII / Unicode / LaTeX printers.

Grammar of the textual form::

    expr     := ['+'|'-'] term (('+'|'-') term)*
    term     := factor ('*'? factor)*
    factor   := number ['/' number] | 'I' | 'sqrt(' number ['/' number] ')'
              | param ['[' args ']'] ['^' number] | 'conj(' expr ')'
              | 'delta(' index ',' index ')' | opatom
              | 'ket[' args ']' | 'bra[' args ']' | 'vc[' bits ']' | 'vcbra[' bits ']'
              | 'sum[' expr ']{' idlist '}' | macro '(' margs ')' | '(' expr ')' ['^' number]
    opatom   := ident ['+'] '(' args ')'       # '+' written directly after ident marks CR
    index    := ['-'] integer | ident | 'UP' | 'DO' | 'Null'
    macro    := number | hop | hubbard | spinx | spiny | spinz | splus | sminus
              | snegx | snegy | snegz | spinspin | projector | projector0
    margs    := site (',' (site | index | word))*     ; site := ident ['[' args ']']

Adjacent factors multiply with ``nc``; the result is canonical.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import (
    Expr, bra, conj, const, ket, nc, operator, param, vc, vcbra,
)
from .context import Context, Site, Statistics
from .factors import AN, CR, Bra, Grassmann, Ket, Op, VcBra, VcKet
from .scalar import DO, NULL, UP, I, Scalar

__all__ = ["parse", "print_ascii", "print_unicode", "print_latex", "DSLError", "format_scalar_ascii"]


class DSLError(ValueError):
    def __init__(self, msg: str, text: str = "", pos: int | None = None):
        self.pos = pos
        if pos is not None:
            msg = f"{msg} at position {pos}: {text[:pos]}<<>>{text[pos:]}"
        super().__init__(msg)


# --- printing ------------------------------------------------------------


class _Style:
    name = "ascii"
    minus = "-"
    dot = " "
    null = "Null"

    def spin(self, v, S):
        if S == Fraction(1, 2) and isinstance(v, int):
            return "UP" if v == UP else "DO"
        return str(v)

    def index(self, i):
        return self.null if i is NULL else str(i)

    def op(self, name, kind, body):
        return f"{name}{'+' if kind == CR else ''}({body})"

    def op_indexes(self, op, decl):
        idx = [self.index(i) for i in op.indexes]
        if decl.spin is not None and op.indexes:
            idx[-1] = self.spin(op.indexes[-1], decl.spin)
        return ",".join(idx)

    def indexed(self, name, idx):
        return f"{name}[{','.join(self.index(i) for i in idx)}]" if idx else name

    def conj_mark(self, s):
        return f"conj({s})"

    def power(self, s, p):
        return f"{s}^{p}" if p != 1 else s

    def delta(self, a, b):
        return f"delta({self.index(a)},{self.index(b)})"

    def rational(self, q: Fraction):
        return str(q)

    def sqrt(self, r):
        return f"sqrt({r})"

    imag = "I"
    join_coeff = " "

    def group(self, s):
        return f"({s})"

    def ket(self, slots):
        return f"ket[{','.join(self.index(s) for s in slots)}]"

    def bra(self, slots):
        return f"bra[{','.join(self.index(s) for s in slots)}]"

    def vc(self, bits):
        return f"vc[{','.join(map(str, bits))}]"

    def vcbra(self, bits):
        return f"vcbra[{','.join(map(str, bits))}]"

    def sum(self, body, dummies):
        return f"sum[{body}]{{{','.join(dummies)}}}"


class _Unicode(_Style):
    name = "unicode"
    minus = "−"
    dot = "·"
    null = "∘"
    imag = "i"

    def spin(self, v, S):
        if S == Fraction(1, 2) and isinstance(v, int):
            return "↑" if v == UP else "↓"
        return str(v)

    def op(self, name, kind, body):
        dag = "†" if kind == CR else ""
        return f"{name}{dag}_{{{body}}}" if body else f"{name}{dag}"

    def op_indexes(self, op, decl):
        parts = [self.index(i) for i in op.indexes]
        if decl.spin is not None and op.indexes and isinstance(op.indexes[-1], int):
            arrow = self.spin(op.indexes[-1], decl.spin)
            if decl.spin == Fraction(1, 2):
                return ",".join(parts[:-1]) + arrow
            parts[-1] = arrow
        return ",".join(parts)

    def indexed(self, name, idx):
        return f"{name}_{{{','.join(self.index(i) for i in idx)}}}" if idx else name

    def conj_mark(self, s):
        return f"{s}*"

    def delta(self, a, b):
        return f"δ_{{{self.index(a)},{self.index(b)}}}"

    def sqrt(self, r):
        return f"√{r}"

    def ket(self, slots):
        return f"|{','.join(self.index(s) for s in slots)}⟩"

    def bra(self, slots):
        return f"⟨{','.join(self.index(s) for s in slots)}|"

    def vc(self, bits):
        return "|" + "".join("■" if b else "□" for b in bits) + "⟩"

    def vcbra(self, bits):
        return "⟨" + "".join("■" if b else "□" for b in bits) + "|"

    def sum(self, body, dummies):
        return f"Σ_{{{','.join(dummies)}}}[{body}]"


class _Latex(_Style):
    name = "latex"
    minus = "-"
    dot = r" \cdot "
    null = r"\circ"
    imag = "i"
    join_coeff = r" \, "

    def spin(self, v, S):
        if S == Fraction(1, 2) and isinstance(v, int):
            return r"\uparrow" if v == UP else r"\downarrow"
        return str(v)

    def op(self, name, kind, body):
        dag = r"^{\dagger}" if kind == CR else ""
        return f"{name}{dag}_{{{body}}}" if body else f"{name}{dag}"

    def op_indexes(self, op, decl):
        parts = [self.index(i) for i in op.indexes]
        if decl.spin is not None and op.indexes and isinstance(op.indexes[-1], int):
            parts[-1] = self.spin(op.indexes[-1], decl.spin)
        return ",".join(parts)

    def indexed(self, name, idx):
        return f"{name}_{{{','.join(self.index(i) for i in idx)}}}" if idx else name

    def conj_mark(self, s):
        return f"{s}^{{*}}"

    def power(self, s, p):
        return f"{s}^{{{p}}}" if p != 1 else s

    def delta(self, a, b):
        return rf"\delta_{{{self.index(a)},{self.index(b)}}}"

    def rational(self, q: Fraction):
        if q.denominator == 1:
            return str(q.numerator)
        return rf"\frac{{{q.numerator}}}{{{q.denominator}}}"

    def sqrt(self, r):
        return rf"\sqrt{{{r}}}"

    def group(self, s):
        return rf"\left({s}\right)"

    def ket(self, slots):
        return rf"\left| {','.join(self.index(s) for s in slots)} \right\rangle"

    def bra(self, slots):
        return rf"\left\langle {','.join(self.index(s) for s in slots)} \right|"

    def vc(self, bits):
        return r"\left| " + "".join(r"\blacksquare" if b else r"\square" for b in bits) + r" \right\rangle"

    def vcbra(self, bits):
        return r"\left\langle " + "".join(r"\blacksquare" if b else r"\square" for b in bits) + r" \right|"

    def sum(self, body, dummies):
        return rf"\sum_{{{','.join(dummies)}}} \left[ {body} \right]"


ASCII, UNICODE, LATEX = _Style(), _Unicode(), _Latex()


def _monomial(st: _Style, m, q: Fraction) -> str:
    """Magnitude |q| times the monomial (sign handled by the caller)."""
    parts = []
    q = abs(q)
    if q != 1:
        parts.append(st.rational(q))
    if m.i:
        parts.append(st.imag)
    if m.rad > 1:
        parts.append(st.sqrt(m.rad))
    for atom, power in m.params:
        s = st.indexed(atom.name, atom.indexes)
        if atom.conj:
            s = st.conj_mark(s)
        parts.append(st.power(s, power))
    for a, b in m.deltas:
        parts.append(st.delta(a, b))
    return st.join_coeff.join(parts) if parts else "1"


def _scalar(st: _Style, s: Scalar) -> str:
    items = list(s.monomials())
    if not items:
        return "0"
    out = []
    for n, (m, q) in enumerate(items):
        body = _monomial(st, m, q)
        if n == 0:
            out.append((st.minus if q < 0 else "") + body)
        else:
            out.append(f" {st.minus if q < 0 else '+'} {body}")
    return "".join(out)


def format_scalar_ascii(s: Scalar) -> str:
    return _scalar(ASCII, s)


def _factor(st: _Style, ctx: Context, f) -> str:
    if isinstance(f, Op):
        d = ctx.decl(f.symbol)
        return st.op(f.symbol, f.kind, st.op_indexes(f, d))
    if isinstance(f, Grassmann):
        s = st.indexed(f.name, f.indexes)
        return st.conj_mark(s) if f.conj else s
    if isinstance(f, Ket):
        return st.ket(f.slots)
    if isinstance(f, Bra):
        return st.bra(f.slots)
    if isinstance(f, VcKet):
        return st.vc(f.bits)
    if isinstance(f, VcBra):
        return st.vcbra(f.bits)
    raise TypeError(f)


def _signed_term(st: _Style, ctx: Context, coeff: Scalar, word: tuple) -> tuple[bool, str]:
    """(negative, text) for coefficient times word."""
    wtxt = st.dot.join(_factor(st, ctx, f) for f in word)
    if len(coeff) == 1:
        (m, q), = coeff.monomials()
        mag = _monomial(st, m, q)
        if not word:
            return q < 0, mag
        return q < 0, wtxt if mag == "1" else f"{mag}{st.join_coeff}{wtxt}"
    ctxt = st.group(_scalar(st, coeff))
    return False, f"{ctxt}{st.join_coeff}{wtxt}" if word else ctxt


def _term(st: _Style, ctx: Context, dummies: tuple, word: tuple, coeff: Scalar) -> tuple[bool, str]:
    if not dummies:
        return _signed_term(st, ctx, coeff, word)
    names = [str(d) for d in dummies]
    if coeff.atoms() & set(dummies):
        neg, body = _signed_term(st, ctx, coeff, word)
        return neg, st.sum(body, names)
    neg, outer = _signed_term(st, ctx, coeff, ())
    inner = st.dot.join(_factor(st, ctx, f) for f in word) or "1"
    s = st.sum(inner, names)
    return neg, s if outer == "1" else f"{outer}{st.join_coeff}{s}"


def _print(st: _Style, ctx: Context, e: Expr) -> str:
    items = e.items()
    if not items:
        return "0"
    out = []
    for n, (d, w, c) in enumerate(items):
        neg, body = _term(st, ctx, d, w, c)
        if n == 0:
            out.append((st.minus if neg else "") + body)
        else:
            out.append(f" {st.minus if neg else '+'} {body}")
    return "".join(out)


def print_ascii(ctx: Context, e: Expr) -> str:
    return _print(ASCII, ctx, e)


def print_unicode(ctx: Context, e: Expr) -> str:
    return _print(UNICODE, ctx, e)


def print_latex(ctx: Context, e: Expr) -> str:
    return _print(LATEX, ctx, e)


# --- parsing -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")

MACROS = {
    "number", "hop", "hubbard", "spinx", "spiny", "spinz", "splus", "sminus",
    "snegx", "snegy", "snegz", "spinspin", "projector", "projector0",
}


class _Tok:
    __slots__ = ("kind", "text", "start", "end")

    def __init__(self, kind, text, start, end):
        self.kind, self.text, self.start, self.end = kind, text, start, end

    def __repr__(self):
        return f"{self.kind}:{self.text}"


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(_Tok("num", m.group(1), m.start(1), m.end(1)))
        elif m.group(2) is not None:
            toks.append(_Tok("id", m.group(2), m.start(2), m.end(2)))
        elif m.group(3) is not None:
            if m.group(3).isspace():
                pos = m.end()
                continue
            toks.append(_Tok("sym", m.group(3), m.start(3), m.end(3)))
        pos = m.end()
    toks.append(_Tok("eof", "", n, n))
    return toks


class _Parser:
    def __init__(self, ctx: Context, text: str):
        self.ctx = ctx
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    # helpers

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k=1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        raise DSLError(msg, self.text, tok.start)

    def eat(self, text=None, kind=None) -> _Tok:
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            self.error(f"expected {text or kind!r}, found {t.text or 'end of input'!r}")
        self.i += 1
        return t

    def at(self, text) -> bool:
        return self.tok.kind == "sym" and self.tok.text == text

    # grammar

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")
        return e

    def expr(self) -> Expr:
        neg = False
        if self.at("+") or self.at("-"):
            neg = self.eat().text == "-"
        acc = self.term()
        if neg:
            acc = -acc
        while self.at("+") or self.at("-"):
            op = self.eat().text
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def _starts_factor(self) -> bool:
        t = self.tok
        return t.kind in ("num", "id") or (t.kind == "sym" and t.text == "(")

    def term(self) -> Expr:
        if not self._starts_factor():
            self.error("expected a term")
        start = self.tok
        factors = [self.factor()]
        while True:
            if self.at("*"):
                self.eat("*")
                if not self._starts_factor():
                    self.error("expected a factor after '*'")
            if not self._starts_factor():
                break
            factors.append(self.factor())
        try:
            return nc(self.ctx, *factors)
        except ValueError as exc:
            self.error(str(exc), start)

    def rational(self) -> Fraction:
        q = Fraction(int(self.eat(kind="num").text))
        if self.at("/") and self.peek().kind == "num":
            self.eat("/")
            den = int(self.eat(kind="num").text)
            if den == 0:
                self.error("division by zero")
            q /= den
        return q

    def power(self, e: Expr) -> Expr:
        if self.at("^"):
            self.eat("^")
            n = int(self.eat(kind="num").text)
            return e ** n
        return e

    def factor(self) -> Expr:
        t = self.tok
        ctx = self.ctx
        if t.kind == "num":
            return const(ctx, self.rational())
        if self.at("("):
            self.eat("(")
            e = self.expr()
            self.eat(")")
            return self.power(e)
        name = self.eat(kind="id").text
        if name == "I":
            return const(ctx, I)
        if name == "sqrt":
            self.eat("(")
            q = self.rational()
            self.eat(")")
            return const(ctx, Scalar.sqrt(q))
        if name == "conj":
            self.eat("(")
            e = self.expr()
            self.eat(")")
            return conj(ctx, e)
        if name == "delta":
            self.eat("(")
            a = self.index()
            self.eat(",")
            b = self.index()
            self.eat(")")
            return const(ctx, Scalar.delta(a, b))
        if name == "sum":
            from .sums import sum_make

            self.eat("[")
            body = self.expr()
            self.eat("]")
            self.eat("{")
            ids = [self.eat(kind="id").text]
            while self.at(","):
                self.eat(",")
                ids.append(self.eat(kind="id").text)
            self.eat("}")
            return sum_make(ctx, body, ids)
        if name in ("ket", "bra"):
            self.eat("[")
            slots = self.args("]", allow_null=True)
            return (ket if name == "ket" else bra)(ctx, *slots)
        if name in ("vc", "vcbra"):
            self.eat("[")
            bits = self.args("]")
            try:
                return (vc if name == "vc" else vcbra)(ctx, *bits)
            except ValueError as exc:
                self.error(str(exc), t)
        if ctx.has_symbol(name):
            return self.opatom(name, t)
        if ctx.has_param(name):
            idx = ()
            if self.at("["):
                self.eat("[")
                idx = self.args("]")
            return self.power(param(ctx, name, *idx))
        if name in MACROS:
            return self.macro(name, t)
        self.error(f"undeclared name {name!r}", t)

    def opatom(self, name, t) -> Expr:
        kind = AN
        nxt = self.tok
        if nxt.kind == "sym" and nxt.text == "+" and nxt.start == t.end and self.peek().text == "(":
            self.eat("+")
            kind = CR
        self.eat("(")
        idx = self.args(")")
        d = self.ctx.decl(name)
        if d.statistics is Statistics.MAJORANA:
            if kind == CR:
                self.error(f"Majorana symbol {name} has no creation form", t)
            kind = None
        try:
            return operator(self.ctx, name, kind, *idx)
        except ValueError as exc:
            self.error(str(exc), t)

    def index(self, allow_null=False):
        t = self.tok
        if self.at("-"):
            self.eat("-")
            return -int(self.eat(kind="num").text)
        if t.kind == "num":
            self.eat()
            return int(t.text)
        if t.kind == "id":
            self.eat()
            if t.text == "UP":
                return UP
            if t.text == "DO":
                return DO
            if t.text == "Null":
                if not allow_null:
                    self.error("Null is only allowed in kets and bras", t)
                return NULL
            return t.text
        self.error("expected an index")

    def args(self, close: str, allow_null=False) -> list:
        out = []
        if self.at(close):
            self.eat(close)
            return out
        out.append(self.index(allow_null))
        while self.at(","):
            self.eat(",")
            out.append(self.index(allow_null))
        self.eat(close)
        return out

    def site(self) -> Site:
        t = self.eat(kind="id")
        if not self.ctx.has_symbol(t.text):
            self.error(f"undeclared symbol {t.text!r}", t)
        idx = ()
        if self.at("["):
            self.eat("[")
            idx = tuple(self.args("]"))
        return Site(t.text, idx)

    def macro(self, name, t) -> Expr:
        from . import macros

        ctx = self.ctx
        self.eat("(")
        first = self.site()
        rest = []
        while self.at(","):
            self.eat(",")
            if self.tok.kind == "id" and self.ctx.has_symbol(self.tok.text):
                rest.append(self.site())
            else:
                tk = self.tok
                if tk.kind == "id" and tk.text not in ("UP", "DO"):
                    self.eat()
                    rest.append(tk.text)
                else:
                    rest.append(self.index())
        self.eat(")")
        try:
            if name == "number":
                return macros.number(ctx, first, *rest)
            if name == "hop":
                return macros.hop(ctx, first, *rest)
            if name == "hubbard":
                return macros.hubbard(ctx, first, *rest)
            if name == "spinspin":
                return macros.spinspin(ctx, first, *rest)
            if name == "projector0":
                return macros.projector(ctx, first, "empty", *rest)
            if name == "projector":
                return macros.projector(ctx, first, *rest)
            axis = {"spinx": "x", "spiny": "y", "spinz": "z", "snegx": "x", "snegy": "y",
                    "snegz": "z", "splus": "+", "sminus": "-"}[name]
            return macros.spin_component(ctx, first, axis, *rest)
        except (TypeError, ValueError) as exc:
            self.error(f"{name}: {exc}", t)


def parse(ctx: Context, text: str) -> Expr:
    """Parse the ASCII operator notation into a canonical expression."""
    try:
        return _Parser(ctx, text).parse()
    except DSLError:
        raise
    except KeyError as exc:
        raise DSLError(str(exc.args[0]) if exc.args else str(exc)) from None


def parse_site(ctx: Context, text: str) -> Site:
    p = _Parser(ctx, text)
    s = p.site()
    if p.tok.kind != "eof":
        p.error("trailing input after site")
    return s
