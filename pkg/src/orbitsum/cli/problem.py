"""Problem files: a small line-based format for DDEs and kernel equations.

Example::

    name: ex3
    order: 8
    unknowns: F0, F1
    eq: F0 = 1 + t*F1 + t*Dx(Dy(F1))
    eq: F1 = t*(1 + x + y)*F0 + t*y*Dx(F0)
    kernel:
      unknown: F0
      r: 2
      S: (xb*y + y + x + 1)*(xb*yb + 1)
      rhs: 1 - t*xb*yb*(F1[y^0](x) + F1[x^0](y) - F1[x^0*y^0]) - t^2*(xb*yb + 1)*xb*y*F0[x^0](y)

Expressions use integers, rationals ``a/b``, ``x``, ``y``, ``t``, ``xb = 1/x``,
``yb = 1/y``, ``+ - * ^``, parentheses and ``Dx(.)``, ``Dy(.)``. Inside
``rhs:`` of a kernel block, sections are written ``F[y^j](x)``,
``F[x^i](y)`` or ``F[x^i*y^j]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..algebra.laurent import VARS3, LaurentPoly
from ..algebra.scalars import rat
from ..dde import DDE, DDEEquation, DDETerm, KernelEquation, Section, delta
from ..errors import ProblemParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")
_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")
RESERVED = {"x", "y", "t", "xb", "yb", "Dx", "Dy"}
_ATOMS = {
    "x": (1, 0, 0),
    "y": (0, 1, 0),
    "t": (0, 0, 1),
    "xb": (-1, 0, 0),
    "yb": (0, -1, 0),
}


@dataclass
class Problem:
    name: str
    dde: DDE
    kernel: KernelEquation | None = None
    options: dict = field(default_factory=dict)

    def __eq__(self, other):
        return (
            isinstance(other, Problem)
            and self.name == other.name
            and self.options == other.options
            and self.dde.unknowns == other.dde.unknowns
            and all(self.dde.equations[u] == other.dde.equations[u] for u in self.dde.unknowns)
            and self.kernel == other.kernel
        )


# -- linear forms ---------------------------------------------------------
#
# A parsed expression is (const, {key: coefficient}) with Laurent
# coefficients in (x, y, t); keys are (unknown, k, l) for Dx^k Dy^l F or
# Section objects.


def _zero():
    return LaurentPoly((), VARS3)


class _Lin:
    __slots__ = ("const", "parts")

    def __init__(self, const=None, parts=None):
        self.const = const if const is not None else _zero()
        self.parts = {k: v for k, v in (parts or {}).items() if v}

    def is_const(self):
        return not self.parts

    def __add__(self, other):
        parts = dict(self.parts)
        for k, v in other.parts.items():
            parts[k] = parts.get(k, _zero()) + v
        return _Lin(self.const + other.const, parts)

    def scale(self, c: LaurentPoly):
        return _Lin(self.const * c, {k: v * c for k, v in self.parts.items()})

    def __neg__(self):
        return self.scale(LaurentPoly.const(-1, VARS3))


class _Parser:
    def __init__(self, text, line, col0, unknowns, allow_sections):
        self.text = text
        self.line = line
        self.col0 = col0
        self.unknowns = unknowns
        self.allow_sections = allow_sections
        self.toks = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.group(0).strip() == "":
                break
            kind = "int" if m.group(1) else ("name" if m.group(2) else "op")
            start = m.start(m.lastindex)
            self.toks.append((kind, m.group(m.lastindex), start))
            pos = m.end()
        self.i = 0

    def error(self, msg, tok=None):
        if tok is None:
            tok = self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))
        raise ProblemParseError(msg, self.line, self.col0 + tok[2] + 1)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None:
            self.error("unexpected end of expression")
        if value is not None and tok[1] != value:
            self.error(f"expected {value!r}")
        self.i += 1
        return tok

    def parse(self) -> _Lin:
        out = self.expr()
        if self.peek()[0] is not None:
            self.error(f"unexpected {self.peek()[1]!r}")
        return out

    def expr(self):
        acc = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            acc = acc + (rhs if op == "+" else -rhs)
        return acc

    def term(self):
        acc = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()
            if op[1] == "/":
                tok = self.peek()
                if tok[0] != "int":
                    self.error("only division by an integer is supported")
                self.take()
                if int(tok[1]) == 0:
                    self.error("division by zero", tok)
                acc = acc.scale(LaurentPoly.const(rat(1, int(tok[1])), VARS3))
                continue
            rhs = self.unary()
            acc = self.mul(acc, rhs, op)
        return acc

    def mul(self, a, b, tok):
        if a.is_const():
            return b.scale(a.const)
        if b.is_const():
            return a.scale(b.const)
        self.error("product of two unknown terms is not linear", tok)

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            tok = self.take()
            neg = False
            if self.peek()[1] == "-":
                self.take()
                neg = True
            n = self.take()
            if n[0] != "int":
                self.error("exponent must be an integer", n)
            k = -int(n[1]) if neg else int(n[1])
            if not base.is_const():
                self.error("powers of unknown terms are not linear", tok)
            c = base.const
            if k < 0:
                if not c.is_monomial():
                    self.error("negative powers are only allowed for monomials", tok)
                (e, v), = c.items()
                c = LaurentPoly.monomial(tuple(-a for a in e), 1 / v, VARS3)
                k = -k
            return _Lin(c**k)
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            return _Lin(LaurentPoly.const(int(val), VARS3))
        if val == "(":
            out = self.expr()
            self.take(")")
            return out
        if kind == "name":
            if val in _ATOMS:
                return _Lin(LaurentPoly.monomial(_ATOMS[val], 1, VARS3))
            if val in ("Dx", "Dy"):
                self.take("(")
                inner = self.expr()
                self.take(")")
                return self.derivative(inner, val, tok)
            if val in self.unknowns:
                if self.peek()[1] == "[":
                    return self.section(val, tok)
                if self.allow_sections:
                    self.error("kernel right-hand sides may only contain sections", tok)
                return _Lin(parts={(val, 0, 0): LaurentPoly.const(1, VARS3)})
            self.error(f"unknown name {val!r}", tok)
        self.error(f"unexpected {val!r}", tok)

    def derivative(self, inner, which, tok):
        if not inner.const.is_polynomial():
            self.error("discrete derivatives apply to polynomials only", tok)
        out = _Lin(delta(inner.const, 1 if which == "Dx" else 0, 1 if which == "Dy" else 0))
        for key, c in inner.parts.items():
            if not isinstance(key, tuple):
                self.error("discrete derivatives of sections are not supported", tok)
            if any(e[0] or e[1] for e in c.support()):
                self.error("coefficients inside a discrete derivative must be free of x and y", tok)
            u, k, l = key
            nk = (u, k + (which == "Dx"), l + (which == "Dy"))
            out = out + _Lin(parts={nk: c})
        return out

    def _int(self):
        tok = self.take()
        if tok[0] != "int":
            self.error("expected an integer", tok)
        return int(tok[1])

    def _var_power(self, var):
        self.take(var)
        self.take("^")
        return self._int()

    def section(self, name, tok):
        if not self.allow_sections:
            self.error("sections are only allowed in kernel right-hand sides", tok)
        self.take("[")
        first = self.peek()[1]
        if first == "x":
            i = self._var_power("x")
            if self.peek()[1] == "*":
                self.take()
                j = self._var_power("y")
                self.take("]")
                sec = Section(name, "0", (i, j))
            else:
                self.take("]")
                self.take("(")
                self.take("y")
                self.take(")")
                sec = Section(name, "y", i)
        elif first == "y":
            j = self._var_power("y")
            self.take("]")
            self.take("(")
            self.take("x")
            self.take(")")
            sec = Section(name, "x", j)
        else:
            self.error("expected x^i or y^j in a section")
        return _Lin(parts={sec: LaurentPoly.const(1, VARS3)})


# -- file level -----------------------------------------------------------


def _split_key(raw, lineno):
    if ":" not in raw:
        raise ProblemParseError("expected 'key: value'", lineno, 1)
    key, _, value = raw.partition(":")
    col = len(raw) - len(raw.lstrip()) + 1
    return key.strip(), value, col, raw.index(":") + 2


def _parse_expr(value, lineno, col, unknowns, allow_sections=False):
    lead = len(value) - len(value.lstrip())
    return _Parser(value.strip(), lineno, col - 1 + lead, unknowns, allow_sections).parse()


def parse_problem(text: str) -> Problem:
    name = ""
    options: dict = {}
    unknowns = None
    eqs = {}
    kernel_lines: dict = {}
    in_kernel = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indented = line[0] in " \t"
        if in_kernel and not indented:
            in_kernel = False
        key, value, kcol, vcol = _split_key(line, lineno)
        if in_kernel:
            if key not in ("unknown", "r", "S", "rhs"):
                raise ProblemParseError(f"unknown kernel field {key!r}", lineno, kcol)
            if key in kernel_lines:
                raise ProblemParseError(f"duplicate kernel field {key!r}", lineno, kcol)
            kernel_lines[key] = (value, lineno, vcol)
            continue
        if key == "name":
            name = value.strip()
        elif key == "unknowns":
            names = [n.strip() for n in value.split(",")]
            offset = 0
            for piece, n in zip(value.split(","), names):
                if not _NAME.match(n) or n in RESERVED:
                    col = vcol + offset + len(piece) - len(piece.lstrip())
                    raise ProblemParseError(f"invalid unknown name {n!r}", lineno, col)
                offset += len(piece) + 1
            if len(set(names)) != len(names):
                raise ProblemParseError("duplicate unknown", lineno, vcol)
            unknowns = tuple(names)
        elif key == "eq":
            if unknowns is None:
                raise ProblemParseError("'unknowns:' must come before equations", lineno, kcol)
            lhs, eqsign, rhs = value.partition("=")
            if not eqsign:
                raise ProblemParseError("expected '='", lineno, vcol)
            u = lhs.strip()
            if u not in unknowns:
                raise ProblemParseError(f"left-hand side {u!r} is not a declared unknown", lineno, vcol)
            if u in eqs:
                raise ProblemParseError(f"second equation for {u}", lineno, vcol)
            rcol = vcol + len(lhs) + 1
            eqs[u] = _equation(_parse_expr(rhs, lineno, rcol, unknowns), lineno, rcol)
        elif key == "kernel":
            if value.strip():
                raise ProblemParseError("kernel fields go on indented lines", lineno, vcol)
            if kernel_lines:
                raise ProblemParseError("second kernel block", lineno, kcol)
            in_kernel = True
        else:
            if key in options:
                raise ProblemParseError(f"duplicate option {key!r}", lineno, kcol)
            if not re.match(r"[a-z][a-z0-9-]*$", key):
                raise ProblemParseError(f"invalid option name {key!r}", lineno, kcol)
            options[key] = value.strip()
    if unknowns is None:
        raise ProblemParseError("missing 'unknowns:' line", None, None)
    missing = [u for u in unknowns if u not in eqs]
    if missing:
        raise ProblemParseError(f"no equation for {', '.join(missing)}", None, None)
    try:
        dde = DDE(unknowns, eqs)
    except ValueError as exc:
        raise ProblemParseError(str(exc)) from exc
    kernel = _kernel(kernel_lines, unknowns) if kernel_lines else None
    return Problem(name, dde, kernel, options)


def _equation(lin: _Lin, lineno, col) -> DDEEquation:
    if not lin.const.is_polynomial():
        raise ProblemParseError("free term must be a polynomial", lineno, col)
    terms = []
    for key in sorted(lin.parts):
        u, k, l = key
        c = lin.parts[key]
        if not c.is_polynomial() or any(e[2] < 1 for e in c.support()):
            raise ProblemParseError(
                f"coefficient of {u} must be a polynomial divisible by t", lineno, col
            )
        terms.append(DDETerm(c.shift((0, 0, -1)), k, l, u))
    return DDEEquation(lin.const, terms)


def _kernel(lines, unknowns) -> KernelEquation:
    for req in ("unknown", "r", "S", "rhs"):
        if req not in lines:
            raise ProblemParseError(f"kernel block lacks {req!r}")
    value, lineno, col = lines["unknown"]
    u = value.strip()
    if u not in unknowns:
        raise ProblemParseError(f"{u!r} is not a declared unknown", lineno, col)
    value, lineno, col = lines["r"]
    if not value.strip().isdigit() or int(value) < 1:
        raise ProblemParseError("r must be a positive integer", lineno, col)
    r = int(value)
    value, lineno, col = lines["S"]
    S = _parse_expr(value, lineno, col, unknowns)
    if not S.is_const() or any(e[2] for e in S.const.support()):
        raise ProblemParseError("S must be a Laurent polynomial in x and y", lineno, col)
    S = S.const.drop("t")
    value, lineno, col = lines["rhs"]
    rhs = _parse_expr(value, lineno, col, unknowns, allow_sections=True)
    secs = [(c, s) for s, c in sorted(rhs.parts.items())]
    return KernelEquation(r, S, u, rhs.const, secs)


# -- printing -------------------------------------------------------------


def _ops(k, l, u):
    s = u
    for _ in range(l):
        s = f"Dy({s})"
    for _ in range(k):
        s = f"Dx({s})"
    return s


def print_problem(p: Problem) -> str:
    lines = []
    if p.name:
        lines.append(f"name: {p.name}")
    for k, v in p.options.items():
        lines.append(f"{k}: {v}")
    lines.append("unknowns: " + ", ".join(p.dde.unknowns))
    for u in p.dde.unknowns:
        eq = p.dde.equations[u]
        parts = [f"({eq.free})"] if eq.free else []
        for tm in eq.terms:
            parts.append(f"t*({tm.coef})*{_ops(tm.k, tm.l, tm.unknown)}")
        lines.append(f"eq: {u} = " + (" + ".join(parts) if parts else "0"))
    k = p.kernel
    if k is not None:
        lines.append("kernel:")
        lines.append(f"  unknown: {k.unknown}")
        lines.append(f"  r: {k.r}")
        lines.append(f"  S: {k.S}")
        parts = [f"({k.rhs})"] if k.rhs else []
        parts += [f"({c})*{s}" for c, s in k.sections]
        lines.append("  rhs: " + (" + ".join(parts) if parts else "0"))
    return "\n".join(lines) + "\n"


def load_problem(path) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


__all__ = ["Problem", "load_problem", "parse_problem", "print_problem"]
