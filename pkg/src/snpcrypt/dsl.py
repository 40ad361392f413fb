"""Text format (``.snp``) for SN P systems.

Example::

    system pi_add {
      neuron s1 {
        spikes = 7;
        a+ / a -> a; 2;
      }
      ...
      syn {
        s1 -> s3;
      }
      out s2;
    }

Concatenated factors must be separated by whitespace (``a^2 (a^3)+``), since
``aa`` lexes as a single identifier.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .patterns import Atom, Concat, Lambda, Plus, UnionP
from .system import FiringRule, ForgettingRule, Neuron, SnpSystem, check_system

__all__ = ["SourceSpan", "ParseError", "parse_system", "render_system", "render_pattern"]


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int


class ParseError(ValueError):
    def __init__(self, span: SourceSpan, expected: str, found: str):
        self.span, self.expected, self.found = span, expected, found
        super().__init__(f"{span.line}:{span.column}: expected {expected}, found {found!r}")


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+|\#[^\n]*)"
    r"|(?P<nat>[0-9]+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<arrow>->)"
    r"|(?P<punct>[{}();=/|+^])"
)


@dataclass
class _Tok:
    kind: str   # "nat", "ident", "sym", "eof"
    text: str
    span: SourceSpan


def _tokenize(text: str) -> list:
    toks = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(SourceSpan(line, col, 1), "a token", text[pos])
        lexeme = m.group()
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(
                "sym" if kind in ("arrow", "punct") else kind,
                lexeme, SourceSpan(line, col, len(lexeme))))
        nl = lexeme.count("\n")
        if nl:
            line += nl
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    toks.append(_Tok("eof", "", SourceSpan(line, col, 0)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, expected: str):
        t = self.tok
        raise ParseError(t.span, expected, t.text or "end of input")

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("sym", "ident") and t.text == text

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            self.fail(repr(text))
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> str:
        if self.tok.kind != "ident":
            self.fail("identifier")
        t = self.tok
        self.i += 1
        return t.text

    def nat(self) -> int:
        if self.tok.kind != "nat":
            self.fail("natural number")
        t = self.tok
        self.i += 1
        return int(t.text)

    # grammar ---------------------------------------------------------------

    def system(self) -> SnpSystem:
        self.expect("system")
        self.ident()
        self.expect("{")
        neurons = [self.neuron()]
        while self.at("neuron"):
            neurons.append(self.neuron())
        syn = self.synapses()
        self.expect("out")
        out = self.ident()
        self.expect(";")
        self.expect("}")
        if self.tok.kind != "eof":
            self.fail("end of input")
        return SnpSystem(tuple(neurons), syn, out)

    def neuron(self) -> Neuron:
        self.expect("neuron")
        nid = self.ident()
        self.expect("{")
        self.expect("spikes")
        self.expect("=")
        spikes = self.nat()
        self.expect(";")
        firing, forgetting = [], []
        while not self.at("}"):
            rule = self.rule()
            (firing if isinstance(rule, FiringRule) else forgetting).append(rule)
        self.expect("}")
        return Neuron(nid, spikes, tuple(firing), tuple(forgetting))

    def rule(self):
        pattern = self.regex()
        if self.at("/"):
            self.i += 1
            consume = self.atom().count
            self.expect("->")
            self.expect("a")
            self.expect(";")
            delay = self.nat()
            self.expect(";")
            return FiringRule(pattern, consume, delay)
        if not isinstance(pattern, Atom):
            self.fail("'/'")
        if not self.at("->"):
            self.fail("'/' or '->'")
        self.i += 1
        if self.at("a"):
            self.i += 1
            self.expect(";")
            delay = self.nat()
            self.expect(";")
            return FiringRule(pattern, pattern.count, delay)
        if self.at("lambda"):
            self.i += 1
            self.expect(";")
            return ForgettingRule(pattern.count)
        self.fail("'a' or 'lambda'")

    def regex(self):
        terms = [self.term()]
        while self.at("|"):
            self.i += 1
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else UnionP(tuple(terms))

    def term(self):
        factors = [self.factor()]
        while self.at("a") or self.at("("):
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Concat(tuple(factors))

    def factor(self):
        if self.at("("):
            self.i += 1
            inner = self.regex()
            self.expect(")")
        else:
            inner = self.atom()
        if self.at("+"):
            self.i += 1
            return Plus(inner)
        return inner

    def atom(self) -> Atom:
        if not self.at("a"):
            self.fail("'a'")
        self.i += 1
        if self.at("^"):
            self.i += 1
            t = self.tok
            n = self.nat()
            if n < 1:
                raise ParseError(t.span, "exponent >= 1", t.text)
            return Atom(n)
        return Atom(1)

    def synapses(self) -> set:
        self.expect("syn")
        self.expect("{")
        out = set()
        while not self.at("}"):
            src = self.ident()
            self.expect("->")
            dst = self.ident()
            self.expect(";")
            out.add((src, dst))
        self.expect("}")
        return out


def parse_system(text: str) -> SnpSystem:
    """Parse and validate a system; raises ParseError or ValidationError."""
    sys = _Parser(text).system()
    check_system(sys)
    return sys


def render_pattern(p) -> str:
    if isinstance(p, Atom):
        return "a" if p.count == 1 else f"a^{p.count}"
    if isinstance(p, Plus):
        inner = render_pattern(p.child)
        if not isinstance(p.child, Atom):
            inner = f"({inner})"
        return inner + "+"
    if isinstance(p, Concat):
        parts = []
        for c in p.children:
            s = render_pattern(c)
            parts.append(f"({s})" if isinstance(c, (Concat, UnionP)) else s)
        return " ".join(parts)
    if isinstance(p, UnionP):
        parts = []
        for c in p.children:
            s = render_pattern(c)
            parts.append(f"({s})" if isinstance(c, UnionP) else s)
        return " | ".join(parts)
    if isinstance(p, Lambda):
        raise ValueError("lambda has no surface syntax inside a pattern")
    raise ValueError(f"not a spike pattern: {p!r}")


def _render_rule(r) -> str:
    if isinstance(r, ForgettingRule):
        return f"a^{r.exact} -> lambda;" if r.exact != 1 else "a -> lambda;"
    if r.pattern == Atom(r.consume):
        return f"{render_pattern(r.pattern)} -> a; {r.delay};"
    consume = "a" if r.consume == 1 else f"a^{r.consume}"
    return f"{render_pattern(r.pattern)} / {consume} -> a; {r.delay};"


def render_system(sys: SnpSystem, name: str = "sys") -> str:
    order = sys.index()
    lines = [f"system {name} {{"]
    for n in sys.neurons:
        lines.append(f"  neuron {n.id} {{")
        lines.append(f"    spikes = {n.initial_spikes};")
        for r in n.rules:
            lines.append(f"    {_render_rule(r)}")
        lines.append("  }")
    lines.append("  syn {")
    for src, dst in sorted(sys.synapses, key=lambda e: (order.get(e[0], -1), order.get(e[1], -1), e)):
        lines.append(f"    {src} -> {dst};")
    lines.append("  }")
    lines.append(f"  out {sys.output};")
    lines.append("}")
    return "\n".join(lines) + "\n"
