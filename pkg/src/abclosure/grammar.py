"""Word-specification language.

    spec   := NAME [ '(' [ args ] ')' ]
    args   := arg { (',' | ';') arg }
    arg    := ATOM [ '=' value | '->' ATOM | '(' [ args ] ')' ]
            | '{' [ ATOM { ',' ATOM } ] '}'
    value  := ATOM [ '(' [ args ] ')' ] | '{' ... '}'

ATOMs cover names, letter strings and rationals (``-3/2``); irrationals are
written ``quad(q0,q1,D)`` for q0 + q1*sqrt(D).  The grammar is LL(1): every
decision is made on the next token, so errors can list the expected tokens.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from .exactnum import QuadExt

__all__ = ["SpecSyntaxError", "Node", "Atom", "Pair", "LetterSet", "Arg", "parse_spec", "render",
           "evaluate", "build", "CONSTRUCTORS"]


class SpecSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, col: int, expected: Tuple[str, ...] = ()):
        self.line, self.col, self.expected = line, col, tuple(expected)
        full = f"line {line}, column {col}: {msg}"
        if expected:
            full += f" (expected one of: {', '.join(expected)})"
        super().__init__(full)


@dataclass(frozen=True)
class Atom:
    text: str


@dataclass(frozen=True)
class Pair:
    src: str
    dst: str


@dataclass(frozen=True)
class LetterSet:
    letters: Tuple[str, ...]


@dataclass(frozen=True)
class Arg:
    key: Optional[str]
    value: "Value"


@dataclass(frozen=True)
class Node:
    name: str
    args: Tuple[Arg, ...] = ()
    called: bool = False          # written with parentheses
    pos: Tuple[int, int] = (1, 1)

    def __eq__(self, other):
        # positions are diagnostics only
        return (isinstance(other, Node) and self.name == other.name and self.args == other.args
                and self.called == other.called)

    def __hash__(self):
        return hash((self.name, self.args, self.called))


Value = Union[Node, Atom, Pair, LetterSet]

# ---------------------------------------------------------------------------
# lexer

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<arrow>->)
  | (?P<atom>-?[A-Za-z0-9_]+(?:/-?[0-9]+)?)
  | (?P<punct>[(),;={}])
""", re.VERBOSE)

_DISPLAY = {"(": "'('", ")": "')'", ",": "','", ";": "';'", "=": "'='", "{": "'{'", "}": "'}'",
            "->": "'->'", "ATOM": "name/letters/number", "EOF": "end of input"}


@dataclass(frozen=True)
class Tok:
    kind: str     # ATOM, EOF or the punctuation itself
    text: str
    line: int
    col: int


def tokenize(text: str):
    out = []
    i, line, col = 0, 1, 1
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise SpecSyntaxError(f"unexpected character {text[i]!r}", line, col)
        s = m.group(0)
        if m.lastgroup == "atom":
            out.append(Tok("ATOM", s, line, col))
        elif m.lastgroup in ("punct", "arrow"):
            out.append(Tok(s, s, line, col))
        for ch in s:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        i = m.end()
    out.append(Tok("EOF", "", line, col))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def fail(self, expected):
        t = self.tok
        found = "end of input" if t.kind == "EOF" else repr(t.text)
        raise SpecSyntaxError(f"unexpected {found}", t.line, t.col,
                              tuple(_DISPLAY.get(e, e) for e in expected))

    def eat(self, kind: str) -> Tok:
        if self.tok.kind != kind:
            self.fail((kind,))
        t = self.tok
        self.i += 1
        return t

    def spec(self) -> Node:
        t = self.eat("ATOM")
        node = self._call_rest(t)
        return node

    def _call_rest(self, t: Tok) -> Node:
        if self.tok.kind != "(":
            return Node(t.text, (), False, (t.line, t.col))
        self.eat("(")
        args = ()
        if self.tok.kind != ")":
            args = self.args()
        self.eat(")")
        return Node(t.text, args, True, (t.line, t.col))

    def args(self):
        out = [self.arg()]
        while self.tok.kind in (",", ";"):
            self.i += 1
            out.append(self.arg())
        if self.tok.kind not in (")",):
            self.fail((")", ",", ";"))
        return tuple(out)

    def arg(self) -> Arg:
        if self.tok.kind == "{":
            return Arg(None, self.letter_set())
        if self.tok.kind != "ATOM":
            self.fail(("ATOM", "{"))
        t = self.eat("ATOM")
        if self.tok.kind == "=":
            self.eat("=")
            return Arg(t.text, self.value())
        if self.tok.kind == "->":
            self.eat("->")
            return Arg(None, Pair(t.text, self.eat("ATOM").text))
        if self.tok.kind == "(":
            return Arg(None, self._call_rest(t))
        if self.tok.kind in (",", ";", ")"):
            return Arg(None, Atom(t.text))
        self.fail(("=", "->", "(", ",", ";", ")"))

    def value(self) -> Value:
        if self.tok.kind == "{":
            return self.letter_set()
        t = self.eat("ATOM")
        if self.tok.kind == "(":
            return self._call_rest(t)
        return Atom(t.text)

    def letter_set(self) -> LetterSet:
        self.eat("{")
        letters = []
        if self.tok.kind == "ATOM":
            letters.append(self.eat("ATOM").text)
            while self.tok.kind == ",":
                self.eat(",")
                letters.append(self.eat("ATOM").text)
        if self.tok.kind != "}":
            self.fail(("}", ",") if letters else ("}", "ATOM"))
        self.eat("}")
        return LetterSet(tuple(letters))


def parse_spec(text: str) -> Node:
    """Parse a word specification and validate it against the constructor table."""
    p = _Parser(text)
    node = p.spec()
    if p.tok.kind != "EOF":
        p.fail(("EOF",) if node.called else ("EOF", "("))
    _validate(node)
    return node


# ---------------------------------------------------------------------------
# rendering

def render(v) -> str:
    if isinstance(v, Node):
        if not v.called:
            return v.name
        return f"{v.name}(" + ", ".join(_render_arg(a) for a in v.args) + ")"
    if isinstance(v, Atom):
        return v.text
    if isinstance(v, Pair):
        return f"{v.src}->{v.dst}"
    if isinstance(v, LetterSet):
        return "{" + ",".join(v.letters) + "}"
    raise TypeError(type(v))


def _render_arg(a: Arg) -> str:
    return (f"{a.key}=" if a.key else "") + render(a.value)


# ---------------------------------------------------------------------------
# constructor table: name -> (positional kinds, keyword kinds, required keywords)
# kinds: spec, word, int, number, bool, conv, letters, pairs (variadic)

CONSTRUCTORS = {
    "tm": ((), {}, ()),
    "fib": ((), {}, ()),
    "trib": ((), {}, ()),
    "champ": (("int",), {}, ()),
    "periodic": (("word",), {}, ()),
    "preperiodic": (("word", "word"), {}, ()),
    "sturmian": ((), {"alpha": "number", "rho": "number", "conv": "conv"}, ("alpha",)),
    "ternary": ((), {"alpha": "number", "zeta": "number", "rho": "number",
                     "one_in_j1": "bool", "zeta_in_j2": "bool"}, ("alpha", "zeta")),
    "interleave": (("spec", "spec", "spec"), {}, ()),
    "morphic": (("pairs",), {"start": "word"}, ()),
    "image": (("spec", "pairs"), {}, ()),
    "ar": ((), {"directive": "spec", "max": "int"}, ("directive",)),
    "fm": ((), {"G": "letters", "E": "letters", "F": "letters", "s": "spec"}, ("G", "E", "F", "s")),
    "prepend": (("word", "spec"), {}, ()),
    "shift": (("spec", "int"), {}, ()),
}

_NUM = re.compile(r"^-?[0-9]+(?:/-?[0-9]+)?$")


def _err(node_or_pos, msg):
    line, col = node_or_pos.pos if isinstance(node_or_pos, Node) else node_or_pos
    raise SpecSyntaxError(msg, line, col)


def _validate(node: Node):
    if node.name not in CONSTRUCTORS:
        _err(node, f"unknown constructor {node.name!r}; known: {', '.join(sorted(CONSTRUCTORS))}")
    pos_kinds, kw_kinds, required = CONSTRUCTORS[node.name]
    if (pos_kinds or kw_kinds) and not node.called:
        _err(node, f"{node.name} needs arguments")
    if not (pos_kinds or kw_kinds) and node.args:
        _err(node, f"{node.name} takes no arguments")
    positional = [a.value for a in node.args if a.key is None]
    keywords = {}
    for a in node.args:
        if a.key is not None:
            if a.key not in kw_kinds:
                _err(node, f"{node.name} has no argument {a.key!r}; allowed: {', '.join(kw_kinds) or 'none'}")
            if a.key in keywords:
                _err(node, f"argument {a.key!r} given twice")
            keywords[a.key] = a.value
    variadic = bool(pos_kinds) and pos_kinds[-1] == "pairs"
    fixed = pos_kinds[:-1] if variadic else pos_kinds
    if len(positional) < len(fixed) + (1 if variadic else 0) or (
            not variadic and len(positional) > len(fixed)):
        want = f"{len(fixed)}{'+' if variadic else ''}"
        _err(node, f"{node.name} takes {want} positional argument(s), got {len(positional)}")
    for v, kind in zip(positional, fixed):
        _check_kind(node, v, kind)
    for v in positional[len(fixed):]:
        _check_kind(node, v, "pair")
    for k, v in keywords.items():
        _check_kind(node, v, kw_kinds[k])
    for k in required:
        if k not in keywords:
            _err(node, f"{node.name} requires argument {k!r}")


def _check_kind(node, v, kind):
    if kind == "spec":
        if not isinstance(v, (Node, Atom)):
            _err(node, f"{node.name}: expected a word specification")
        _validate(v if isinstance(v, Node) else Node(v.text, (), False, node.pos))
    elif kind in ("word", "int", "bool", "conv"):
        if not isinstance(v, Atom):
            _err(node, f"{node.name}: expected {kind}, got {render(v)}")
        if kind == "int" and not re.fullmatch(r"[0-9]+", v.text):
            _err(node, f"{node.name}: expected a non-negative integer, got {v.text}")
        if kind == "bool" and v.text not in ("true", "false"):
            _err(node, f"{node.name}: expected true or false, got {v.text}")
        if kind == "conv" and v.text not in ("under", "bar"):
            _err(node, f"{node.name}: conv must be under or bar, got {v.text}")
    elif kind == "number":
        _number(v, node)
    elif kind == "letters":
        if not isinstance(v, (Atom, LetterSet)):
            _err(node, f"{node.name}: expected letters")
    elif kind == "pair":
        if not isinstance(v, Pair):
            _err(node, f"{node.name}: expected a mapping a->w, got {render(v)}")


def _number(v, node) -> QuadExt:
    if isinstance(v, Atom):
        if not _NUM.match(v.text):
            _err(node, f"malformed number literal {v.text!r}")
        try:
            return QuadExt(Fraction(v.text))
        except (ValueError, ZeroDivisionError):
            _err(node, f"malformed number literal {v.text!r}")
    if isinstance(v, Node) and v.name == "quad":
        parts = [a.value for a in v.args]
        if len(parts) != 3 or any(a.key for a in v.args) or not all(isinstance(p, Atom) for p in parts):
            _err(v, "quad takes three numbers: quad(q0,q1,D)")
        for p in parts:
            if not _NUM.match(p.text):
                _err(v, f"malformed number literal {p.text!r}")
        if not re.fullmatch(r"[0-9]+", parts[2].text):
            _err(v, f"quad: D must be a non-negative integer, got {parts[2].text}")
        try:
            return QuadExt(Fraction(parts[0].text), Fraction(parts[1].text), int(parts[2].text))
        except (ValueError, ZeroDivisionError) as e:
            _err(v, f"bad quad literal: {e}")
    _err(node, f"expected a number, got {render(v)}")


def number_literal(q: QuadExt) -> str:
    """Inverse of the number syntax."""
    return str(q)


# ---------------------------------------------------------------------------
# evaluation

def _letters(v) -> str:
    return "".join(v.letters) if isinstance(v, LetterSet) else v.text


def evaluate(node: Node):
    """Build the InfiniteWord described by a validated AST; its name is the canonical spec."""
    from . import generators as g

    name = render(node)
    pos = [a.value for a in node.args if a.key is None]
    kw = {a.key: a.value for a in node.args if a.key is not None}

    def sub(v):
        return evaluate(v if isinstance(v, Node) else Node(v.text))

    n = node.name
    if n in ("tm", "fib", "trib"):
        w = {"tm": g.thue_morse, "fib": g.fibonacci, "trib": g.tribonacci}[n]()
    elif n == "champ":
        w = g.Champernowne(int(pos[0].text))
    elif n == "periodic":
        w = g.periodic(pos[0].text)
    elif n == "preperiodic":
        w = g.preperiodic(pos[0].text, pos[1].text)
    elif n == "sturmian":
        w = g.BinaryRotationWord(g.BinaryRotationSpec(
            _number(kw["alpha"], node), _number(kw.get("rho", Atom("0")), node),
            kw.get("conv", Atom("under")).text))
    elif n == "ternary":
        w = g.TernaryRotationWord(g.TernaryRotationSpec(
            _number(kw["alpha"], node), _number(kw["zeta"], node),
            _number(kw.get("rho", Atom("0")), node),
            kw.get("one_in_j1", Atom("false")).text == "true",
            kw.get("zeta_in_j2", Atom("false")).text == "true"))
    elif n == "interleave":
        w = g.Interleave(g.InterleaveSpec(sub(pos[0]), sub(pos[1]), sub(pos[2])))
    elif n == "morphic":
        mapping = _mapping(node, pos)
        start = kw["start"].text if "start" in kw else pos[0].src
        w = g.MorphicFixedPoint(g.MorphismSpec(mapping, start))
    elif n == "image":
        w = g.MorphicImage(sub(pos[0]), _mapping(node, pos[1:]))
    elif n == "ar":
        w = g.ArnouxRauzy(sub(kw["directive"]), int(kw["max"].text) if "max" in kw else 1 << 16)
    elif n == "fm":
        w = g.fm_min_complexity_word(_letters(kw["E"]), _letters(kw["F"]), _letters(kw["G"]),
                                     sub(kw["s"]))
    elif n == "prepend":
        w = g.Prepend(pos[0].text, sub(pos[1]))
    elif n == "shift":
        w = g.Shift(sub(pos[0]), int(pos[1].text))
    else:  # pragma: no cover - guarded by _validate
        raise SpecSyntaxError(f"unknown constructor {n!r}", *node.pos)
    w.name = name
    return w


def _mapping(node, pairs) -> dict:
    mapping = {}
    for p in pairs:
        if p.src in mapping:
            _err(node, f"letter {p.src!r} mapped twice")
        mapping[p.src] = p.dst
    return mapping


def build(text: str):
    """parse + evaluate."""
    return evaluate(parse_spec(text))
