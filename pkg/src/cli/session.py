"""
Session Language

A session is a line-based script: one binding or command per line, `#`
starts a comment. Polynomial texts are kept verbatim and parsed only when
the statement runs, against the ring of the algebra they refer to.

    ring A = vars[w, x] rels[x^2 - w^3] idef[w]
    ideal J = A (x, w)
    point P = A e=2 x -> v^3
    map F = A to B x -> y
    blowup At = A ideal(x, w)
    extend K = A at x frac(w, 1)
    normalize N = A --degree-bound 6
    check principal At
    show At

Every statement renders back to a canonical line that reparses to an
equal statement.
"""

import re
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple, Union

from src.algebra.errors import MissingUniformizer, ToolkitError
from src.config.settings import settings
from src.utils.logging import get_logger

logger = get_logger(__name__)

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\??")
_INT = re.compile(r"-?\d+")
_FLAG = re.compile(r"--([a-z][a-z-]*)\s+(-?\d+)")


class SessionSyntaxError(ToolkitError):
    code = "SyntaxError"

    def __init__(self, line: int, col: int, expected: str) -> None:
        self.line = line
        self.col = col
        self.expected = expected
        super().__init__(f"line {line}, column {col}: expected {expected}")


class UnboundName(ToolkitError):
    code = "UnboundName"

    def __init__(self, name: str, line: int = 0) -> None:
        self.name = name
        self.line = line
        super().__init__(f"line {line}: name {name!r} is not bound" if line else f"name {name!r} is not bound")


# -----------------------------------------------------------------
# ARGUMENT NODES
# -----------------------------------------------------------------
@dataclass(frozen=True)
class Ref:
    name: str

    def render(self) -> str:
        return self.name


@dataclass(frozen=True)
class Num:
    value: int

    def render(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Word:
    text: str

    def render(self) -> str:
        return self.text


@dataclass(frozen=True)
class Ramification:
    e: int

    def render(self) -> str:
        return f"e={self.e}"


@dataclass(frozen=True)
class Poly_:
    text: str

    def render(self) -> str:
        return self.text


@dataclass(frozen=True)
class IdealLit:
    gens: Tuple[str, ...]

    def render(self) -> str:
        return f"ideal({', '.join(self.gens)})"


@dataclass(frozen=True)
class Frac:
    numerator: str
    exponent: int

    def render(self) -> str:
        return f"frac({self.numerator}, {self.exponent})"


@dataclass(frozen=True)
class RingSpec:
    variables: Tuple[str, ...]
    relations: Tuple[str, ...]
    idef: Tuple[str, ...]

    def render(self) -> str:
        return (
            f"vars[{', '.join(self.variables)}] rels[{', '.join(self.relations)}] "
            f"idef[{', '.join(self.idef)}]"
        )


@dataclass(frozen=True)
class Assignments:
    items: Tuple[Tuple[str, str], ...]

    def render(self) -> str:
        return ", ".join(f"{name} -> {text}" for name, text in self.items)


Arg = Union[Ref, Num, Word, Ramification, Poly_, IdealLit, Frac, RingSpec, Assignments]


@dataclass(frozen=True)
class Statement:
    keyword: str
    target: Optional[str]
    args: Tuple[Arg, ...]
    flags: Tuple[Tuple[str, int], ...] = ()
    line: int = field(default=0, compare=False)

    def flag(self, name: str, default: Optional[int] = None) -> Optional[int]:
        return dict(self.flags).get(name, default)

    def render(self) -> str:
        parts = [self.keyword]
        if self.target is not None:
            parts += [self.target, "="]
        pieces = []
        for arg in self.args:
            text = arg.render()
            if isinstance(arg, Frac) and pieces and pieces[-1].startswith("frac("):
                pieces[-1] += ","
            pieces.append(text)
        parts += pieces
        parts += [f"--{name} {value}" for name, value in self.flags]
        return " ".join(p for p in parts if p != "")


@dataclass
class Session:
    """Ordered bindings (name -> kind) and the statements in file order."""

    statements: List[Statement]
    bindings: Dict[str, str]

    def render(self) -> str:
        return "\n".join(s.render() for s in self.statements) + "\n"


# -----------------------------------------------------------------
# CURSOR
# -----------------------------------------------------------------
class _Cursor:
    def __init__(self, text: str, line: int) -> None:
        self.text = text
        self.line = line
        self.pos = 0

    def ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.ws()
        return self.pos >= len(self.text)

    def error(self, expected: str):
        raise SessionSyntaxError(self.line, self.pos + 1, expected)

    def name(self, expected: str = "a name") -> str:
        self.ws()
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.error(expected)
        self.pos = m.end()
        return m.group()

    def peek_name(self) -> Optional[str]:
        self.ws()
        m = _NAME.match(self.text, self.pos)
        return m.group() if m else None

    def literal(self, lit: str) -> None:
        if not self.try_literal(lit):
            self.error(repr(lit))

    def try_literal(self, lit: str) -> bool:
        self.ws()
        if self.text.startswith(lit, self.pos):
            self.pos += len(lit)
            return True
        return False

    def integer(self, expected: str = "an integer") -> int:
        self.ws()
        m = _INT.match(self.text, self.pos)
        if not m:
            self.error(expected)
        self.pos = m.end()
        return int(m.group())

    def balanced(self, open_: str, close: str) -> str:
        self.literal(open_)
        start = self.pos
        depth = 1
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == open_:
                depth += 1
            elif ch == close:
                depth -= 1
                if depth == 0:
                    inner = self.text[start:self.pos]
                    self.pos += 1
                    return inner
            self.pos += 1
        self.error(repr(close))

    def rest(self) -> str:
        self.ws()
        text = self.text[self.pos:].strip()
        self.pos = len(self.text)
        return text

    def end(self) -> None:
        if not self.at_end():
            self.error("end of line")


def _split_top(text: str) -> Tuple[str, ...]:
    """Splits on commas outside parentheses and brackets; drops empty items."""
    items, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            items.append(text[start:i])
            start = i + 1
    items.append(text[start:])
    return tuple(item.strip() for item in items if item.strip())


# -----------------------------------------------------------------
# ARGUMENT PARSERS
# -----------------------------------------------------------------
def _ideal(cur: _Cursor) -> Arg:
    name = cur.peek_name()
    if name == "ideal":
        cur.name()
        return IdealLit(_split_top(cur.balanced("(", ")")))
    if name is None:
        cur.error("an ideal name or ideal(...)")
    return Ref(cur.name())


def _fracs(cur: _Cursor) -> List[Frac]:
    out = []
    while not cur.at_end():
        if out:
            cur.literal(",")
        if cur.peek_name() != "frac":
            cur.error("frac(numerator, exponent)")
        cur.name()
        inner = _split_top(cur.balanced("(", ")"))
        if len(inner) != 2 or not _INT.fullmatch(inner[1]):
            cur.error("frac(numerator, exponent)")
        out.append(Frac(inner[0], int(inner[1])))
    return out


def _assignments(cur: _Cursor) -> Assignments:
    items = []
    for item in _split_top(cur.rest()):
        if "->" not in item:
            cur.error("an assignment 'name -> value'")
        name, value = item.split("->", 1)
        name, value = name.strip(), value.strip()
        if not _NAME.fullmatch(name) or not value:
            cur.error("an assignment 'name -> value'")
        items.append((name, value))
    return Assignments(tuple(items))


def _parse_ring(cur: _Cursor) -> Tuple[Arg, ...]:
    sections = {"vars": (), "rels": (), "idef": ()}
    seen = False
    while not cur.at_end():
        key = cur.name("vars[..], rels[..] or idef[..]")
        if key not in sections:
            cur.error("vars[..], rels[..] or idef[..]")
        sections[key] = _split_top(cur.balanced("[", "]"))
        seen = seen or key == "vars"
    if not seen:
        cur.error("vars[..]")
    return (RingSpec(sections["vars"], sections["rels"], sections["idef"]),)


def _parse_ideal_binding(cur: _Cursor) -> Tuple[Arg, ...]:
    algebra = Ref(cur.name("an algebra name"))
    if cur.peek_name() == "ideal":
        cur.name()
    gens = _split_top(cur.balanced("(", ")"))
    cur.end()
    return (algebra, IdealLit(gens))


def _parse_point(cur: _Cursor) -> Tuple[Arg, ...]:
    algebra = Ref(cur.name("an algebra name"))
    cur.literal("e=")
    e = Ramification(cur.integer("the ramification index"))
    return (algebra, e, _assignments(cur))


def _parse_map(cur: _Cursor) -> Tuple[Arg, ...]:
    source = Ref(cur.name("a source algebra"))
    if cur.name("'to'") != "to":
        cur.error("'to'")
    target = Ref(cur.name("a target algebra"))
    return (source, Word("to"), target, _assignments(cur))


def _parse_gb(cur: _Cursor) -> Tuple[Arg, ...]:
    algebra = Ref(cur.name("an algebra name"))
    if cur.at_end():
        return (algebra,)
    ideal = _ideal(cur)
    cur.end()
    return (algebra, ideal)


def _parse_sat(cur: _Cursor) -> Tuple[Arg, ...]:
    algebra = Ref(cur.name("an algebra name"))
    if cur.at_end():
        return (algebra,)
    ideal = _ideal(cur)
    if cur.name("'at'") != "at":
        cur.error("'at'")
    return (algebra, ideal, Word("at"), Poly_(cur.rest() or cur.error("an element")))


def _parse_blowup(cur: _Cursor) -> Tuple[Arg, ...]:
    algebra = Ref(cur.name("an algebra name"))
    ideal = _ideal(cur)
    cur.end()
    return (algebra, ideal)


def _parse_transition(cur: _Cursor) -> Tuple[Arg, ...]:
    atlas = Ref(cur.name("an atlas name"))
    i, j = Num(cur.integer("a chart index")), Num(cur.integer("a chart index"))
    cur.end()
    return (atlas, i, j)


def _parse_compose(cur: _Cursor) -> Tuple[Arg, ...]:
    algebra = Ref(cur.name("an algebra name"))
    first, second = _ideal(cur), _ideal(cur)
    cur.end()
    return (algebra, first, second)


def _parse_extend(cur: _Cursor) -> Tuple[Arg, ...]:
    algebra = Ref(cur.name("an algebra name"))
    if cur.name("'at'") != "at":
        cur.error("'at'")
    cur.ws()
    start = cur.pos
    # the localized element runs up to the first frac(
    index = cur.text.find("frac(", start)
    if index < 0:
        cur.error("frac(numerator, exponent)")
    g = cur.text[start:index].strip()
    if not g:
        cur.error("an element")
    cur.pos = index
    return (algebra, Word("at"), Poly_(g), *_fracs(cur))


def _parse_finmod(cur: _Cursor) -> Tuple[Arg, ...]:
    algebra = Ref(cur.name("an algebra name"))
    return (algebra, *_fracs(cur))


def _parse_algebra_number(cur: _Cursor) -> Tuple[Arg, ...]:
    algebra = Ref(cur.name("an algebra name"))
    n = Num(cur.integer("a chart index"))
    cur.end()
    return (algebra, n)


def _parse_gentrans(cur: _Cursor) -> Tuple[Arg, ...]:
    algebra = Ref(cur.name("an algebra name"))
    m, n = Num(cur.integer("m")), Num(cur.integer("n"))
    cur.end()
    return (algebra, m, n)


def _parse_tube(cur: _Cursor) -> Tuple[Arg, ...]:
    algebra = Ref(cur.name("an algebra name"))
    ideal = _ideal(cur)
    n = Num(cur.integer("a chart index"))
    cur.end()
    return (algebra, ideal, n)


def _parse_spc(cur: _Cursor) -> Tuple[Arg, ...]:
    point = Ref(cur.name("a point name"))
    return (point, Poly_(cur.rest() or cur.error("an element")))


def _parse_lift(cur: _Cursor) -> Tuple[Arg, ...]:
    point = Ref(cur.name("a point name"))
    atlas = _ideal(cur)
    cur.end()
    return (point, atlas)


def _parse_descend(cur: _Cursor) -> Tuple[Arg, ...]:
    source = Ref(cur.name("a source algebra"))
    target = Ref(cur.name("a target algebra"))
    return (source, target, *_fracs(cur))


def _parse_single(cur: _Cursor) -> Tuple[Arg, ...]:
    ref = Ref(cur.name())
    cur.end()
    return (ref,)


def _parse_normblowup(cur: _Cursor) -> Tuple[Arg, ...]:
    return _parse_blowup(cur)


_CHECKS: Dict[str, Callable[[_Cursor], Tuple[Arg, ...]]] = {
    "principal": _parse_single,
    "torsionfree": _parse_single,
    "cocycle": _parse_single,
    "closed": _parse_single,
    "adic": _parse_single,
    "uniform": lambda cur: (Ref(cur.name("an algebra name")), *_fracs(cur)),
    "transitivity": lambda cur: (
        Ref(cur.name("an algebra name")),
        Num(cur.integer("l")),
        Num(cur.integer("m")),
        Num(cur.integer("n")),
    ),
}


def _parse_check(cur: _Cursor) -> Tuple[Arg, ...]:
    prop = cur.name("a property name")
    if prop not in _CHECKS:
        cur.error(f"one of {', '.join(sorted(_CHECKS))}")
    args = _CHECKS[prop](cur)
    cur.end()
    return (Word(prop), *args)


# keyword -> (binding: "required" | "optional" | "none", kind bound, parser)
GRAMMAR: Dict[str, Tuple[str, Optional[str], Callable[[_Cursor], Tuple[Arg, ...]]]] = {
    "ring": ("required", "algebra", _parse_ring),
    "ideal": ("required", "ideal", _parse_ideal_binding),
    "point": ("required", "point", _parse_point),
    "map": ("required", "map", _parse_map),
    "gb": ("none", None, _parse_gb),
    "sat": ("optional", "algebra", _parse_sat),
    "blowup": ("optional", "atlas", _parse_blowup),
    "transition": ("none", None, _parse_transition),
    "compose": ("optional", "atlas", _parse_compose),
    "extend": ("optional", "ideal", _parse_extend),
    "finmod": ("optional", "ideal", _parse_finmod),
    "genchart": ("optional", "algebra", _parse_algebra_number),
    "gentrans": ("none", None, _parse_gentrans),
    "tube": ("optional", "algebra", _parse_tube),
    "spc": ("none", None, _parse_spc),
    "lift": ("optional", "point", _parse_lift),
    "descend": ("optional", "map", _parse_descend),
    "normalize": ("optional", "normalization", _parse_single),
    "normblowup": ("optional", "atlas", _parse_normblowup),
    "check": ("none", None, _parse_check),
    "show": ("none", None, _parse_single),
    "empty?": ("none", None, _parse_single),
}


def parse_statement(text: str, line: int = 1) -> Statement:
    """Parses one non-empty, comment-free line."""
    flags = []
    for m in _FLAG.finditer(text):
        flags.append((m.group(1), int(m.group(2))))
    # blank out flags, keeping columns stable
    stripped = _FLAG.sub(lambda m: " " * len(m.group()), text)
    cur = _Cursor(stripped, line)
    keyword = cur.name("a command")
    if keyword not in GRAMMAR:
        cur.pos = 0
        cur.ws()
        cur.error(f"a command ({', '.join(sorted(GRAMMAR))})")
    binding, _, parser = GRAMMAR[keyword]
    target = None
    if binding != "none":
        save = cur.pos
        candidate = cur.peek_name()
        if candidate is not None:
            cur.name()
            if cur.try_literal("=") and not cur.text.startswith("=", cur.pos):
                target = candidate
            else:
                cur.pos = save
        if binding == "required" and target is None:
            cur.error("'<name> ='")
    args = parser(cur)
    return Statement(keyword, target, tuple(args), tuple(flags), line)


def _references(statement: Statement) -> List[str]:
    refs = [a.name for a in statement.args if isinstance(a, Ref)]
    return refs


def parse_session(text: str, uniformizer: Optional[str] = None) -> Session:
    """
    Parses a whole session script and resolves names.

    Raises:
        SessionSyntaxError: with line, column and what was expected.
        UnboundName: when a statement refers to a name not bound before it.
        MissingUniformizer: when a ring omits the uniformizer variable.
    """
    uniformizer = uniformizer or settings.UNIFORMIZER_NAME
    statements: List[Statement] = []
    bindings: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        statement = parse_statement(line, lineno)
        for name in _references(statement):
            if name not in bindings:
                logger.error(f"Line {lineno}: unbound name {name!r}")
                raise UnboundName(name, lineno)
        if statement.keyword == "ring":
            spec = statement.args[0]
            if uniformizer not in spec.variables:
                raise MissingUniformizer(
                    f"line {lineno}: the uniformizer {uniformizer!r} is not among vars[{', '.join(spec.variables)}]"
                )
        if statement.target is not None:
            bindings[statement.target] = GRAMMAR[statement.keyword][1]
        statements.append(statement)
    return Session(statements, bindings)
