"""Conjunctive-query patterns: terms, atoms, subpatterns and the text DSL.

A pattern file looks like::

    % comments run to end of line
    root X.
    sub sub1: edgeD(W1, T21, 1), edgeD(W1, T22, 1), vertex4(_, W1, _).
    sub sub2: ...

Atom arguments follow the fact layout of the graph schema, so
``vertex4(_, W, _)`` names the id in the middle position exactly as the fact
``vertex4(P0, Id, P2)`` stores it.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Union

from .errors import ArityMismatch, ParseError, UnknownTypeName
from .graph import DEFAULT_SCHEMA, EdgeType, Schema, ValidationReport, VertexType


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    value: int

    def __str__(self) -> str:
        return str(self.value)


class _Wildcard:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "WILDCARD"

    def __str__(self) -> str:
        return "_"

    def __reduce__(self):
        return (_Wildcard, ())


WILDCARD = _Wildcard()

Term = Union[Var, Const, _Wildcard]


class ConstraintKind(str, enum.Enum):
    EQ = "eq"
    NEQ = "neq"
    LT = "lt"
    LEQ = "leq"
    RED_RELATION = "red"
    GREEN_RELATION = "green"


@dataclass(frozen=True)
class VertexAtom:
    vtype: VertexType
    args: tuple  # fact order, id included

    @property
    def name(self) -> str:
        return self.vtype.predicate

    @property
    def terms(self) -> tuple:
        return self.args

    def id_term(self, schema: Schema) -> Term:
        return self.args[schema.vertex_id_pos[self.vtype]]

    def prop_terms(self, schema: Schema) -> tuple:
        pos = schema.vertex_id_pos[self.vtype]
        return self.args[:pos] + self.args[pos + 1:]


@dataclass(frozen=True)
class EdgeAtom:
    etype: EdgeType
    src: Term
    dst: Term
    props: tuple = ()

    @property
    def name(self) -> str:
        return self.etype.predicate

    @property
    def terms(self) -> tuple:
        return (self.src, self.dst) + self.props


@dataclass(frozen=True)
class ConstraintAtom:
    kind: ConstraintKind
    args: tuple

    @property
    def name(self) -> str:
        return self.kind.value

    @property
    def terms(self) -> tuple:
        return self.args


Atom = Union[VertexAtom, EdgeAtom, ConstraintAtom]


def is_positive(atom: Atom) -> bool:
    return not isinstance(atom, ConstraintAtom)


def atom_vars(atom: Atom) -> list[Var]:
    """Distinct variables of ``atom`` in order of first appearance."""
    seen: list[Var] = []
    for t in atom.terms:
        if isinstance(t, Var) and t not in seen:
            seen.append(t)
    return seen


def format_atom(atom: Atom) -> str:
    return f"{atom.name}({', '.join(str(t) for t in atom.terms)})"


@dataclass(frozen=True)
class Subpattern:
    name: str
    atoms: tuple

    def variables(self) -> list[Var]:
        seen: list[Var] = []
        for a in self.atoms:
            for v in atom_vars(a):
                if v not in seen:
                    seen.append(v)
        return seen


@dataclass(frozen=True)
class Pattern:
    subpatterns: tuple
    projection: Var

    @property
    def atoms(self) -> tuple:
        return tuple(a for s in self.subpatterns for a in s.atoms)

    @property
    def clause_count(self) -> int:
        return sum(len(s.atoms) for s in self.subpatterns)

    def subpattern(self, name: str) -> Subpattern:
        for s in self.subpatterns:
            if s.name == name:
                return s
        raise KeyError(name)

    def variables(self) -> list[Var]:
        seen: list[Var] = []
        for s in self.subpatterns:
            for v in s.variables():
                if v not in seen:
                    seen.append(v)
        return seen

    @cached_property
    def _exports(self) -> dict:
        out = {}
        for i, s in enumerate(self.subpatterns):
            later = {v for t in self.subpatterns[i + 1:] for v in t.variables()}
            own = s.variables()
            out[s.name] = [v for v in own if v in later or v == self.projection]
        return out

    def exports(self, name: str) -> list[Var]:
        """Variables of subpattern ``name`` that later subpatterns (or the root) use."""
        return self._exports[name]

    def atom_locations(self) -> Iterator[tuple[int, str, Atom]]:
        """Yield ``(global_index, subpattern_name, atom)`` in pattern order."""
        i = 0
        for s in self.subpatterns:
            for a in s.atoms:
                yield i, s.name, a
                i += 1


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|%[^\n]*)
  | (?P<int>-?\d+)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<wild>_[A-Za-z0-9_]*)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<punct>[(),.:])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            toks.append(_Tok(kind, chunk, line, pos - line_start + 1))
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


_CONSTRAINTS = {k.value: k for k in ConstraintKind}


class _Parser:
    def __init__(self, text: str, schema: Schema):
        self.toks = _tokenize(text)
        self.i = 0
        self.schema = schema

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> _Tok:
        t = self.next()
        if t.kind != kind or (text is not None and t.text != text):
            want = repr(text) if text is not None else kind
            got = repr(t.text) if t.kind != "eof" else "end of input"
            raise ParseError(f"expected {want}, got {got}", t.line, t.col)
        return t

    def pattern(self) -> Pattern:
        self.expect("ident", "root")
        root = Var(self.expect("var").text)
        self.expect("punct", ".")
        subs = []
        while self.peek().kind != "eof":
            subs.append(self.subpattern())
        if not subs:
            t = self.peek()
            raise ParseError("pattern has no subpatterns", t.line, t.col)
        return Pattern(tuple(subs), root)

    def subpattern(self) -> Subpattern:
        self.expect("ident", "sub")
        name = self.expect("ident").text
        self.expect("punct", ":")
        atoms = [self.atom()]
        while self.peek().text == ",":
            self.next()
            atoms.append(self.atom())
        self.expect("punct", ".")
        return Subpattern(name, tuple(atoms))

    def atom(self) -> Atom:
        head = self.expect("ident")
        self.expect("punct", "(")
        args = [self.term()]
        while self.peek().text == ",":
            self.next()
            args.append(self.term())
        self.expect("punct", ")")
        return build_atom(head.text, args, self.schema, head.line, head.col)

    def term(self) -> Term:
        t = self.next()
        if t.kind == "var":
            return Var(t.text)
        if t.kind == "int":
            return Const(int(t.text))
        if t.kind == "wild":
            return WILDCARD
        raise ParseError(f"expected a term, got {t.text or 'end of input'!r}", t.line, t.col)


def build_atom(name: str, args: list, schema: Schema = DEFAULT_SCHEMA,
               line: int | None = None, col: int | None = None) -> Atom:
    """Construct the atom for predicate ``name``, checking its arity."""
    typ = schema.predicate(name)
    if isinstance(typ, VertexType):
        want = schema.vertex_arity[typ]
        if len(args) != want:
            raise ArityMismatch(f"{name} takes {want} arguments, got {len(args)}", line, col)
        return VertexAtom(typ, tuple(args))
    if isinstance(typ, EdgeType):
        want = schema.edge_arity[typ]
        if len(args) != want:
            raise ArityMismatch(f"{name} takes {want} arguments, got {len(args)}", line, col)
        return EdgeAtom(typ, args[0], args[1], tuple(args[2:]))
    kind = _CONSTRAINTS.get(name)
    if kind is not None:
        if len(args) != 2:
            raise ArityMismatch(f"{name} takes 2 arguments, got {len(args)}", line, col)
        return ConstraintAtom(kind, tuple(args))
    raise UnknownTypeName(f"unknown predicate {name!r}", line or 0, col or 0)


def parse_pattern(text: str, schema: Schema = DEFAULT_SCHEMA) -> Pattern:
    return _Parser(text, schema).pattern()


def unparse(p: Pattern) -> str:
    lines = [f"root {p.projection}."]
    for s in p.subpatterns:
        lines.append(f"sub {s.name}: " + ", ".join(format_atom(a) for a in s.atoms) + ".")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------- validation

def validate_pattern(p: Pattern, schema: Schema = DEFAULT_SCHEMA) -> ValidationReport:
    report = ValidationReport()
    names = [s.name for s in p.subpatterns]
    for n in {n for n in names if names.count(n) > 1}:
        report.add("DuplicateSubpattern", f"subpattern {n} defined more than once")
    if not p.subpatterns:
        report.add("EmptyPattern", "pattern has no subpatterns")

    bound: set[Var] = set()
    for s in p.subpatterns:
        if not s.atoms:
            report.add("EmptySubpattern", f"subpattern {s.name} has no atoms")
        for a in s.atoms:
            if isinstance(a, VertexAtom):
                want = schema.vertex_arity[a.vtype]
                if len(a.args) != want:
                    report.add("ArityMismatch", f"{format_atom(a)}: {a.name} takes {want} arguments")
                elif a.id_term(schema) is WILDCARD:
                    report.add("WildcardId", f"{format_atom(a)}: vertex id may not be a wildcard")
            elif isinstance(a, EdgeAtom):
                want = schema.edge_arity[a.etype]
                if len(a.terms) != want:
                    report.add("ArityMismatch", f"{format_atom(a)}: {a.name} takes {want} arguments")
            else:
                if len(a.args) != 2:
                    report.add("ArityMismatch", f"{format_atom(a)}: constraints take 2 arguments")
                if any(t is WILDCARD for t in a.args):
                    report.add("WildcardInConstraint", f"{format_atom(a)}: wildcard in a constraint")
        # constraints may refer to variables bound anywhere in this or an earlier subpattern
        bound.update(v for a in s.atoms if is_positive(a) for v in atom_vars(a))
        for a in s.atoms:
            if not is_positive(a):
                for v in atom_vars(a):
                    if v not in bound:
                        report.add("RangeRestriction",
                                   f"{format_atom(a)} in {s.name}: {v} not bound by a positive atom")
    if p.projection not in bound:
        report.add("RangeRestriction", f"projection {p.projection} never occurs in a positive atom")
    return report


# ---------------------------------------------------------------- builtin

STAR = 1

AGILE_LITE_SOURCE = """\
% Root X is a type-1 vertex; red/green are the two cross-constraints.
root X.
sub sub1: edgeD(W1, T21, 1), edgeD(W1, T22, 1), vertex4(_, W1, _).
sub sub2: edgeD(W2, T21, 1), edgeD(W2, T22, 1), vertex4(_, W2, _), neq(W1, W2),
          edgeB(V3, W1), edgeB(V3, W2), vertex3(V3).
sub sub3: vertex1(X), edgeE(X, S5), vertex5(S5), edgeA(X, Y1, Pa),
          vertex4(K4, W1, _), green(Pa, K4).
sub sub4: edgeF(Z2, X), vertex2(Z2, _, _).
sub sub5: edgeA(X, Y1, Pa), eq(Pa, 1), vertex1(Y1).
sub sub6: edgeC(X, U1), edgeC(X, U2), edgeC(X, U3),
          vertex4(_, U1, _), vertex4(_, U2, _), vertex4(_, U3, _),
          neq(U1, U2), neq(U1, U3), neq(U2, U3), edgeB(V3, U1), red(T21, T22).
"""


def builtin_agile_lite() -> Pattern:
    """The built-in root-finding pattern, subpatterns ``sub1`` .. ``sub6``.

    sub1/sub2 find two distinct type-4 vertices that both have starred D
    edges to the same pair of type-2 vertices and share a type-3 parent over
    B edges. sub3 anchors the root (E edge to a type-5 vertex, A edge whose
    property is green-related to the first type-4 vertex's leading property),
    sub4 asks for an incoming F edge from a type-2 vertex, sub5 requires the
    A edge to be starred and to end at a type-1 vertex, and sub6 wants three
    distinct C-neighbours of type 4, one of which hangs off the type-3
    vertex, plus the red relation between the two type-2 vertices.
    """
    return parse_pattern(AGILE_LITE_SOURCE)
