"""Fact files, columnar interchange, Prolog export and the metrics CSV."""

from __future__ import annotations

import io
import math
import re
from typing import IO, Iterable, Sequence

from .errors import ArityMismatch, DuplicateId, ParseError, UnknownPredicate
from .graph import (
    DEFAULT_SCHEMA, EdgeRecord, EdgeType, GraphStore, Schema, ValidationReport, VertexRecord,
    VertexType,
)
from .metrics import BenchRow
from .pattern import (
    Atom, ConstraintAtom, ConstraintKind, Pattern, format_atom,
)
from .engine import RED_KEY_PROP, evaluation_order

# Fact files use the default Schema's predicate layout; ``FactSchema`` is the
# same object seen from the file side.
FactSchema = Schema

_FACT = re.compile(r"\s*([a-z][A-Za-z0-9_]*)\s*\(([^()]*)\)\s*\.\s*(?:%.*)?$")


def _lines(src: str | IO[str] | Iterable[str]) -> Iterable[str]:
    if isinstance(src, str):
        return io.StringIO(src)
    return src


def load_facts(src: str | IO[str] | Iterable[str],
               schema: FactSchema = DEFAULT_SCHEMA) -> tuple[GraphStore, ValidationReport]:
    """Parse ``name(arg, ...).`` lines into a frozen store.

    Blank lines and ``%`` comments are skipped. The first malformed line
    raises with its line number; endpoint problems do not raise and come back
    in the :class:`ValidationReport`.
    """
    g = GraphStore(schema)
    vertex_from_args = schema.vertex_from_args
    for lineno, line in enumerate(_lines(src), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("%"):
            continue
        m = _FACT.match(line)
        if m is None:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError(f"expected name(arg, ...). but got {stripped[:40]!r}", lineno, col)
        name, body = m.group(1), m.group(2)
        typ = schema.predicate(name)
        if typ is None:
            raise UnknownPredicate(f"unknown predicate {name!r}", lineno, m.start(1) + 1)
        try:
            args = [int(a) for a in body.split(",")] if body.strip() else []
        except ValueError:
            raise ParseError(f"non-integer argument in {name}({body})", lineno, m.start(2) + 1) from None
        if isinstance(typ, VertexType):
            want = schema.vertex_arity[typ]
            if len(args) != want:
                raise ArityMismatch(f"{name} takes {want} arguments, got {len(args)}", lineno, m.start(1) + 1)
            try:
                g.add_vertex(vertex_from_args(typ, args))
            except DuplicateId as exc:
                raise DuplicateId(f"line {lineno}: {exc}") from None
        else:
            want = schema.edge_arity[typ]
            if len(args) != want:
                raise ArityMismatch(f"{name} takes {want} arguments, got {len(args)}", lineno, m.start(1) + 1)
            g._insert_edge(EdgeRecord(args[0], args[1], typ, tuple(args[2:])))
    g.freeze()
    return g, g.validate()


def _vertex_line(schema: Schema, v: VertexRecord) -> str:
    return f"{v.vtype.predicate}({', '.join(map(str, schema.vertex_fact_args(v)))}).\n"


def _edge_line(e: EdgeRecord) -> str:
    return f"{e.etype.predicate}({', '.join(map(str, (e.src, e.dst) + e.props))}).\n"


def _emit(write, g: GraphStore, grouped: bool) -> None:
    schema = g.schema
    if grouped:
        for vt in VertexType:
            for v in g.vertices_of_type(vt):
                write(_vertex_line(schema, v))
        for et in EdgeType:
            for e in g.edges_of_type(et):
                write(_edge_line(e))
    else:
        for v in g.vertices():
            write(_vertex_line(schema, v))
        for e in g.edges():
            write(_edge_line(e))


def save_facts(g: GraphStore, fp: IO[str] | None = None) -> str | None:
    """Write ``g`` as fact lines in insertion order; returns the text if ``fp`` is None."""
    out = fp if fp is not None else io.StringIO()
    out.write(f"% patternforge facts: {g.vertex_count} vertices, {g.edge_count} edges\n")
    _emit(out.write, g, grouped=False)
    return out.getvalue() if fp is None else None


# --------------------------------------------------------------- columnar

COLUMNAR_HEADER = "# patternforge columnar v1"


def save_columnar(g: GraphStore, fp: IO[str] | None = None) -> str | None:
    """Tab-separated records: ``@vertices`` rows are ``type id props...``,
    ``@edges`` rows are ``type src dst props...``."""
    out = fp if fp is not None else io.StringIO()
    w = out.write
    w(COLUMNAR_HEADER + "\n@vertices\n")
    for v in g.vertices():
        w("\t".join(map(str, (v.vtype.value, v.id) + v.props)) + "\n")
    w("@edges\n")
    for e in g.edges():
        w("\t".join(map(str, (e.etype.value, e.src, e.dst) + e.props)) + "\n")
    return out.getvalue() if fp is None else None


def load_columnar(src: str | IO[str] | Iterable[str],
                  schema: Schema = DEFAULT_SCHEMA) -> tuple[GraphStore, ValidationReport]:
    g = GraphStore(schema)
    section = None
    vtypes = {vt.value: vt for vt in VertexType}
    etypes = {et.value: et for et in EdgeType}
    for lineno, line in enumerate(_lines(src), 1):
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        if line.startswith("@"):
            section = line[1:].strip()
            if section not in ("vertices", "edges"):
                raise ParseError(f"unknown section {section!r}", lineno, 1)
            continue
        tag, *rest = line.split("\t")
        try:
            nums = [int(x) for x in rest]
        except ValueError:
            raise ParseError("non-integer field", lineno, len(tag) + 2) from None
        if section == "vertices" and tag in vtypes:
            g.add_vertex(VertexRecord(nums[0], vtypes[tag], tuple(nums[1:])))
        elif section == "edges" and tag in etypes:
            if len(nums) < 2:
                raise ArityMismatch("edge row needs src and dst", lineno, 1)
            g.add_edge(EdgeRecord(nums[0], nums[1], etypes[tag], tuple(nums[2:])))
        else:
            raise ParseError(f"unexpected record tag {tag!r} in section {section}", lineno, 1)
    g.freeze()
    return g, g.validate()


def load_graph(path: str, fmt: str = "auto",
               schema: Schema = DEFAULT_SCHEMA) -> tuple[GraphStore, ValidationReport]:
    """Load a graph file; ``auto`` sniffs the columnar header."""
    with open(path, encoding="utf-8") as fp:
        if fmt == "auto":
            first = fp.readline()
            fp.seek(0)
            fmt = "columnar" if first.startswith(COLUMNAR_HEADER) else "facts"
        if fmt == "columnar":
            return load_columnar(fp, schema)
        if fmt == "facts":
            return load_facts(fp, schema)
    raise ValueError(f"unknown graph format {fmt!r}")


# ----------------------------------------------------------------- prolog

_ARITH = {
    ConstraintKind.EQ: "=:=",
    ConstraintKind.NEQ: "=\\=",
    ConstraintKind.LT: "<",
    ConstraintKind.LEQ: "=<",
    ConstraintKind.GREEN_RELATION: "=:=",
}


def _red_key_position(schema: Schema) -> int:
    idpos = schema.vertex_id_pos[VertexType.V2]
    prop_positions = [i for i in range(schema.vertex_arity[VertexType.V2]) if i != idpos]
    return prop_positions[RED_KEY_PROP]


def _red_goal(schema: Schema, a: str, b: str, ka: str, kb: str) -> str:
    arity = schema.vertex_arity[VertexType.V2]
    idpos = schema.vertex_id_pos[VertexType.V2]
    kpos = _red_key_position(schema)

    def fact(vid, key):
        args = ["_"] * arity
        args[idpos] = vid
        args[kpos] = key
        return f"vertex2({', '.join(args)})"

    return f"{a} =\\= {b}, {fact(a, ka)}, {fact(b, kb)}, {ka} =:= {kb}"


def _goal(atom: Atom, schema: Schema, inline: bool, fresh: list[int]) -> str:
    if not isinstance(atom, ConstraintAtom):
        return format_atom(atom)
    a, b = (str(t) for t in atom.args)
    if atom.kind is ConstraintKind.RED_RELATION:
        if not inline:
            return f"red({a}, {b})"
        n = fresh[0]
        fresh[0] += 1
        return _red_goal(schema, a, b, f"RedKeyA{n}", f"RedKeyB{n}")
    if atom.kind is ConstraintKind.GREEN_RELATION and not inline:
        return f"green({a}, {b})"
    return f"{a} {_ARITH[atom.kind]} {b}"


def export_prolog(g: GraphStore, p: Pattern, style: str = "unified",
                  fp: IO[str] | None = None) -> str | None:
    """A standalone Prolog program that prints every root on its own line.

    ``unified`` emits one ``root/1`` rule whose body lists every atom, with
    the red and green checks written inline, each constraint placed where
    the engine evaluates it. ``subpattern`` emits one rule
    per subpattern (head arguments are that subpattern's variables),
    separate ``red/2`` and ``green/2`` rules, and a ``root/1`` rule calling
    the subpattern rules in order. Constraints use the default relation
    semantics. Facts are grouped by predicate.
    """
    if style not in ("unified", "subpattern"):
        raise ValueError(f"unknown export style {style!r}")
    schema = g.schema
    out = fp if fp is not None else io.StringIO()
    w = out.write
    w(f"% patternforge export, {style} style: {g.vertex_count} vertices, {g.edge_count} edges\n")
    decls = [f"{vt.predicate}/{schema.vertex_arity[vt]}" for vt in VertexType]
    decls += [f"{et.predicate}/{schema.edge_arity[et]}" for et in EdgeType]
    w(f":- dynamic {', '.join(decls)}.\n\n")
    _emit(w, g, grouped=True)
    w("\n")
    root = str(p.projection)
    if style == "unified":
        fresh = [0]
        goals = [_goal(a, schema, True, fresh) for a in evaluation_order(p.atoms)]
        w(f"root({root}) :-\n    " + ",\n    ".join(goals) + ".\n")
    else:
        w("red(A, B) :- " + _red_goal(schema, "A", "B", "KA", "KB") + ".\n")
        w("green(A, B) :- A =:= B.\n\n")
        calls = []
        for s in p.subpatterns:
            head = f"{s.name}({', '.join(str(v) for v in s.variables())})"
            body = ",\n    ".join(_goal(a, schema, False, [0]) for a in s.atoms)
            w(f"{head} :-\n    {body}.\n")
            calls.append(head)
        w(f"\nroot({root}) :-\n    " + ",\n    ".join(calls) + ".\n")
    w("\nmain :- ( setof(R, root(R), Rs) -> forall(member(R, Rs), (write(R), nl)) ; true ).\n")
    w(":- initialization((main, halt)).\n")
    return out.getvalue() if fp is None else None


# -------------------------------------------------------------------- csv

CSV_COLUMNS = ("edges", "strategy", "elapsed_s", "atom_matches", "rule_firings", "inferences",
               "lips", "cycles_per_inference", "cycles_per_edge", "seed")
_INT_COLUMNS = {"edges", "atom_matches", "rule_firings", "inferences", "seed"}
_FLOAT_COLUMNS = {"elapsed_s", "lips", "cycles_per_inference", "cycles_per_edge"}


def _cell(name: str, value) -> str:
    if name in _FLOAT_COLUMNS:
        # shortest round-trip repr: parsing it back yields the identical double
        return "nan" if math.isnan(value) else repr(float(value))
    return str(value)


def write_metrics_csv(rows: Sequence[BenchRow], fp: IO[str] | None = None) -> str | None:
    """Comma-separated, ``\\n``-terminated, rows sorted by (edges, strategy).

    Counters are written as exact integers, float columns with Python's
    shortest round-trip representation.
    """
    out = fp if fp is not None else io.StringIO()
    out.write(",".join(CSV_COLUMNS) + "\n")
    for r in sorted(rows, key=lambda r: (r.edges, r.strategy)):
        out.write(",".join(_cell(c, getattr(r, c)) for c in CSV_COLUMNS) + "\n")
    return out.getvalue() if fp is None else None


def read_metrics_csv(src: str | IO[str] | Iterable[str]) -> list[BenchRow]:
    """Inverse of :func:`write_metrics_csv`; ``#`` lines are skipped."""
    rows = []
    header = None
    for line in _lines(src):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split(",")
        if header is None:
            header = fields
            continue
        rec = dict(zip(header, fields))
        rows.append(BenchRow(**{
            c: int(rec[c]) if c in _INT_COLUMNS else float(rec[c]) if c in _FLOAT_COLUMNS else rec[c]
            for c in CSV_COLUMNS
        }))
    return rows
