"""Typed property-graph store with per-type and per-endpoint edge indices."""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import ArityMismatch, DuplicateId, FrozenStore

MASK64 = (1 << 64) - 1


class VertexType(str, enum.Enum):
    V1 = "1"
    V2 = "2"
    V3 = "3"
    V4 = "4"
    V5 = "5"

    @property
    def predicate(self) -> str:
        return f"vertex{self.value}"


class EdgeType(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"

    @property
    def predicate(self) -> str:
        return f"edge{self.value}"


class VertexRecord(NamedTuple):
    id: int
    vtype: VertexType
    props: tuple = ()


class EdgeRecord(NamedTuple):
    src: int
    dst: int
    etype: EdgeType
    props: tuple = ()


def _default_vertex_arity() -> dict:
    return {VertexType.V1: 1, VertexType.V2: 3, VertexType.V3: 1, VertexType.V4: 3, VertexType.V5: 1}


def _default_vertex_id_pos() -> dict:
    return {VertexType.V1: 0, VertexType.V2: 0, VertexType.V3: 0, VertexType.V4: 1, VertexType.V5: 0}


def _default_edge_arity() -> dict:
    return {EdgeType.A: 3, EdgeType.B: 2, EdgeType.C: 2, EdgeType.D: 3, EdgeType.E: 2, EdgeType.F: 2}


@dataclass(frozen=True)
class Schema:
    """Fact shapes for every vertex and edge type.

    Arities count *all* fact arguments. A vertex fact carries its id at
    ``vertex_id_pos[t]`` and properties everywhere else, in order; an edge
    fact is always ``(src, dst, *props)``.

    The defaults give ``vertex1(Id)``, ``vertex2(Id, Starred, Key)``,
    ``vertex3(Id)``, ``vertex4(P0, Id, P2)``, ``vertex5(Id)``,
    ``edgeA(Src, Dst, P)``, ``edgeD(Src, Dst, P)`` and bare two-argument
    facts for B, C, E and F.
    """

    vertex_arity: Mapping[VertexType, int] = field(default_factory=_default_vertex_arity)
    vertex_id_pos: Mapping[VertexType, int] = field(default_factory=_default_vertex_id_pos)
    edge_arity: Mapping[EdgeType, int] = field(default_factory=_default_edge_arity)

    def __post_init__(self):
        for vt in VertexType:
            arity = self.vertex_arity[vt]
            if not 0 <= self.vertex_id_pos[vt] < arity:
                raise ValueError(f"id position for {vt.predicate} outside arity {arity}")
        for et in EdgeType:
            if self.edge_arity[et] < 2:
                raise ValueError(f"{et.predicate} needs at least src and dst")

    def vertex_props(self, vt: VertexType) -> int:
        return self.vertex_arity[vt] - 1

    def edge_props(self, et: EdgeType) -> int:
        return self.edge_arity[et] - 2

    def predicate(self, name: str) -> VertexType | EdgeType | None:
        """Map a fact predicate name such as ``vertex4`` or ``edgeD`` to its type."""
        return _PREDICATES.get(name)

    # fact <-> record conversion

    def vertex_fact_args(self, v: VertexRecord) -> tuple:
        pos = self.vertex_id_pos[v.vtype]
        return v.props[:pos] + (v.id,) + v.props[pos:]

    def vertex_from_args(self, vt: VertexType, args: Sequence[int]) -> VertexRecord:
        pos = self.vertex_id_pos[vt]
        return VertexRecord(args[pos], vt, tuple(args[:pos]) + tuple(args[pos + 1:]))


_PREDICATES: dict[str, VertexType | EdgeType] = {
    **{vt.predicate: vt for vt in VertexType},
    **{et.predicate: et for et in EdgeType},
}

DEFAULT_SCHEMA = Schema()


@dataclass(frozen=True)
class Finding:
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings

    def add(self, kind: str, message: str) -> None:
        self.findings.append(Finding(kind, message))

    def kinds(self) -> list[str]:
        return [f.kind for f in self.findings]

    def __len__(self) -> int:
        return len(self.findings)

    def __iter__(self) -> Iterator[Finding]:
        return iter(self.findings)


class GraphStore:
    """In-memory typed multigraph.

    Vertices are keyed by 64-bit id. Every edge is reachable from three
    indices: by type, by ``(src, type)`` and by ``(dst, type)``; all of them
    preserve insertion order. Endpoint existence is not checked on insert,
    see :meth:`validate`.
    """

    def __init__(self, schema: Schema = DEFAULT_SCHEMA):
        self.schema = schema
        self._vertices: dict[int, VertexRecord] = {}
        self._by_vtype: dict[VertexType, list[VertexRecord]] = {vt: [] for vt in VertexType}
        self._edges: list[EdgeRecord] = []
        self._by_etype: dict[EdgeType, list[EdgeRecord]] = {et: [] for et in EdgeType}
        self._out: dict[EdgeType, dict[int, list[EdgeRecord]]] = {et: {} for et in EdgeType}
        self._in: dict[EdgeType, dict[int, list[EdgeRecord]]] = {et: {} for et in EdgeType}
        self._frozen = False

    # mutation

    def add_vertex(self, v: VertexRecord) -> None:
        if self._frozen:
            raise FrozenStore("store is frozen")
        if v.id in self._vertices:
            raise DuplicateId(f"vertex {v.id} already present")
        want = self.schema.vertex_props(v.vtype)
        if len(v.props) != want:
            raise ArityMismatch(
                f"{v.vtype.predicate} takes {want} properties, got {len(v.props)}")
        self._vertices[v.id] = v
        self._by_vtype[v.vtype].append(v)

    def add_edge(self, e: EdgeRecord) -> None:
        if self._frozen:
            raise FrozenStore("store is frozen")
        want = self.schema.edge_props(e.etype)
        if len(e.props) != want:
            raise ArityMismatch(
                f"{e.etype.predicate} takes {want} properties, got {len(e.props)}")
        self._insert_edge(e)

    def _insert_edge(self, e: EdgeRecord) -> None:
        self._edges.append(e)
        et = e.etype
        self._by_etype[et].append(e)
        out = self._out[et]
        lst = out.get(e.src)
        if lst is None:
            out[e.src] = [e]
        else:
            lst.append(e)
        inc = self._in[et]
        lst = inc.get(e.dst)
        if lst is None:
            inc[e.dst] = [e]
        else:
            lst.append(e)

    def add_vertices(self, vs: Iterable[VertexRecord]) -> None:
        for v in vs:
            self.add_vertex(v)

    def add_edges(self, es: Iterable[EdgeRecord]) -> None:
        for e in es:
            self.add_edge(e)

    def freeze(self) -> "GraphStore":
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    def copy(self) -> "GraphStore":
        """Unfrozen copy sharing the (immutable) records."""
        g = GraphStore(self.schema)
        for v in self._vertices.values():
            g.add_vertex(v)
        for e in self._edges:
            g._insert_edge(e)
        return g

    # access paths

    def vertex(self, vid: int) -> VertexRecord | None:
        return self._vertices.get(vid)

    def __contains__(self, vid: int) -> bool:
        return vid in self._vertices

    def vertices(self) -> Iterator[VertexRecord]:
        return iter(self._vertices.values())

    def edges(self) -> Sequence[EdgeRecord]:
        return self._edges

    def vertices_of_type(self, vt: VertexType) -> Sequence[VertexRecord]:
        return self._by_vtype[vt]

    def edges_of_type(self, et: EdgeType) -> Sequence[EdgeRecord]:
        return self._by_etype[et]

    def out_edges(self, src: int, et: EdgeType) -> Sequence[EdgeRecord]:
        return self._out[et].get(src, ())

    def in_edges(self, dst: int, et: EdgeType) -> Sequence[EdgeRecord]:
        return self._in[et].get(dst, ())

    def out_index(self, et: EdgeType) -> Mapping[int, list[EdgeRecord]]:
        return self._out[et]

    def in_index(self, et: EdgeType) -> Mapping[int, list[EdgeRecord]]:
        return self._in[et]

    @property
    def vertex_count(self) -> int:
        return len(self._vertices)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def __repr__(self) -> str:
        return f"GraphStore(vertices={self.vertex_count}, edges={self.edge_count})"

    # checks

    def validate(self, deep: bool = False) -> ValidationReport:
        """Report dangling endpoints and index/record disagreements.

        ``deep`` additionally checks that each edge is present in its own
        out- and in-index lists, which costs a pass over every adjacency list.
        """
        report = ValidationReport()
        vs = self._vertices
        for e in self._edges:
            if e.src not in vs:
                report.add("DanglingEndpoint", f"{e.etype.predicate} src {e.src} is not a vertex")
            if e.dst not in vs:
                report.add("DanglingEndpoint", f"{e.etype.predicate} dst {e.dst} is not a vertex")
        n = len(self._edges)
        for name, idx in (("out", self._out), ("in", self._in)):
            total = sum(len(lst) for m in idx.values() for lst in m.values())
            if total != n:
                report.add("IndexInconsistency", f"{name}-index holds {total} edges, store has {n}")
        by_type = sum(len(lst) for lst in self._by_etype.values())
        if by_type != n:
            report.add("IndexInconsistency", f"type index holds {by_type} edges, store has {n}")
        by_vtype = sum(len(lst) for lst in self._by_vtype.values())
        if by_vtype != len(vs):
            report.add("IndexInconsistency",
                       f"vertex type index holds {by_vtype} vertices, store has {len(vs)}")
        if deep:
            for e in self._edges:
                if not any(x is e for x in self._out[e.etype].get(e.src, ())):
                    report.add("IndexInconsistency", f"{e} missing from out-index")
                if not any(x is e for x in self._in[e.etype].get(e.dst, ())):
                    report.add("IndexInconsistency", f"{e} missing from in-index")
        return report

    def digest(self) -> int:
        """64-bit content digest, independent of insertion order.

        Each record is hashed on its own (BLAKE2b, 8 bytes) and the hashes
        are summed modulo 2**64, so permuting insertions cannot change the
        result while duplicate edges still count. The sums and record counts
        are then hashed once more. The empty store digests to
        ``EMPTY_DIGEST``.
        """
        vsum = 0
        for v in self._vertices.values():
            vsum += _record_hash(f"v{v.vtype.value}:{v.id}:{v.props}")
        esum = 0
        for e in self._edges:
            esum += _record_hash(f"e{e.etype.value}:{e.src}:{e.dst}:{e.props}")
        return _finalize(len(self._vertices), len(self._edges), vsum & MASK64, esum & MASK64)


def _record_hash(text: str) -> int:
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "little")


def _finalize(nv: int, ne: int, vsum: int, esum: int) -> int:
    payload = f"patternforge-digest-v1:{nv}:{ne}:{vsum}:{esum}".encode()
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


EMPTY_DIGEST = _finalize(0, 0, 0, 0)
