"""Deterministic graphs with exactly one planted agile-lite match.

Every generated graph has three parts:

* the planted instance, one vertex per pattern variable plus the reverse F
  edge for each A edge;
* near-miss distractors, each a copy of the instance with one clause broken
  (see :func:`mutate_facts`). Copies whose broken clause lives in the
  X-side of the pattern reuse the planted sub1/sub2 vertices, so the shared
  type-3 vertex grows a B fan-out; the remaining clauses get one fully
  disjoint copy each;
* random background over its own vertex pool. Background D and A edges
  never carry the star marker, so no background vertex can start a match.

Randomness comes from numpy's PCG64, one child stream per phase spawned
from ``SeedSequence(seed)``. Vertex ids are a bijective 64-bit mix of a
counter, hence unique without bookkeeping.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import ConfigTooSmall, UnknownClause
from .graph import (
    DEFAULT_SCHEMA, EdgeRecord, EdgeType, GraphStore, Schema, VertexRecord, VertexType,
)
from .pattern import (
    STAR, WILDCARD, ConstraintKind, Const, EdgeAtom, Pattern, Var, VertexAtom,
    builtin_agile_lite, is_positive,
)
from .engine import DEFAULT_RELATIONS, RED_KEY_PROP

log = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1

# keys below this bound are reserved for planted and distractor instances
RESERVED_KEYS = 1_000_000
# background A and D properties start here, clear of the star marker
BACKGROUND_PROP_MIN = 2

PLANTED_EDGES = 15
MINIMAL_EDGES = 13

V1, V2, V3, V4, V5 = VertexType
A, B, C, D, E, F = EdgeType

DEFAULT_TYPE_MIX = {V1: 0.30, V2: 0.25, V3: 0.05, V4: 0.30, V5: 0.10}

# background edge kinds; "AF" is an A edge plus its reverse F edge
EDGE_MIX = {"AF": 0.25, B: 0.15, C: 0.25, D: 0.15, E: 0.20}


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def _mix_ids(salt: int, start: int, n: int) -> list[int]:
    """``splitmix64(salt + i)`` for ``i`` in ``[start, start + n)``, vectorized."""
    if n <= 0:
        return []
    with np.errstate(over="ignore"):
        x = np.arange(start, start + n, dtype=np.uint64) + np.uint64(salt)
        x += np.uint64(0x9E3779B97F4A7C15)
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        x = x ^ (x >> np.uint64(31))
    return x.tolist()


# ------------------------------------------------------------------ config

@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    target_edges: int = 10_000
    distractor_ratio: float = 0.1
    type_mix: Mapping[VertexType, float] = field(default_factory=lambda: dict(DEFAULT_TYPE_MIX))
    star_density: float = 0.01
    edges_per_vertex: float = 4.0

    def check(self) -> None:
        if self.target_edges < PLANTED_EDGES:
            raise ConfigTooSmall(
                f"target_edges={self.target_edges} is below the planted instance size {PLANTED_EDGES}")
        for name in ("distractor_ratio", "star_density"):
            x = getattr(self, name)
            if not 0.0 <= x <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {x}")
        if self.edges_per_vertex <= 0:
            raise ValueError("edges_per_vertex must be positive")
        if set(self.type_mix) != set(VertexType) or any(w <= 0 for w in self.type_mix.values()):
            raise ValueError("type_mix needs a positive weight for every vertex type")


def parse_type_mix(text: str) -> dict[VertexType, float]:
    """``"V1:0.3,V2:0.25,..."`` -> weight mapping."""
    mix = {}
    for part in text.split(","):
        name, _, w = part.partition(":")
        mix[VertexType[name.strip().upper()]] = float(w)
    return mix


_CONFIG_KEYS = {
    "seed": int, "target_edges": int, "edges": int, "distractor_ratio": float,
    "star_density": float, "edges_per_vertex": float, "type_mix": parse_type_mix,
}


def load_config(text: str, **overrides) -> GenConfig:
    """Parse a ``key = value`` config file; ``#`` starts a comment.

    ``edges`` is accepted as an alias of ``target_edges``. Keyword
    ``overrides`` that are not ``None`` win over file values.
    """
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in _CONFIG_KEYS:
            raise ValueError(f"config line {lineno}: cannot parse {raw!r}")
        values["target_edges" if key == "edges" else key] = _CONFIG_KEYS[key](value.strip())
    values.update({k: v for k, v in overrides.items() if v is not None})
    return GenConfig(**values)


@dataclass
class GenReport:
    planted_root: int
    planted_witness: dict[str, int]
    vertex_count: int
    edge_count: int
    digest: int
    distractors: int = 0
    config: dict | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "GenReport":
        return cls(**json.loads(text))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())


# ------------------------------------------------------------- the instance

class Facts:
    """Mutable bag of vertex and edge records, used to build and break instances."""

    def __init__(self, vertices=None, edges=None):
        self.vertices: dict[int, VertexRecord] = dict(vertices or {})
        self.edges: list[EdgeRecord] = list(edges or [])

    @classmethod
    def from_store(cls, g: GraphStore) -> "Facts":
        return cls({v.id: v for v in g.vertices()}, g.edges())

    def to_store(self, schema: Schema = DEFAULT_SCHEMA) -> GraphStore:
        g = GraphStore(schema)
        for v in self.vertices.values():
            g.add_vertex(v)
        for e in self.edges:
            g.add_edge(e)
        return g

    def remove_edge(self, src: int, dst: int, et: EdgeType, props=None) -> EdgeRecord:
        for i, e in enumerate(self.edges):
            if e.src == src and e.dst == dst and e.etype is et and (props is None or e.props == props):
                return self.edges.pop(i)
        raise LookupError(f"no {et.predicate} edge {src}->{dst}")

    def merge_vertex(self, gone: int, into: int) -> None:
        """Redirect every edge touching ``gone`` to ``into`` and drop ``gone``."""
        del self.vertices[gone]
        self.edges = [
            e._replace(src=into if e.src == gone else e.src, dst=into if e.dst == gone else e.dst)
            if gone in (e.src, e.dst) else e
            for e in self.edges
        ]


def instance_facts(ids: Mapping[str, int], key: int, pair_af: bool = True) -> Facts:
    """One satisfying instance of agile-lite, one vertex per variable.

    ``ids`` maps variable names (W1, W2, T21, T22, V3, X, S5, Y1, Z2, U1, U2,
    U3) to vertex ids; ``key`` is the shared red key of T21/T22. W1 carries
    the green value in its leading property and W2 deliberately does not,
    so only one W ordering passes the green check. With ``pair_af`` each A
    edge gets its reverse F edge.
    """
    w = ids
    fx = Facts()
    for v in (
        VertexRecord(w["W1"], V4, (STAR, 0)),
        VertexRecord(w["W2"], V4, (0, 0)),
        VertexRecord(w["T21"], V2, (1, key)),
        VertexRecord(w["T22"], V2, (1, key)),
        VertexRecord(w["V3"], V3, ()),
        VertexRecord(w["X"], V1, ()),
        VertexRecord(w["S5"], V5, ()),
        VertexRecord(w["Y1"], V1, ()),
        VertexRecord(w["Z2"], V2, (0, key)),
        VertexRecord(w["U1"], V4, (0, 0)),
        VertexRecord(w["U2"], V4, (0, 0)),
        VertexRecord(w["U3"], V4, (0, 0)),
    ):
        fx.vertices[v.id] = v
    edges = [
        EdgeRecord(w["W1"], w["T21"], D, (STAR,)),
        EdgeRecord(w["W1"], w["T22"], D, (STAR,)),
        EdgeRecord(w["W2"], w["T21"], D, (STAR,)),
        EdgeRecord(w["W2"], w["T22"], D, (STAR,)),
        EdgeRecord(w["V3"], w["W1"], B),
        EdgeRecord(w["V3"], w["W2"], B),
        EdgeRecord(w["X"], w["S5"], E),
        EdgeRecord(w["X"], w["Y1"], A, (STAR,)),
        EdgeRecord(w["Z2"], w["X"], F),
        EdgeRecord(w["X"], w["U1"], C),
        EdgeRecord(w["X"], w["U2"], C),
        EdgeRecord(w["X"], w["U3"], C),
        EdgeRecord(w["V3"], w["U1"], B),
    ]
    if pair_af:
        edges.insert(8, EdgeRecord(w["Y1"], w["X"], F))
        edges.insert(10, EdgeRecord(w["X"], w["Z2"], A, (0,)))
    fx.edges = edges
    return fx


VERTEX_VARS = ("W1", "W2", "T21", "T22", "V3", "X", "S5", "Y1", "Z2", "U1", "U2", "U3")


def instance_witness(ids: Mapping[str, int]) -> dict[str, int]:
    w = {n: ids[n] for n in VERTEX_VARS}
    w["Pa"] = STAR
    w["K4"] = STAR
    return w


# --------------------------------------------------------------- mutations

def _neutral_type(vt: VertexType) -> VertexType:
    return V3 if vt is V5 else V5


def _source_of(pattern: Pattern, var: Var):
    """First positive atom that mentions ``var`` and the argument position."""
    for a in pattern.atoms:
        if is_positive(a):
            for pos, t in enumerate(a.terms):
                if t == var:
                    return a, pos
    raise LookupError(var)


def _value(t, witness):
    return t.value if isinstance(t, Const) else witness[t.name]


def _find_edge(fx: Facts, atom: EdgeAtom, witness) -> EdgeRecord:
    src, dst = _value(atom.src, witness), _value(atom.dst, witness)
    for e in fx.edges:
        if e.src == src and e.dst == dst and e.etype is atom.etype and all(
                t is WILDCARD or _value(t, witness) == x for t, x in zip(atom.props, e.props)):
            return e
    raise LookupError(f"no fact supports {atom}")


def mutate_facts(fx: Facts, witness: Mapping[str, int], atom, schema: Schema = DEFAULT_SCHEMA,
                 pattern: Pattern | None = None, relations=None) -> None:
    """Break the fact(s) supporting ``atom`` under ``witness``, in place.

    * vertex atom: retype the vertex to a type the atom does not accept;
    * edge atom: delete the edge (plus its paired reverse for A/F);
    * ``neq(P, Q)``: merge vertex Q into P;
    * ``red(S, T)``: give T a different key;
    * other constraints: rewrite the property bound to the constraint's last
      variable until the relation fails.
    """
    pattern = pattern or builtin_agile_lite()
    relations = relations or DEFAULT_RELATIONS
    if isinstance(atom, VertexAtom):
        vid = _value(atom.id_term(schema), witness)
        old = fx.vertices[vid]
        nt = _neutral_type(old.vtype)
        fx.vertices[vid] = VertexRecord(vid, nt, (0,) * schema.vertex_props(nt))
    elif isinstance(atom, EdgeAtom):
        e = _find_edge(fx, atom, witness)
        fx.edges.remove(e)
        twin = {A: F, F: A}.get(e.etype)
        if twin is not None:
            try:
                fx.remove_edge(e.dst, e.src, twin)
            except LookupError:
                pass
    elif atom.kind is ConstraintKind.NEQ:
        p, q = (_value(t, witness) for t in atom.args)
        fx.merge_vertex(q, p)
    elif atom.kind is ConstraintKind.RED_RELATION:
        s, t = (_value(x, witness) for x in atom.args)
        old = fx.vertices[t]
        props = list(old.props)
        props[RED_KEY_PROP] = fx.vertices[s].props[RED_KEY_PROP] + 1
        fx.vertices[t] = old._replace(props=tuple(props))
    else:
        var = [t for t in atom.args if isinstance(t, Var)][-1]
        others = [_value(t, witness) for t in atom.args]
        idx = atom.args.index(var)
        fn = relations[atom.kind]
        new = None
        for cand in (others[1 - idx] + 1, others[1 - idx] - 1, others[1 - idx], witness[var.name] + 1):
            trial = list(others)
            trial[idx] = cand
            if not fn(None, trial[0], trial[1]):
                new = cand
                break
        if new is None:
            raise ValueError(f"cannot violate {atom}")
        src_atom, pos = _source_of(pattern, var)
        if isinstance(src_atom, VertexAtom):
            vid = _value(src_atom.id_term(schema), witness)
            old = fx.vertices[vid]
            args = list(schema.vertex_fact_args(old))
            args[pos] = new
            fx.vertices[vid] = schema.vertex_from_args(old.vtype, args)
        else:
            e = _find_edge(fx, src_atom, witness)
            i = fx.edges.index(e)
            props = list(e.props)
            props[pos - 2] = new
            fx.edges[i] = e._replace(props=tuple(props))


def mutate_to_distractor(g: GraphStore, report: GenReport, clause_index: int,
                         pattern: Pattern | None = None) -> GraphStore:
    """Copy of ``g`` with the planted fact behind atom ``clause_index`` broken."""
    pattern = pattern or builtin_agile_lite()
    atoms = pattern.atoms
    if not 0 <= clause_index < len(atoms):
        raise UnknownClause(f"clause index {clause_index} outside 0..{len(atoms) - 1}")
    fx = Facts.from_store(g)
    mutate_facts(fx, report.planted_witness, atoms[clause_index], g.schema, pattern)
    return fx.to_store(g.schema).freeze()


# ------------------------------------------------------------------ builders

def _report(g: GraphStore, ids: Mapping[str, int], distractors: int = 0, config=None) -> GenReport:
    return GenReport(
        planted_root=ids["X"],
        planted_witness=instance_witness(ids),
        vertex_count=g.vertex_count,
        edge_count=g.edge_count,
        digest=g.digest(),
        distractors=distractors,
        config=config,
    )


def plant_minimal() -> tuple[GraphStore, GenReport]:
    """The smallest agile-lite match: 12 vertices, 13 edges, no spare facts."""
    ids = dict(zip(VERTEX_VARS, (splitmix64(i) for i in range(1, 13))))
    g = instance_facts(ids, key=1, pair_af=False).to_store().freeze()
    return g, _report(g, ids)


SHARED_VARS = frozenset({"W1", "W2", "T21", "T22", "V3"})


def _shared_fact(fx_vertex_ids: set[int], rec) -> bool:
    if isinstance(rec, VertexRecord):
        return rec.id in fx_vertex_ids
    return rec.src in fx_vertex_ids and rec.dst in fx_vertex_ids


def x_side_clauses(pattern: Pattern | None = None) -> list[bool]:
    """For each atom: can its distractor reuse the planted sub1/sub2 vertices?

    True when breaking the atom leaves every fact among the shared vertices
    untouched, which is decided by mutating a template instance.
    """
    pattern = pattern or builtin_agile_lite()
    ids = {n: i + 1 for i, n in enumerate(VERTEX_VARS)}
    shared_ids = {ids[n] for n in SHARED_VARS}
    base = instance_facts(ids, key=1)
    before_v = {k: v for k, v in base.vertices.items() if k in shared_ids}
    before_e = sorted(e for e in base.edges if _shared_fact(shared_ids, e))
    out = []
    for atom in pattern.atoms:
        fx = instance_facts(ids, key=1)
        mutate_facts(fx, instance_witness(ids), atom, pattern=pattern)
        after_v = {k: v for k, v in fx.vertices.items() if k in shared_ids}
        after_e = sorted(e for e in fx.edges if _shared_fact(shared_ids, e))
        out.append(after_v == before_v and after_e == before_e)
    return out


def _split(total: int, weights: Mapping, minimum: int = 0) -> dict:
    """Largest-remainder split of ``total`` by ``weights``."""
    keys = list(weights)
    base = {k: minimum for k in keys}
    rest = total - minimum * len(keys)
    if rest < 0:
        return {k: (1 if i < total else 0) for i, k in enumerate(keys)}
    wsum = sum(weights.values())
    exact = {k: rest * weights[k] / wsum for k in keys}
    for k in keys:
        base[k] += int(exact[k])
    left = total - sum(base.values())
    for k in sorted(keys, key=lambda k: (-(exact[k] - int(exact[k])), keys.index(k)))[:left]:
        base[k] += 1
    return base


def _background(cfg: GenConfig, n_edges: int, salt: int, rng_v, rng_e,
                schema: Schema) -> tuple[list[VertexRecord], list[EdgeRecord], int]:
    if n_edges <= 0:
        return [], [], 0
    n_vertices = max(len(VertexType), round(n_edges / cfg.edges_per_vertex))
    counts = _split(n_vertices, cfg.type_mix, minimum=1)
    ids = _mix_ids(salt, 0, n_vertices)
    pools: dict[VertexType, list[int]] = {}
    vertices: list[VertexRecord] = []
    start = 0
    for vt in VertexType:
        n = counts[vt]
        pool = ids[start:start + n]
        start += n
        pools[vt] = pool
        if vt is V2:
            starred = (rng_v.random(n) < cfg.star_density).astype(np.int64).tolist()
            keys = rng_v.integers(RESERVED_KEYS, 1 << 40, n).tolist()
            vertices.extend(VertexRecord(i, vt, (s, k)) for i, s, k in zip(pool, starred, keys))
        elif vt is V4:
            p0 = rng_v.integers(BACKGROUND_PROP_MIN, 1 << 31, n).tolist()
            p2 = rng_v.integers(0, 1 << 31, n).tolist()
            vertices.extend(VertexRecord(i, vt, (a, b)) for i, a, b in zip(pool, p0, p2))
        else:
            nprops = schema.vertex_props(vt)
            vertices.extend(VertexRecord(i, vt, (0,) * nprops) for i in pool)

    n_pairs = int(n_edges * EDGE_MIX["AF"] / 2)
    singles = _split(n_edges - 2 * n_pairs, {k: w for k, w in EDGE_MIX.items() if k != "AF"})
    a_dst_pool = pools[V1] + pools[V2]

    def pick(pool, n):
        return [pool[i] for i in rng_e.integers(0, len(pool), n).tolist()]

    edges: list[EdgeRecord] = []
    srcs = pick(pools[V1], n_pairs)
    dsts = pick(a_dst_pool, n_pairs)
    props = rng_e.integers(BACKGROUND_PROP_MIN, 1 << 31, n_pairs).tolist()
    for s, d, p in zip(srcs, dsts, props):
        edges.append(EdgeRecord(s, d, A, (p,)))
        edges.append(EdgeRecord(d, s, F))
    ends = {B: (V3, V4), C: (V1, V4), D: (V4, V2), E: (V1, V5)}
    for et, (st, dt) in ends.items():
        n = singles[et]
        srcs = pick(pools[st], n)
        dsts = pick(pools[dt], n)
        if et is D:
            props = rng_e.integers(BACKGROUND_PROP_MIN, 1 << 31, n).tolist()
            edges.extend(EdgeRecord(s, d, et, (p,)) for s, d, p in zip(srcs, dsts, props))
        else:
            edges.extend(EdgeRecord(s, d, et) for s, d in zip(srcs, dsts))
    return vertices, edges, n_vertices


def generate(cfg: GenConfig, schema: Schema = DEFAULT_SCHEMA) -> tuple[GraphStore, GenReport]:
    cfg.check()
    if schema != DEFAULT_SCHEMA:
        raise ValueError("the generator only emits the default fact schema")
    pattern = builtin_agile_lite()
    atoms = pattern.atoms
    ss = np.random.SeedSequence(cfg.seed)
    ss_v, ss_e, ss_d = ss.spawn(3)
    rng_v = np.random.Generator(np.random.PCG64(ss_v))
    rng_e = np.random.Generator(np.random.PCG64(ss_e))
    rng_d = np.random.Generator(np.random.PCG64(ss_d))
    salt = int(ss.generate_state(1, dtype=np.uint64)[0])

    # id counter layout: background from 0, then instances
    bg_guess = max(len(VertexType), round(cfg.target_edges / cfg.edges_per_vertex)) + 1
    next_id = [bg_guess]

    def fresh(names) -> dict[str, int]:
        out = dict(zip(names, _mix_ids(salt, next_id[0], len(names))))
        next_id[0] += len(names)
        return out

    planted_ids = fresh(VERTEX_VARS)
    planted = instance_facts(planted_ids, key=1)

    x_side = x_side_clauses(pattern)
    budget = min(round(cfg.distractor_ratio * cfg.target_edges), cfg.target_edges - PLANTED_EDGES)
    d_vertices: list[VertexRecord] = []
    d_edges: list[EdgeRecord] = []
    n_distractors = 0
    cycle = 0
    spent = 0
    done = budget <= 0
    while not done:
        progressed = False
        for ci, atom in enumerate(atoms):
            if not x_side[ci] and cycle > 0:
                continue
            if x_side[ci]:
                ids = {**{n: planted_ids[n] for n in SHARED_VARS},
                       **fresh([n for n in VERTEX_VARS if n not in SHARED_VARS])}
            else:
                ids = fresh(VERTEX_VARS)
            key = 2 + n_distractors
            fx = instance_facts(ids, key=key)
            # spread the filler properties of the copy so copies differ beyond ids
            z = rng_d.integers(RESERVED_KEYS, 1 << 40)
            fx.vertices[ids["Z2"]] = fx.vertices[ids["Z2"]]._replace(props=(0, int(z)))
            mutate_facts(fx, instance_witness(ids), atom, schema, pattern)
            if x_side[ci]:
                shared = {planted_ids[n] for n in SHARED_VARS}
                vs = [v for v in fx.vertices.values() if v.id not in shared]
                es = [e for e in fx.edges if not _shared_fact(shared, e)]
            else:
                vs, es = list(fx.vertices.values()), fx.edges
            if spent + len(es) > budget:
                done = True
                break
            d_vertices.extend(vs)
            d_edges.extend(es)
            spent += len(es)
            n_distractors += 1
            progressed = True
        cycle += 1
        if not progressed:
            done = True

    n_bg_edges = cfg.target_edges - PLANTED_EDGES - spent
    bg_vertices, bg_edges, n_bg_vertices = _background(cfg, n_bg_edges, salt, rng_v, rng_e, schema)
    assert n_bg_vertices < bg_guess

    g = GraphStore(schema)
    for v in bg_vertices:
        g.add_vertex(v)
    for v in d_vertices:
        g.add_vertex(v)
    for v in planted.vertices.values():
        g.add_vertex(v)
    ins = g._insert_edge
    for e in bg_edges:
        ins(e)
    for e in d_edges:
        g.add_edge(e)
    for e in planted.edges:
        g.add_edge(e)
    g.freeze()
    log.info("generated %d vertices, %d edges (%d distractors) for seed %d",
             g.vertex_count, g.edge_count, n_distractors, cfg.seed)
    cfg_dict = asdict(cfg)
    cfg_dict["type_mix"] = {vt.name: w for vt, w in cfg.type_mix.items()}
    return g, _report(g, planted_ids, n_distractors, cfg_dict)


# --------------------------------------------------------- random fixtures

def random_graph(seed: int, n_vertices: int = 60, n_edges: int = 200, plant: int = 0,
                 prop_values: int = 3) -> tuple[GraphStore, list[GenReport]]:
    """Small unstructured graph for property tests.

    Types, endpoints and properties are uniform over tiny ranges (properties
    in ``[0, prop_values)``), so partial matches are common. ``plant``
    complete instances are embedded first and the random edges may land on
    their vertices, which can create extra roots or extra witnesses.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    schema = DEFAULT_SCHEMA
    fx = Facts()
    reports_ids = []
    for k in range(plant):
        ids = {n: 1_000_000 * (k + 1) + i for i, n in enumerate(VERTEX_VARS)}
        inst = instance_facts(ids, key=1 + int(rng.integers(0, prop_values)), pair_af=bool(rng.integers(0, 2)))
        fx.vertices.update(inst.vertices)
        fx.edges.extend(inst.edges)
        reports_ids.append(ids)
    types = list(VertexType)
    for i in range(n_vertices):
        vt = types[int(rng.integers(0, 5))]
        props = tuple(int(x) for x in rng.integers(0, prop_values, schema.vertex_props(vt)))
        fx.vertices[i + 1] = VertexRecord(i + 1, vt, props)
    all_ids = list(fx.vertices)
    etypes = list(EdgeType)
    for _ in range(n_edges):
        et = etypes[int(rng.integers(0, 6))]
        s = all_ids[int(rng.integers(0, len(all_ids)))]
        d = all_ids[int(rng.integers(0, len(all_ids)))]
        props = tuple(int(x) for x in rng.integers(0, prop_values, schema.edge_props(et)))
        fx.edges.append(EdgeRecord(s, d, et, props))
    g = fx.to_store().freeze()
    return g, [_report(g, ids) for ids in reports_ids]
