"""Pattern evaluation strategies and inference accounting.

Three strategies share one contract: given a frozen :class:`GraphStore` and a
valid :class:`Pattern`, return the ascending, de-duplicated set of values the
projection variable takes over all solutions.

``unified``
    One rule. Atoms run left to right, depth-first, with chronological
    backtracking; bindings flow forward across subpattern boundaries.
``subpattern``
    One rule per subpattern plus an overarching join. Subpattern *k* is
    materialized on its own by re-deriving every subpattern before it, then
    the per-subpattern relations are hash-joined in order.
``bruteforce``
    Test oracle. Each positive atom becomes a relation by scanning every
    record in the store (no adjacency indices), and the relations are joined
    set-at-a-time with early projection.

Counters: ``atom_matches`` counts successful goal resolutions (an atom
unified with a fact, or a constraint that held); ``rule_firings`` counts
completed rule bodies; ``backtracks`` counts goal calls that produced no
solution at all.
"""

from __future__ import annotations

import logging
import operator
import time
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .errors import InvalidPattern, SizeGuard
from .graph import GraphStore, Schema, VertexType
from .pattern import (
    WILDCARD, Atom, ConstraintAtom, ConstraintKind, Const, EdgeAtom, Pattern, Var,
    VertexAtom, atom_vars, is_positive, validate_pattern,
)

log = logging.getLogger(__name__)

Relation = Callable[[GraphStore, int, int], bool]

# position of the key inside vertex2's property tuple (Id, Starred, Key)
RED_KEY_PROP = 1


def red_keys_equal(store: GraphStore, a: int, b: int) -> bool:
    """Default red relation: two different type-2 vertices sharing a key."""
    if a == b:
        return False
    va = store.vertex(a)
    vb = store.vertex(b)
    if va is None or vb is None or va.vtype is not VertexType.V2 or vb.vtype is not VertexType.V2:
        return False
    return va.props[RED_KEY_PROP] == vb.props[RED_KEY_PROP]


def _lift(op) -> Relation:
    return lambda store, a, b: op(a, b)


DEFAULT_RELATIONS: dict[ConstraintKind, Relation] = {
    ConstraintKind.EQ: _lift(operator.eq),
    ConstraintKind.NEQ: _lift(operator.ne),
    ConstraintKind.LT: _lift(operator.lt),
    ConstraintKind.LEQ: _lift(operator.le),
    ConstraintKind.RED_RELATION: red_keys_equal,
    ConstraintKind.GREEN_RELATION: _lift(operator.eq),
}


@dataclass
class MatchStats:
    atom_matches: int = 0
    rule_firings: int = 0
    backtracks: int = 0
    elapsed_seconds: float = 0.0

    @property
    def inferences(self) -> int:
        return self.atom_matches + self.rule_firings

    def counters(self) -> tuple[int, int, int]:
        return self.atom_matches, self.rule_firings, self.backtracks


@dataclass
class MatchResult:
    roots: list[int]
    stats: MatchStats
    strategy: str
    witnesses: dict[int, dict[str, int]] = field(default_factory=dict)


def _relations(overrides: Mapping[ConstraintKind, Relation] | None) -> dict:
    rel = dict(DEFAULT_RELATIONS)
    if overrides:
        rel.update(overrides)
    return rel


def _require_valid(p: Pattern, schema: Schema) -> None:
    report = validate_pattern(p, schema)
    if not report.ok:
        raise InvalidPattern(report)


def evaluation_order(atoms) -> list[Atom]:
    """Atoms in the order they are evaluated.

    Positive atoms keep their written order. A constraint runs where it is
    written unless one of its variables is still unbound there, in which case
    it runs right after the atom that binds the last of them.
    """
    out: list[Atom] = []
    pending: list[Atom] = []
    bound: set[Var] = set()
    for a in atoms:
        if is_positive(a):
            out.append(a)
            bound.update(atom_vars(a))
            still = []
            for c in pending:
                (out if all(v in bound for v in atom_vars(c)) else still).append(c)
            pending = still
        elif all(v in bound for v in atom_vars(a)):
            out.append(a)
        else:
            pending.append(a)
    if pending:
        raise ValueError(f"constraints with unbound variables: {pending}")
    return out


# ------------------------------------------------------------ compilation

_OUT, _IN, _BOTH, _SCAN = range(4)


class _Program:
    """Closure chain for one conjunctive body over one store.

    Boundness of every variable at every step is known statically, so each
    step knows which arguments it checks and which it binds; bindings never
    need undoing because a slot is only read by steps after its binder.
    """

    def __init__(self, store: GraphStore, atoms, relations: dict, on_solution):
        self.store = store
        self.counts = [0, 0]  # atom matches, backtracks
        self.slots: dict[Var, int] = {}
        self.consts: dict[int, int] = {}
        order = evaluation_order(atoms)
        for a in order:
            for t in a.terms:
                if isinstance(t, Var) and t not in self.slots:
                    self.slots[t] = len(self.slots)
        for a in order:
            for t in a.terms:
                if isinstance(t, Const) and t.value not in self.consts:
                    self.consts[t.value] = len(self.slots) + len(self.consts)
        self.size = len(self.slots) + len(self.consts)

        bound_before = []
        bound: set[Var] = set()
        for a in order:
            bound_before.append(set(bound))
            bound.update(atom_vars(a))

        nxt = on_solution
        for a, pre in zip(reversed(order), reversed(bound_before)):
            nxt = self._compile(a, pre, nxt, relations)
        self.entry = nxt

    def fresh_binding(self) -> list:
        b = [None] * self.size
        for value, slot in self.consts.items():
            b[slot] = value
        return b

    def run(self) -> None:
        self.entry(self.fresh_binding())

    def _slot(self, t) -> int:
        return self.slots[t] if isinstance(t, Var) else self.consts[t.value]

    def _ops(self, terms_with_fields, bound: set[Var], skip: set[int]):
        """Split atom arguments into checks and binds.

        Returns ``(checks, binds, dups)``: ``checks`` compare a record field to
        an already-filled slot; ``binds`` fill a slot from a field; ``dups``
        compare a field with a slot bound earlier inside the same atom.
        """
        checks, binds, dups = [], [], []
        local: set[Var] = set()
        for f, t in terms_with_fields:
            if t is WILDCARD or f in skip:
                if isinstance(t, Var) and t not in bound:
                    local.add(t)
                continue
            if isinstance(t, Const) or t in bound:
                checks.append((f, self._slot(t)))
            elif t in local:
                dups.append((f, self.slots[t]))
            else:
                binds.append((f, self.slots[t]))
                local.add(t)
        return tuple(checks), tuple(binds), tuple(dups)

    def _compile(self, atom: Atom, bound: set[Var], nxt, relations):
        if isinstance(atom, EdgeAtom):
            return self._compile_edge(atom, bound, nxt)
        if isinstance(atom, VertexAtom):
            return self._compile_vertex(atom, bound, nxt)
        return self._compile_constraint(atom, nxt, relations)

    def _compile_edge(self, atom: EdgeAtom, bound: set[Var], nxt):
        store, counts = self.store, self.counts
        known = lambda t: isinstance(t, Const) or (isinstance(t, Var) and t in bound)  # noqa: E731
        src_known, dst_known = known(atom.src), known(atom.dst)
        if src_known and dst_known:
            mode, skip = _BOTH, set()
        elif src_known:
            mode, skip = _OUT, {0}
        elif dst_known:
            mode, skip = _IN, {1}
        else:
            mode, skip = _SCAN, set()
        fields = [(0, atom.src), (1, atom.dst)] + [(2 + i, t) for i, t in enumerate(atom.props)]
        checks, binds, dups = self._ops(fields, bound, skip)
        out_map = store.out_index(atom.etype)
        in_map = store.in_index(atom.etype)
        scan = store.edges_of_type(atom.etype)
        s_slot = self._slot(atom.src) if src_known else None
        d_slot = self._slot(atom.dst) if dst_known else None
        empty = ()
        # every candidate matches when nothing needs comparing
        fast = not checks and not dups

        def step(b):
            if mode == _OUT:
                cands = out_map.get(b[s_slot], empty)
            elif mode == _IN:
                cands = in_map.get(b[d_slot], empty)
            elif mode == _BOTH:
                o = out_map.get(b[s_slot], empty)
                i = in_map.get(b[d_slot], empty)
                cands = o if len(o) <= len(i) else i
            else:
                cands = scan
            if fast:
                if not cands:
                    counts[1] += 1
                    return
                counts[0] += len(cands)
                for e in cands:
                    for f, s in binds:
                        b[s] = e[f] if f < 2 else e[3][f - 2]
                    nxt(b)
                return
            hit = False
            for e in cands:
                for f, s in checks:
                    if (e[f] if f < 2 else e[3][f - 2]) != b[s]:
                        break
                else:
                    for f, s in binds:
                        b[s] = e[f] if f < 2 else e[3][f - 2]
                    for f, s in dups:
                        if (e[f] if f < 2 else e[3][f - 2]) != b[s]:
                            break
                    else:
                        counts[0] += 1
                        hit = True
                        nxt(b)
            if not hit:
                counts[1] += 1

        return step

    def _compile_vertex(self, atom: VertexAtom, bound: set[Var], nxt):
        store, counts = self.store, self.counts
        schema = store.schema
        vt = atom.vtype
        id_term = atom.id_term(schema)
        id_known = isinstance(id_term, Const) or id_term in bound
        # field 0 is the id, field 2+i is property i
        fields = [(0, id_term)] + [(2 + i, t) for i, t in enumerate(atom.prop_terms(schema))]
        checks, binds, dups = self._ops(fields, bound, {0} if id_known else set())
        vmap = store._vertices
        scan = store.vertices_of_type(vt)
        id_slot = self._slot(id_term) if id_known else None
        fast = not checks and not dups
        single = binds[0][1] if fast and len(binds) == 1 and binds[0][0] == 0 else None

        def step(b):
            if id_known:
                v = vmap.get(b[id_slot])
                cands = (v,) if v is not None and v[1] is vt else ()
            else:
                cands = scan
            if fast:
                if not cands:
                    counts[1] += 1
                    return
                counts[0] += len(cands)
                if single is not None:
                    for v in cands:
                        b[single] = v[0]
                        nxt(b)
                else:
                    for v in cands:
                        for f, s in binds:
                            b[s] = v[0] if f == 0 else v[2][f - 2]
                        nxt(b)
                return
            hit = False
            for v in cands:
                for f, s in checks:
                    if (v[0] if f == 0 else v[2][f - 2]) != b[s]:
                        break
                else:
                    for f, s in binds:
                        b[s] = v[0] if f == 0 else v[2][f - 2]
                    for f, s in dups:
                        if (v[0] if f == 0 else v[2][f - 2]) != b[s]:
                            break
                    else:
                        counts[0] += 1
                        hit = True
                        nxt(b)
            if not hit:
                counts[1] += 1

        return step

    def _compile_constraint(self, atom: ConstraintAtom, nxt, relations):
        store, counts = self.store, self.counts
        fn = relations[atom.kind]
        a, c = self._slot(atom.args[0]), self._slot(atom.args[1])

        def step(b):
            if fn(store, b[a], b[c]):
                counts[0] += 1
                nxt(b)
            else:
                counts[1] += 1

        return step


# -------------------------------------------------------------- strategies

def match_unified(store: GraphStore, pattern: Pattern,
                  relations: Mapping[ConstraintKind, Relation] | None = None) -> MatchResult:
    _require_valid(pattern, store.schema)
    witnesses: dict[int, dict[str, int]] = {}
    firings = [0]
    prog: _Program

    def on_solution(b):
        firings[0] += 1
        root = b[root_slot]
        if root not in witnesses:
            witnesses[root] = {v.name: b[s] for v, s in prog.slots.items()}

    prog = _Program(store, pattern.atoms, _relations(relations), on_solution)
    root_slot = prog.slots[pattern.projection]
    t0 = time.perf_counter()
    prog.run()
    elapsed = time.perf_counter() - t0
    stats = MatchStats(prog.counts[0], firings[0], prog.counts[1], elapsed)
    log.debug("unified: %d roots, %s", len(witnesses), stats)
    roots = sorted(witnesses)
    return MatchResult(roots, stats, "unified", {r: witnesses[r] for r in roots})


def materialize_subpatterns(store: GraphStore, pattern: Pattern, relations: dict,
                            stats: MatchStats) -> list[tuple[list[Var], dict]]:
    """One relation per subpattern over that subpattern's variables.

    Subpattern *k* is evaluated as a standalone rule whose body is the
    atoms of subpatterns ``1..k``: nothing computed for earlier relations is
    reused, which is what makes this strategy re-derive shared prefixes.
    """
    out = []
    prefix: list[Atom] = []
    for sub in pattern.subpatterns:
        prefix.extend(sub.atoms)
        cols = sub.variables()
        rows: dict[tuple, None] = {}
        fired = [0]

        def on_solution(b, rows=rows, fired=fired):
            fired[0] += 1
            rows[tuple(b[s] for s in col_slots)] = None

        prog = _Program(store, prefix, relations, on_solution)
        col_slots = [prog.slots[v] for v in cols]
        prog.run()
        stats.atom_matches += prog.counts[0]
        stats.backtracks += prog.counts[1]
        stats.rule_firings += fired[0]
        out.append((cols, rows))
    return out


def _hash_join(lcols: list[Var], lrows, rcols: list[Var], rrows):
    shared = [v for v in rcols if v in lcols]
    li = [lcols.index(v) for v in shared]
    ri = [rcols.index(v) for v in shared]
    extra = [i for i, v in enumerate(rcols) if v not in lcols]
    table: dict[tuple, list[tuple]] = {}
    for r in rrows:
        table.setdefault(tuple(r[i] for i in ri), []).append(tuple(r[i] for i in extra))
    cols = lcols + [rcols[i] for i in extra]
    rows = []
    for l in lrows:
        for tail in table.get(tuple(l[i] for i in li), ()):
            rows.append(l + tail)
    return cols, rows


def match_subpattern(store: GraphStore, pattern: Pattern,
                     relations: Mapping[ConstraintKind, Relation] | None = None) -> MatchResult:
    _require_valid(pattern, store.schema)
    stats = MatchStats()
    t0 = time.perf_counter()
    rels = materialize_subpatterns(store, pattern, _relations(relations), stats)
    cols, rows = list(rels[0][0]), list(rels[0][1])
    for rcols, rrows in rels[1:]:
        cols, rows = _hash_join(cols, rows, rcols, rrows)
    stats.rule_firings += len(rows)  # the overarching rule
    stats.elapsed_seconds = time.perf_counter() - t0
    ri = cols.index(pattern.projection)
    witnesses: dict[int, dict[str, int]] = {}
    for row in rows:
        root = row[ri]
        if root not in witnesses:
            witnesses[root] = {v.name: x for v, x in zip(cols, row)}
    roots = sorted(witnesses)
    return MatchResult(roots, stats, "subpattern", {r: witnesses[r] for r in roots})


DEFAULT_MAX_PRODUCT = 20_000_000


def _atom_relation(atom: Atom, store: GraphStore, cols: list[Var]) -> dict[tuple, None]:
    """All variable tuples under which ``atom`` matches a fact, by full scan."""
    schema = store.schema
    if isinstance(atom, VertexAtom):
        facts = (schema.vertex_fact_args(v) for v in store.vertices() if v.vtype == atom.vtype)
    else:
        facts = ((e.src, e.dst) + e.props for e in store.edges() if e.etype == atom.etype)
    terms = atom.terms
    rel: dict[tuple, None] = {}
    for args in facts:
        b: dict[Var, int] = {}
        for t, x in zip(terms, args):
            if t is WILDCARD:
                continue
            if isinstance(t, Const):
                if t.value != x:
                    break
            elif t in b:
                if b[t] != x:
                    break
            else:
                b[t] = x
        else:
            rel[tuple(b[v] for v in cols)] = None
    return rel


def match_bruteforce(store: GraphStore, pattern: Pattern,
                     relations: Mapping[ConstraintKind, Relation] | None = None,
                     max_product: int = DEFAULT_MAX_PRODUCT) -> MatchResult:
    """Reference evaluation by whole-relation joins; raises :class:`SizeGuard`
    before any cross product larger than ``max_product`` rows."""
    _require_valid(pattern, store.schema)
    rel_fns = _relations(relations)
    stats = MatchStats()
    t0 = time.perf_counter()
    atoms = pattern.atoms
    positive = [a for a in atoms if is_positive(a)]
    pending = [a for a in atoms if not is_positive(a)]
    cols: list[Var] = []
    rows: list[tuple] = [()]
    for i, atom in enumerate(positive):
        acols = atom_vars(atom)
        arel = _atom_relation(atom, store, acols)
        stats.atom_matches += len(arel)
        shared = [v for v in acols if v in cols]
        if not shared and len(rows) * len(arel) > max_product:
            raise SizeGuard(
                f"cross product of {len(rows)} x {len(arel)} rows at {atom.name} exceeds {max_product}")
        before = len(rows)
        cols, rows = _hash_join(cols, rows, acols, list(arel))
        if len(rows) < before:
            stats.backtracks += before - len(rows)
        # constraints as soon as their variables are present
        still = []
        for c in pending:
            if all(v in cols for v in atom_vars(c)):
                fn = rel_fns[c.kind]
                get = [_getter(t, cols) for t in c.args]
                rows = [r for r in rows if fn(store, get[0](r), get[1](r))]
            else:
                still.append(c)
        pending = still
        # keep only what later atoms, constraints or the root still need
        need = {pattern.projection}
        for a in positive[i + 1:] + pending:
            need.update(atom_vars(a))
        keep = [j for j, v in enumerate(cols) if v in need]
        if len(keep) < len(cols):
            cols = [cols[j] for j in keep]
            rows = list(dict.fromkeys(tuple(r[j] for j in keep) for r in rows))
        if not rows:
            break
    ri = cols.index(pattern.projection) if rows else 0
    roots = sorted({r[ri] for r in rows})
    stats.rule_firings = len(roots)
    stats.elapsed_seconds = time.perf_counter() - t0
    return MatchResult(roots, stats, "bruteforce")


def _getter(t, cols: list[Var]):
    if isinstance(t, Const):
        return lambda r, v=t.value: v
    i = cols.index(t)
    return lambda r: r[i]


STRATEGIES: dict[str, Callable[..., MatchResult]] = {
    "unified": match_unified,
    "subpattern": match_subpattern,
    "bruteforce": match_bruteforce,
}


def match(store: GraphStore, pattern: Pattern, strategy: str = "unified", **kw) -> MatchResult:
    try:
        fn = STRATEGIES[strategy]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {sorted(STRATEGIES)}") from None
    return fn(store, pattern, **kw)


# ------------------------------------------------------------- certificate

def _atom_holds(store: GraphStore, atom: Atom, binding: Mapping[str, int], relations: dict) -> bool:
    def value(t):
        return t.value if isinstance(t, Const) else binding[t.name]

    def agree(terms, args):
        return all(t is WILDCARD or value(t) == x for t, x in zip(terms, args))

    if isinstance(atom, ConstraintAtom):
        return bool(relations[atom.kind](store, value(atom.args[0]), value(atom.args[1])))
    if isinstance(atom, VertexAtom):
        vid = value(atom.id_term(store.schema))
        v = store.vertex(vid)
        return v is not None and v.vtype is atom.vtype and agree(atom.prop_terms(store.schema), v.props)
    terms = atom.terms
    if atom.src is not WILDCARD:
        cands = store.out_edges(value(atom.src), atom.etype)
    elif atom.dst is not WILDCARD:
        cands = store.in_edges(value(atom.dst), atom.etype)
    else:
        cands = store.edges_of_type(atom.etype)
    return any(agree(terms, (e.src, e.dst) + e.props) for e in cands)


def failing_atoms(store: GraphStore, pattern: Pattern, binding: Mapping[str, int],
                  relations: Mapping[ConstraintKind, Relation] | None = None) -> list[tuple[int, Atom]]:
    """Atoms (with their pattern index) that ``binding`` does not satisfy."""
    rel = _relations(relations)
    missing = [v.name for v in pattern.variables() if v.name not in binding]
    if missing:
        raise KeyError(f"binding lacks variables {missing}")
    return [(i, a) for i, _, a in pattern.atom_locations() if not _atom_holds(store, a, binding, rel)]


def check_witness(store: GraphStore, pattern: Pattern, binding: Mapping[str, int],
                  relations: Mapping[ConstraintKind, Relation] | None = None) -> bool:
    return not failing_atoms(store, pattern, binding, relations)
