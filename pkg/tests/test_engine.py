import pytest
from hypothesis import given, settings, strategies as st

from patternforge.engine import (
    check_witness, evaluation_order, failing_atoms, match, match_bruteforce, match_subpattern,
    match_unified,
)
from patternforge.errors import InvalidPattern, SizeGuard
from patternforge.generator import Facts, GenConfig, generate, plant_minimal, random_graph
from patternforge.graph import EdgeRecord, EdgeType, GraphStore, VertexRecord, VertexType
from patternforge.pattern import ConstraintKind, builtin_agile_lite, parse_pattern

AGILE = builtin_agile_lite()
STRATS = (match_unified, match_subpattern, match_bruteforce)

# small patterns that produce many matches on random graphs
SMALL = [parse_pattern(t) for t in (
    "root X.\nsub a: vertex1(X), edgeC(X, U), vertex4(P, U, _).\nsub b: edgeA(X, Y, P), lt(P, 2).",
    "root Y.\nsub a: edgeD(W, Y, 1), vertex2(Y, S, K).\nsub b: edgeD(W2, Y, _), neq(W, W2), leq(K, S).",
    "root X.\nsub a: edgeB(X, U), edgeB(X, V).\nsub b: neq(U, V), red(U, V).",
    "root X.\nsub a: edgeA(X, Y, P), edgeF(Y, X).\nsub b: vertex4(Q, Z, _), green(P, Q), edgeC(X, Z).",
    "root X.\nsub a: eq(X, Y), edgeE(X, Y).",
)]


def roots(fn, g, p):
    return fn(g, p).roots


def test_planted_5k():
    g, rep = generate(GenConfig(seed=1, target_edges=5000))
    for fn in STRATS:
        assert roots(fn, g, AGILE) == [rep.planted_root]


def test_empty_graph():
    g = GraphStore().freeze()
    for fn in STRATS:
        res = fn(g, AGILE)
        assert res.roots == [] and res.stats.rule_firings == 0


def test_minimal_fixture():
    g, rep = plant_minimal()
    for fn in STRATS:
        assert roots(fn, g, AGILE) == [rep.planted_root]


def test_two_planted_instances():
    g, reps = random_graph(3, n_vertices=0, n_edges=0, plant=2)
    want = sorted(r.planted_root for r in reps)
    assert roots(match_bruteforce, g, AGILE) == want
    assert roots(match_unified, g, AGILE) == want
    assert roots(match_subpattern, g, AGILE) == want


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), plant=st.integers(0, 2), n_edges=st.integers(0, 600))
def test_strategy_agreement(seed, plant, n_edges):
    g, _ = random_graph(seed, n_vertices=40, n_edges=n_edges, plant=plant)
    for p in [AGILE] + SMALL:
        oracle = roots(match_bruteforce, g, p)
        assert roots(match_unified, g, p) == oracle
        assert roots(match_subpattern, g, p) == oracle


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), n_edges=st.integers(0, 400))
def test_inference_ordering(seed, n_edges):
    g, _ = random_graph(seed, n_vertices=30, n_edges=n_edges, plant=1)
    for p in [AGILE] + SMALL:
        assert match_subpattern(g, p).stats.atom_matches >= match_unified(g, p).stats.atom_matches


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), plant=st.integers(0, 2))
def test_witness_certificate(seed, plant):
    g, _ = random_graph(seed, n_vertices=30, n_edges=300, plant=plant)
    for p in [AGILE] + SMALL:
        for fn in (match_unified, match_subpattern):
            res = fn(g, p)
            assert sorted(res.witnesses) == res.roots
            for root, w in res.witnesses.items():
                assert w[p.projection.name] == root
                assert check_witness(g, p, w)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), extra=st.integers(1, 300))
def test_monotone_under_extension(seed, extra):
    g, _ = random_graph(seed, n_vertices=30, n_edges=100, plant=1)
    before = {id(p): set(match_unified(g, p).roots) for p in [AGILE] + SMALL}
    more, _ = random_graph(seed + 1, n_vertices=30, n_edges=extra)
    fx = Facts.from_store(g)
    ids = list(fx.vertices)
    for e in more.edges():
        fx.edges.append(e._replace(src=ids[e.src % len(ids)], dst=ids[e.dst % len(ids)]))
    h = fx.to_store().freeze()
    for p in [AGILE] + SMALL:
        assert before[id(p)] <= set(match_unified(h, p).roots)


def test_deterministic_counters():
    g, _ = generate(GenConfig(seed=4, target_edges=3000))
    for strategy in ("unified", "subpattern", "bruteforce"):
        a, b = match(g, AGILE, strategy), match(g, AGILE, strategy)
        assert a.roots == b.roots
        assert a.stats.counters() == b.stats.counters()


def test_counter_invariants():
    g, _ = generate(GenConfig(seed=2, target_edges=3000))
    for strategy in ("unified", "subpattern", "bruteforce"):
        s = match(g, AGILE, strategy).stats
        assert s.rule_firings <= s.atom_matches
        assert s.inferences == s.atom_matches + s.rule_firings


def test_duplicate_witnesses_counted():
    # X has two C edges, so two witnesses for the one root
    g = GraphStore()
    g.add_vertices([VertexRecord(1, VertexType.V1, ()), VertexRecord(2, VertexType.V3, ()),
                    VertexRecord(3, VertexType.V3, ())])
    g.add_edges([EdgeRecord(1, 2, EdgeType.C, ()), EdgeRecord(1, 3, EdgeType.C, ())])
    p = parse_pattern("root X.\nsub a: vertex1(X), edgeC(X, U).")
    res = match_unified(g.freeze(), p)
    assert res.roots == [1] and res.stats.rule_firings == 2


def test_size_guard():
    g, _ = random_graph(1, n_vertices=50, n_edges=300)
    p = parse_pattern("root X.\nsub a: vertex1(X), vertex4(_, Y, _), vertex2(Z, _, _).")
    with pytest.raises(SizeGuard):
        match_bruteforce(g, p, max_product=10)
    assert match_bruteforce(g, p).roots == match_unified(g, p).roots


def test_invalid_pattern_rejected():
    p = parse_pattern("root Q.\nsub a: vertex1(X).")
    for fn in STRATS:
        with pytest.raises(InvalidPattern):
            fn(GraphStore(), p)


def test_unknown_strategy():
    with pytest.raises(ValueError):
        match(GraphStore(), AGILE, "sideways")


def test_custom_relation():
    g, rep = plant_minimal()
    never = {ConstraintKind.RED_RELATION: lambda store, a, b: False}
    for fn in STRATS:
        assert fn(g, AGILE, relations=never).roots == []


def test_constraint_deferral():
    p = parse_pattern("root X.\nsub a: neq(X, Y), edgeC(X, Y).")
    order = evaluation_order(p.atoms)
    assert order[0].name == "edgeC" and order[1].name == "neq"


def test_failing_atoms_reports_broken_clause():
    g, rep = plant_minimal()
    w = dict(rep.planted_witness)
    w["U3"] = w["U2"]
    bad = {a.name for _, a in failing_atoms(g, AGILE, w)}
    assert bad == {"neq"}
