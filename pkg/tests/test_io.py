import io

import pytest
from hypothesis import given, settings, strategies as st

from patternforge.errors import ArityMismatch, DuplicateId, ParseError, UnknownPredicate
from patternforge.generator import GenConfig, generate, plant_minimal, random_graph
from patternforge.graph import EMPTY_DIGEST, EdgeRecord, EdgeType, GraphStore, VertexType
from patternforge.io_formats import (
    export_prolog, load_columnar, load_facts, read_metrics_csv, save_columnar, save_facts,
    write_metrics_csv,
)
from patternforge.metrics import BenchRow
from patternforge.engine import MatchStats
from patternforge.pattern import builtin_agile_lite

AGILE = builtin_agile_lite()


def test_literal_facts():
    g, rep = load_facts("vertex1(735713441679521195).\nedgeD(932362105613871012, 60, 1).\n")
    assert g.vertex(735713441679521195).vtype is VertexType.V1
    assert list(g.edges()) == [EdgeRecord(932362105613871012, 60, EdgeType.D, (1,))]
    assert rep.kinds() == ["DanglingEndpoint", "DanglingEndpoint"]


def test_vertex4_id_position():
    g, _ = load_facts("vertex4(5, 42, 6).")
    v = g.vertex(42)
    assert v.vtype is VertexType.V4 and v.props == (5, 6)


def test_arity_line_number():
    with pytest.raises(ArityMismatch) as info:
        load_facts("edgeD(1,2).")
    assert info.value.line == 1


def test_diagnostics():
    with pytest.raises(UnknownPredicate) as info:
        load_facts("% ok\nvertex1(1).\nedgeZ(1, 2).")
    assert info.value.line == 3
    with pytest.raises(ParseError):
        load_facts("vertex1(1)")
    with pytest.raises(ParseError):
        load_facts("vertex1(x).")
    with pytest.raises(DuplicateId):
        load_facts("vertex1(1).\nvertex1(1).")


def test_comments_and_blanks():
    g, rep = load_facts("% header\n\n  vertex1(7).  % trailing\n")
    assert g.vertex_count == 1 and rep.ok


def test_empty_store():
    text = save_facts(GraphStore())
    assert all(line.startswith("%") for line in text.splitlines())
    assert load_facts(text)[0].digest() == EMPTY_DIGEST


def test_round_trip_minimal():
    g, _ = plant_minimal()
    assert load_facts(save_facts(g))[0].digest() == g.digest()
    assert load_columnar(save_columnar(g))[0].digest() == g.digest()


def test_round_trip_100k():
    g, _ = generate(GenConfig(seed=11, target_edges=100_000))
    buf = io.StringIO()
    save_facts(g, buf)
    buf.seek(0)
    h, rep = load_facts(buf)
    assert h.digest() == g.digest() and rep.ok
    assert load_columnar(save_columnar(g))[0].digest() == g.digest()


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), n_edges=st.integers(0, 300), plant=st.integers(0, 2))
def test_round_trip_property(seed, n_edges, plant):
    g, _ = random_graph(seed, n_vertices=25, n_edges=n_edges, plant=plant)
    assert load_facts(save_facts(g))[0].digest() == g.digest()
    assert load_columnar(save_columnar(g))[0].digest() == g.digest()


def _defined_and_used(program: str):
    import re
    body_preds = set()
    heads = set()
    for clause in re.split(r"\.\n", program):
        clause = clause.strip()
        if not clause or clause.startswith("%") or clause.startswith(":-"):
            continue
        head, _, body = clause.partition(":-")
        heads.add(re.match(r"[a-z]\w*", head.strip()).group(0))
        body_preds.update(re.findall(r"\b([a-z]\w*)\(", body))
    return heads, body_preds


BUILTINS = {"setof", "forall", "member", "write", "nl", "halt", "root"}


@pytest.mark.parametrize("style", ["unified", "subpattern"])
def test_export_self_contained(style):
    g, _ = plant_minimal()
    prog = export_prolog(g, AGILE, style)
    heads, used = _defined_and_used(prog)
    assert used - BUILTINS <= heads | {"vertex%d" % i for i in range(1, 6)} | {f"edge{c}" for c in "ABCDEF"}
    assert ":- initialization(" in prog


def test_export_unified_single_rule():
    g, _ = plant_minimal()
    prog = export_prolog(g, AGILE, "unified")
    assert prog.count(":-\n") == 1
    rule = prog[prog.index("root(X) :-"):prog.index("\n\nmain")]
    assert rule.count("edgeC(") == 3 and "red(" not in rule


def test_export_subpattern_rules():
    g, _ = plant_minimal()
    prog = export_prolog(g, AGILE, "subpattern")
    for i in range(1, 7):
        assert f"\nsub{i}(" in prog
    assert "red(A, B) :-" in prog and "green(A, B) :-" in prog


def test_export_empty_graph():
    prog = export_prolog(GraphStore(), AGILE, "unified")
    assert not [line for line in prog.splitlines() if line.startswith(("vertex", "edge"))]
    assert "root(X) :-" in prog


def test_export_facts_grouped():
    g, _ = generate(GenConfig(seed=1, target_edges=500))
    prog = export_prolog(g, AGILE, "unified")
    preds = [line.split("(")[0] for line in prog.splitlines() if line[:4] in ("vert", "edge")]
    # each predicate's facts form one contiguous block
    blocks = [p for i, p in enumerate(preds) if i == 0 or preds[i - 1] != p]
    assert len(blocks) == len(set(blocks))


def _row(edges, strategy, inf=1000, t=0.5):
    return BenchRow.from_stats(edges, strategy, MatchStats(inf, 4, 0, t), seed=1, clock_hz=2e9)


def test_csv_header_only():
    assert write_metrics_csv([]) == (
        "edges,strategy,elapsed_s,atom_matches,rule_firings,inferences,lips,"
        "cycles_per_inference,cycles_per_edge,seed\n")


def test_csv_reference_magnitudes():
    row = BenchRow.from_stats(1000, "unified", MatchStats(10_000_000, 0, 0, 1.0), seed=0, clock_hz=2e9)
    back = read_metrics_csv(write_metrics_csv([row]))[0]
    assert back.lips == 1e7 and back.cycles_per_inference == 200


def test_csv_sorted_and_lossless():
    rows = [_row(n, s, inf=n * 7 + 2**53 + 1) for n in (300, 100, 200) for s in ("unified", "subpattern")]
    text = write_metrics_csv(rows)
    lines = text.splitlines()
    assert len(lines) == 7
    keys = [(int(l.split(",")[0]), l.split(",")[1]) for l in lines[1:]]
    assert keys == sorted(keys)
    assert sorted(read_metrics_csv(text), key=lambda r: (r.edges, r.strategy)) == \
        sorted(rows, key=lambda r: (r.edges, r.strategy))
