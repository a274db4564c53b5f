import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_chordless_4_circuits, brute_cliques3, brute_pole_pairs

from singer import fixtures as F
from singer.complex import (
    ADDED_SQUARE,
    ADDED_TRIANGLE,
    ORIGINAL_TRIANGLE,
    CycleWithLabels,
    LabeledCellComplex,
    cap_disk,
    canonical_cycle,
    enumerate_chordless_4_circuits,
    enumerate_cliques3,
    induced_subcomplex,
    is_full,
    link,
    parse_triangulation,
    recognize_boundary_simplex,
    recognize_suspension,
    star,
)
from singer.errors import InvariantViolation, LabelError, SchemaError, TopologyError, UnknownVertex


def doc_of(L):
    return json.dumps(L.to_document())


def test_parse_octahedron():
    L = parse_triangulation(doc_of(F.octahedron()).encode())
    assert (L.n, len(L.edges), len(L.triangles)) == (6, 12, 8)


def test_parse_round_trip_preserves_digest():
    L = F.icosahedron({(0, 1): 3})
    assert parse_triangulation(doc_of(L)).digest() == L.digest()


def test_edge_in_three_triangles():
    doc = F.octahedron().to_document()
    doc["triangles"].append([0, 1, 4])
    with pytest.raises(TopologyError):
        parse_triangulation(doc)


def test_label_one_rejected():
    doc = F.octahedron().to_document()
    doc["labels"][0][2] = 1
    with pytest.raises(LabelError):
        parse_triangulation(doc)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d["labels"].pop(),
        lambda d: d["labels"].append([0, 2, 3]),  # 0 and 2 are not adjacent
        lambda d: d["labels"].append(list(d["labels"][0])),
    ],
    ids=["missing", "non-edge", "duplicate"],
)
def test_label_errors(mutate):
    doc = F.octahedron().to_document()
    mutate(doc)
    with pytest.raises(LabelError):
        parse_triangulation(doc)


@pytest.mark.parametrize(
    "text",
    [
        b"",
        b"[1, 2]",
        b'{"vertices": ["a"]}',
        b'{"vertices": ["a","b","c"], "triangles": [[0, 1]], "labels": []}',
        b'{"vertices": ["a","a","b","c"], "triangles": [], "labels": []}',
        b'{"vertices": [1,2,3,4], "triangles": [], "labels": [], "extra": 0}',
    ],
)
def test_schema_errors(text):
    with pytest.raises(SchemaError):
        parse_triangulation(text)


def test_torus_rejected():
    # 7-vertex torus: Euler characteristic 0
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    with pytest.raises(TopologyError):
        F.build(tris)


def test_links():
    assert link(F.octahedron(), 0).labels == (2, 2, 2, 2)
    assert all(len(link(F.icosahedron(), v)) == 5 for v in range(12))
    assert set(link(F.boundary_simplex(), 3).vertices) == {0, 1, 2}
    with pytest.raises(UnknownVertex):
        link(F.octahedron(), 17)


def test_star():
    assert len(star(F.octahedron(), 4).triangles) == 4
    assert len(star(F.icosahedron(), 0).triangles) == 5
    st_ = star(F.boundary_simplex(), 0)
    assert len(st_.triangles) == 3 and set(st_.boundary.vertices) == {1, 2, 3}


def test_induced_and_full():
    ico = F.icosahedron()
    sub = induced_subcomplex(ico, (0, 1, 2))
    assert sub.triangles == {(0, 1, 2)} and is_full(ico, sub)
    octa = F.octahedron()
    eq = CycleWithLabels.from_vertices((0, 1, 2, 3), octa)
    assert induced_subcomplex(octa, (0, 1, 2, 3)).triangles == frozenset()
    assert is_full(octa, eq)
    # a 4-cycle of the icosahedron around an edge misses the edge as a chord
    assert not is_full(ico, CycleWithLabels.from_vertices((0, 1, 6, 2), ico))
    with pytest.raises(UnknownVertex):
        induced_subcomplex(octa, (0, 99))


@pytest.mark.parametrize(
    "L,cliques,circuits",
    [(F.octahedron(), 8, 3), (F.icosahedron(), 20, 0), (F.boundary_simplex(), 4, 0)],
    ids=["octahedron", "icosahedron", "simplex"],
)
def test_enumeration_counts(L, cliques, circuits):
    assert len(enumerate_cliques3(L)) == cliques
    assert len(enumerate_chordless_4_circuits(L)) == circuits
    assert enumerate_cliques3(L) == brute_cliques3(L)


def test_circuits_are_chordless_and_sorted():
    L = F.planted_three_circuit()
    cycles = enumerate_chordless_4_circuits(L)
    keys = [tuple(sorted(c.vertices)) for c in cycles]
    assert keys == sorted(keys) == brute_chordless_4_circuits(L)
    for c in cycles:
        a, b, c_, d = c.vertices
        assert not L.adjacent(a, c_) and not L.adjacent(b, d)


def test_recognizers():
    octa = F.octahedron()
    sus = recognize_suspension(octa)
    assert sus.n == 4 and sus.poles == min(brute_pole_pairs(octa))
    assert len(brute_pole_pairs(octa)) == 3
    assert recognize_boundary_simplex(F.boundary_simplex())
    assert recognize_suspension(F.boundary_simplex()) is None
    assert recognize_suspension(F.icosahedron()) is None and not brute_pole_pairs(F.icosahedron())


def test_canonical_cycle():
    assert canonical_cycle((3, 1, 2, 0)) == (0, 2, 1, 3)
    assert canonical_cycle((2, 0, 1)) == (0, 1, 2)


def test_cap_disk_counts():
    L = F.planted_three_circuit()
    child, vmap, cap = cap_disk(L, (3, 4), (0, 1, 2))
    assert child.n == 6 and vmap[cap] is None and child.names[cap] == "cap"
    assert all(child.label(cap, u) == 2 for u in child.neighbors(cap))


def test_cell_complex_from_star_replacement():
    L = F.planted_three_circuit()
    X = LabeledCellComplex.from_star_replacement(L, [])
    assert X.provenance == (ORIGINAL_TRIANGLE,) * len(L.triangles)
    assert sorted(X.cells) == sorted(L.triangles)
    cusp = LabeledCellComplex.from_star_replacement(F.cusped_simplex(), [4, 5])
    assert cusp.n == 4 and cusp.provenance.count(ADDED_TRIANGLE) == 2


def test_cell_complex_invariants():
    octa = F.octahedron()
    X = LabeledCellComplex.from_star_replacement(octa, [4])
    assert X.provenance.count(ADDED_SQUARE) == 1
    assert len(X.vertices) - len(X.edges) + len(X.cells) == 2
    # a square whose labels are not all 2
    with pytest.raises(InvariantViolation):
        LabeledCellComplex.from_star_replacement(F.octahedron(3), [4])
    # a square cell with a diagonal edge breaks strictness
    with pytest.raises((InvariantViolation, TopologyError)):
        LabeledCellComplex(
            ["a", "b", "c", "d"],
            [(0, 1, 2, 3), (0, 1, 2), (0, 2, 3)],
            {(0, 1): 2, (1, 2): 2, (2, 3): 2, (0, 3): 2, (0, 2): 2},
            [ADDED_SQUARE, ORIGINAL_TRIANGLE, ORIGINAL_TRIANGLE],
        )


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 14))
def test_sphere_counting(n):
    L = F.suspension(n)
    assert len(L.triangles) == 2 * L.n - 4
    assert sum(L.valence(v) for v in L.vertices) == 2 * len(L.edges)
    assert L.n - len(L.edges) + len(L.triangles) == 2


def test_link_star_consistency(corpus):
    for e in corpus[:40]:
        L = e.L
        for v in L.vertices:
            s = star(L, v)
            rim = {t for t in induced_subcomplex(L, link(L, v).vertices).triangles}
            assert not rim or L.n == 4 or all(v not in t for t in rim)
            assert set(s.boundary.edges()) <= set(L.edges)
            assert s.vertices == frozenset(link(L, v).vertices) | {v}
