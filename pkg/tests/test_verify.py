import copy
import json

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from singer import fixtures as F
from singer.certify import certify
from singer.verify import verify


def cert_doc(L):
    return copy.deepcopy(certify(L).to_json())


def test_accepts_fixtures():
    for L in (
        F.icosahedron(),
        F.octahedron(),
        F.affine_simplex(),
        F.linear_diagram_simplex(5, 3, 4),
        F.prism_nerve(),
        F.planted_three_circuit(),
        F.l6_triangulation(),
        F.cusped_simplex(),
        F.subdivided_bipyramid(),
    ):
        report = verify(L, certify(L))
        assert report.accepted, report.failures
        assert report.to_json() == {"accepted": True, "failures": []}


def test_accepts_json_document():
    L = F.planted_three_circuit()
    assert verify(L, cert_doc(L)).accepted


def test_rejects_other_input():
    cert = certify(F.icosahedron())
    report = verify(F.icosahedron({(0, 1): 3}), cert)
    assert not report.accepted and "digest" in report.failures[0][1]


def _tamper_gram(d):
    d["root"]["gram"] = "PositiveDefinite"


def _tamper_subcase(d):
    d["root"]["subcase"] = "AndreevDirect"


def _tamper_kind(d):
    d["root"]["kind"] = "L6"


def _tamper_format(d):
    d["format"] = "other/1"


def _drop_child(d):
    d["root"]["children"].pop()


def _tamper_child_digest(d):
    d["root"]["children"][0]["digest"] = "0" * 64


def _tamper_cap(d):
    kid = d["root"]["children"][0]
    kid["cap_vertex"] = (kid["cap_vertex"] + 1) % kid["num_vertices"]


def _tamper_vertex_map(d):
    vmap = d["root"]["children"][1]["vertex_map"]
    i = next(k for k, v in enumerate(vmap) if v is not None)
    j = next(k for k, v in enumerate(vmap) if v is not None and k > i)
    vmap[i], vmap[j] = vmap[j], vmap[i]


def _tamper_circuit(d):
    d["root"]["circuit"]["cycle"] = [0, 1, 3]


def _flip_andreev(d):
    d["root"]["andreev"]["passed"] = False


def _drop_instance(d):
    d["root"]["andreev"]["conditions"]["i"]["instances"].pop()


def _lie_about_instance(d):
    inst = d["root"]["andreev"]["conditions"]["ii"]["instances"]
    inst.append({"clique": [0, 1, 2], "labels": [2, 2, 2], "ok": True})


def _tamper_outcome(d):
    d["root"]["outcome"] = "SimplexAfterReduction"


def _tamper_euclidean_list(d):
    d["root"]["euclidean_vertices"] = []


def _tamper_reduced_digest(d):
    d["root"]["reduced_digest"] = "f" * 64


TAMPERS = [
    (F.affine_simplex, _tamper_gram),
    (F.prism_nerve, _tamper_subcase),
    (F.icosahedron, _tamper_kind),
    (F.icosahedron, _tamper_format),
    (F.planted_three_circuit, _drop_child),
    (F.planted_three_circuit, _tamper_child_digest),
    (F.planted_three_circuit, _tamper_cap),
    (F.planted_three_circuit, _tamper_vertex_map),
    (F.planted_three_circuit, _tamper_circuit),
    (F.icosahedron, _flip_andreev),
    (F.icosahedron, _drop_instance),
    (F.icosahedron, _lie_about_instance),
    (F.icosahedron, _tamper_outcome),
    (F.subdivided_bipyramid, _tamper_euclidean_list),
    (F.subdivided_bipyramid, _tamper_reduced_digest),
]


@pytest.mark.parametrize("make,tamper", TAMPERS, ids=[t.__name__.strip("_") for _, t in TAMPERS])
def test_rejects_tampering(make, tamper):
    L = make()
    doc = cert_doc(L)
    tamper(doc)
    report = verify(L, doc)
    assert not report.accepted and report.failures


def test_rejects_wrong_precedence():
    # a valid L6 node placed on an input that is not L6
    L = F.icosahedron()
    doc = cert_doc(L)
    doc["root"] = certify(F.l6_triangulation()).root
    assert not verify(L, doc).accepted


def test_rejects_non_metric_flag_input():
    L = F.boundary_simplex()
    doc = cert_doc(F.affine_simplex())
    doc["input_digest"] = L.digest()
    assert not verify(L, doc).accepted


json_values = st.recursive(
    st.none() | st.booleans() | st.integers(-3, 70) | st.text(max_size=4),
    lambda inner: st.lists(inner, max_size=3) | st.dictionaries(st.text(max_size=6), inner, max_size=3),
    max_leaves=8,
)


def _paths(node, prefix=()):
    yield prefix
    if isinstance(node, dict):
        for k, v in node.items():
            yield from _paths(v, prefix + (k,))
    elif isinstance(node, list):
        for i, v in enumerate(node):
            yield from _paths(v, prefix + (i,))


BASE = {f.__name__: (f(), cert_doc(f())) for f in (F.planted_three_circuit, F.icosahedron)}


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from(sorted(BASE)), st.data(), json_values)
def test_fuzzed_certificates_never_raise(name, data, value):
    L, doc = BASE[name]
    doc = copy.deepcopy(doc)
    paths = [p for p in _paths(doc) if p]
    path = data.draw(st.sampled_from(paths))
    target = doc
    for k in path[:-1]:
        target = target[k]
    target[path[-1]] = value
    report = verify(L, doc)
    json.dumps(report.to_json())
    if report.accepted:
        # engine_version is informational; any other edit must be a no-op
        assert path == ("engine_version",) or doc == BASE[name][1]


@settings(max_examples=40, deadline=None)
@given(json_values)
def test_garbage_never_raises(value):
    assert not verify(F.icosahedron(), value).accepted


def test_extra_node_key_rejected():
    L = F.icosahedron()
    doc = cert_doc(L)
    doc["root"]["note"] = "trust me"
    assert not verify(L, doc).accepted


MUTATION_FIXTURES = {
    "planted": F.planted_three_circuit,
    "prism": F.prism_nerve,
    "cusped": F.cusped_simplex,
    "hyperbolic": lambda: F.linear_diagram_simplex(5, 3, 4),
    "l6": F.l6_triangulation,
}


@pytest.mark.parametrize("name", list(MUTATION_FIXTURES))
def test_every_field_is_checked(name):
    L = MUTATION_FIXTURES[name]()
    base = cert_doc(L)
    survivors = []
    for path in _paths(base):
        if not path or path == ("engine_version",):
            continue
        for value in ("X", 999):
            doc = copy.deepcopy(base)
            target = doc
            for k in path[:-1]:
                target = target[k]
            if target[path[-1]] == value:
                continue
            target[path[-1]] = value
            if verify(L, doc).accepted:
                survivors.append((path, value))
    assert survivors == []
