"""The certification engine and the certificate data model.

``certify`` walks the decomposition of a metric flag nerve: base simplices,
suspensions of small polygons, L6 triangulations, splitting along empty
Euclidean circuits, and finally Euclidean vertex elimination followed by
Andreev's theorem.  Every node records the witnesses a reviewer needs to
re-check its hypotheses without running the engine (see ``singer.verify``).

Certificate document::

    {"format": "singer-certificate/1", "engine_version": ...,
     "input_digest": <sha256 of the canonical triangulation>,
     "root": <node>}

Each node is a JSON object with ``kind`` and ``num_vertices``.  The node
only claims that the hypotheses of the corresponding decomposition step
hold; acyclicity itself follows from the mathematical argument, which is
not re-proved here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from . import __version__
from .andreev import andreev_check
from .complex import (
    LabeledCellComplex,
    LabeledTriangulation,
    canonical_json,
    recognize_boundary_simplex,
    recognize_suspension,
)
from .coxeter import INDEFINITE, coxeter_matrix, gram_class, is_spherical, require_metric_flag
from .errors import AdjacentEuclideanVertices, InternalContradiction, SchemaError
from .reduction import (
    EUCLID3,
    EUCLID4,
    L6Detected,
    classify_vertex,
    euclidean_vertices,
    find_empty_euclidean_circuits,
    recognize_L6,
    reduce_stars,
    split_along_circuit,
)

FORMAT = "singer-certificate/1"

BASE_SIMPLEX_EUCLIDEAN = "BaseSimplexEuclidean"
BASE_SIMPLEX_HYPERBOLIC = "BaseSimplexHyperbolic"
SUSPENSION_CASE = "SuspensionCase"
L6 = "L6"
CIRCUIT_SPLIT = "CircuitSplit"
EUCLIDEAN_REDUCTION = "EuclideanReduction"
NODE_KINDS = (
    BASE_SIMPLEX_EUCLIDEAN,
    BASE_SIMPLEX_HYPERBOLIC,
    SUSPENSION_CASE,
    L6,
    CIRCUIT_SPLIT,
    EUCLIDEAN_REDUCTION,
)

ANDREEV_DIRECT = "AndreevDirect"
RIGHT_ANGLED_SUSPENSION = "RightAngledSuspension"
EUCLIDEAN_POLES_SPLIT = "EuclideanPolesSplit"
FIVE_GON_REDUCTION = "FiveGonReduction"
FIVE_GON_FIGURE4_SPLIT = "FiveGonFigure4Split"
FIVE_GON_ADJACENT_EUCLIDEAN = "FiveGonAdjacentEuclidean"

OUTCOME_ANDREEV = "Andreev"
OUTCOME_SIMPLEX = "SimplexAfterReduction"


@dataclass(frozen=True)
class Certificate:
    engine_version: str
    input_digest: str
    root: dict

    def to_json(self) -> dict:
        return {
            "format": FORMAT,
            "engine_version": self.engine_version,
            "input_digest": self.input_digest,
            "root": self.root,
        }

    def nodes(self):
        """Yield ``(path, node)`` pairs in depth-first order."""
        stack = [("root", self.root)]
        while stack:
            path, node = stack.pop()
            yield path, node
            kids = node.get("children", []) if isinstance(node, dict) else []
            for i in reversed(range(len(kids))):
                if isinstance(kids[i], dict):
                    stack.append((f"{path}/children[{i}]", kids[i].get("certificate")))


def serialize(cert: Certificate) -> bytes:
    return canonical_json(cert.to_json())


def deserialize(data: bytes | str) -> Certificate:
    try:
        doc = json.loads(data)
    except (ValueError, UnicodeDecodeError) as exc:
        raise SchemaError(f"certificate is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("certificate must be a JSON object")
    if set(doc) != {"format", "engine_version", "input_digest", "root"}:
        raise SchemaError(f"unexpected certificate keys {sorted(doc)}")
    if doc["format"] != FORMAT:
        raise SchemaError(f"unsupported certificate format {doc['format']!r}")
    if not isinstance(doc["engine_version"], str) or not isinstance(doc["input_digest"], str):
        raise SchemaError("engine_version and input_digest must be strings")
    if not isinstance(doc["root"], dict) or doc["root"].get("kind") not in NODE_KINDS:
        raise SchemaError("root must be a certificate node")
    return Certificate(doc["engine_version"], doc["input_digest"], doc["root"])


def _contradiction(L: LabeledTriangulation, message: str, **witness: Any) -> InternalContradiction:
    witness = {"triangulation": L.to_document(), "digest": L.digest(), **witness}
    return InternalContradiction(message, witness)


def certify(L: LabeledTriangulation) -> Certificate:
    """Certify a metric flag nerve; raises ``NotMetricFlag`` otherwise."""
    require_metric_flag(L)
    return Certificate(__version__, L.digest(), _certify(L, depth=1))


def _certify(L: LabeledTriangulation, depth: int) -> dict:
    if depth > L.n + 64:
        raise _contradiction(L, "recursion does not terminate")
    if recognize_boundary_simplex(L):
        return _base_simplex(L)
    sus = recognize_suspension(L)
    if sus is not None and sus.n in (3, 4, 5):
        return _suspension_case(L, sus)
    w = recognize_L6(L)
    if w is not None:
        return {"kind": L6, "num_vertices": L.n, "witness": w.to_json()}
    circuits = find_empty_euclidean_circuits(L)
    if circuits:
        return _circuit_split(L, circuits[0], depth)
    return _euclidean_reduction(L)


def _base_simplex(L: LabeledTriangulation) -> dict:
    g = gram_class(coxeter_matrix(L, L.vertices))
    node = {"num_vertices": L.n, "gram": str(g)}
    if g.kind == INDEFINITE:
        node["kind"] = BASE_SIMPLEX_HYPERBOLIC
        faces = []
        for t in L.triangles:
            if not is_spherical(coxeter_matrix(L, t)):
                raise _contradiction(L, f"face {list(t)} of a hyperbolic simplex is not spherical")
            faces.append({"face": list(t), "labels": _triangle_labels(L, t)})
        node["faces"] = faces
        return node
    if str(g) != "PSDCorank(1)":
        raise _contradiction(L, f"boundary simplex has Gram class {g}", gram=str(g))
    node["kind"] = BASE_SIMPLEX_EUCLIDEAN
    return node


def _triangle_labels(L, t) -> list[int]:
    return [L.label(t[0], t[1]), L.label(t[1], t[2]), L.label(t[0], t[2])]


def _suspension_case(L: LabeledTriangulation, sus) -> dict:
    transcript = andreev_check(L)
    node = {
        "kind": SUSPENSION_CASE,
        "num_vertices": L.n,
        "n": sus.n,
        "poles": list(sus.poles),
        "equator": list(sus.equator.vertices),
        "andreev": transcript.to_json(),
    }
    if transcript.passed:
        node.update(subcase=ANDREEV_DIRECT, witness={})
        return node
    failed = set(transcript.failed_conditions)
    p, q = sus.poles
    eq = sus.equator.vertices

    if sus.n == 3:
        if "ii" in failed:
            cls = [classify_vertex(L, p), classify_vertex(L, q)]
            if cls != [EUCLID3, EUCLID3]:
                raise _contradiction(L, "3-gon suspension fails (ii) without Euclidean poles")
            node.update(
                subcase=EUCLIDEAN_POLES_SPLIT,
                witness={"euclidean_vertices": [p, q], "class": EUCLID3},
            )
            return node
        if failed == {"iv"}:
            edges = [[s, e, L.label(s, e)] for s in (p, q) for e in eq]
            node.update(subcase=RIGHT_ANGLED_SUSPENSION, witness={"suspension_edges": edges})
            return node
        raise _contradiction(L, f"3-gon suspension fails {sorted(failed)}")

    if failed != {"iii"}:
        raise _contradiction(L, f"{sus.n}-gon suspension fails {sorted(failed)}")

    if sus.n == 4:
        circuit = transcript.record("iii").failures[0]["circuit"]
        pair = sorted(set(L.vertices) - set(circuit))
        if [classify_vertex(L, v) for v in pair] != [EUCLID4, EUCLID4]:
            raise _contradiction(L, "4-gon suspension fails (iii) without Euclidean poles")
        node.update(
            subcase=EUCLIDEAN_POLES_SPLIT,
            witness={"euclidean_vertices": pair, "class": EUCLID4, "circuit": circuit},
        )
        return node

    e4 = [v for v in eq if classify_vertex(L, v) == EUCLID4]
    if not e4:
        raise _contradiction(L, "5-gon suspension fails (iii) without a 4-Euclidean vertex")
    isolated = [v for v in e4 if not any(L.adjacent(v, u) for u in e4)]
    if isolated:
        v = isolated[0]
        reduced = LabeledCellComplex.from_star_replacement(L, [v])
        sub = andreev_check(reduced)
        witness = {
            "v": v,
            "reduced_digest": reduced.digest(),
            "reduced_andreev": sub.to_json(),
        }
        if sub.passed:
            node.update(subcase=FIVE_GON_REDUCTION, witness=witness)
            return node
        if "v" in sub.failed_conditions:
            s = _figure4_vertex(L, sus, v)
            if s is None:
                raise _contradiction(L, "no second 4-Euclidean vertex completes the split", v=v)
            witness["s"] = s
            node.update(subcase=FIVE_GON_FIGURE4_SPLIT, witness=witness)
            return node
        raise _contradiction(
            L, f"[L - v] fails {sub.failed_conditions} but not (v)", v=v, andreev=sub.to_json()
        )

    v = e4[0]
    u = next(w for w in e4 if L.adjacent(v, w))
    off = [w for w in eq if L.label(p, w) != 2 or L.label(q, w) != 2]
    if len(off) > 1:
        raise _contradiction(L, "several equator vertices carry non-right pole labels", off=off)
    v_prime = off[0] if off else e4[0]
    if classify_vertex(L, v_prime) != EUCLID4:
        raise _contradiction(L, f"vertex {v_prime} is not 4-Euclidean", v_prime=v_prime)
    node.update(
        subcase=FIVE_GON_ADJACENT_EUCLIDEAN, witness={"v": v, "u": u, "v_prime": v_prime}
    )
    return node


def _right_pole_labels(L, poles, w) -> bool:
    return all(L.label(s, w) == 2 for s in poles)


def _figure4_vertex(L, sus, v) -> int | None:
    eq = sus.equator.vertices
    for s in sorted(eq):
        if s == v or L.adjacent(s, v) or classify_vertex(L, s) != EUCLID4:
            continue
        if all(_right_pole_labels(L, sus.poles, w) for w in eq if w not in (v, s)):
            return s
    return None


def _circuit_split(L: LabeledTriangulation, circuit, depth: int) -> dict:
    split = split_along_circuit(L, circuit)
    expected = EUCLID3 if len(circuit.cycle) == 3 else EUCLID4
    children = []
    for child, cap, vmap in zip(split.children, split.caps, split.vertex_maps):
        if child.n >= L.n:
            raise _contradiction(L, "split child is not smaller", circuit=circuit.to_json())
        if classify_vertex(child, cap) != expected:
            raise _contradiction(L, "cap vertex has the wrong class", circuit=circuit.to_json())
        try:
            require_metric_flag(child)
        except Exception as exc:
            raise _contradiction(
                L, f"split child is not metric flag: {exc}", circuit=circuit.to_json()
            ) from None
        children.append(
            {
                "digest": child.digest(),
                "num_vertices": child.n,
                "cap_vertex": cap,
                "vertex_map": list(vmap),
                "certificate": _certify(child, depth + 1),
            }
        )
    return {
        "kind": CIRCUIT_SPLIT,
        "num_vertices": L.n,
        "circuit": circuit.to_json(),
        "children": children,
    }


def _euclidean_reduction(L: LabeledTriangulation) -> dict:
    T = euclidean_vertices(L)
    try:
        reduced = reduce_stars(L, T, check_preconditions=False)
    except AdjacentEuclideanVertices as exc:
        raise _contradiction(L, str(exc), adjacent=list(exc.pair)) from None
    if isinstance(reduced, L6Detected):
        raise _contradiction(
            L,
            "two added squares overlap outside an L6 triangulation",
            squares=list(reduced.squares),
        )
    node = {
        "kind": EUCLIDEAN_REDUCTION,
        "num_vertices": L.n,
        "euclidean_vertices": [[v, classify_vertex(L, v)] for v in T],
        "reduced_digest": reduced.digest(),
        "reduced_num_vertices": reduced.n,
    }
    if reduced.n == 4 and len(reduced.edges) == 6:
        g = gram_class(coxeter_matrix(reduced, reduced.vertices))
        if g.kind != INDEFINITE:
            raise _contradiction(L, f"reduced simplex has Gram class {g}", gram=str(g))
        node.update(outcome=OUTCOME_SIMPLEX, gram=str(g))
        return node
    transcript = andreev_check(reduced)
    if not transcript.passed:
        raise _contradiction(
            L,
            f"[L - T] fails Andreev conditions {transcript.failed_conditions}",
            andreev=transcript.to_json(),
        )
    node.update(outcome=OUTCOME_ANDREEV, andreev=transcript.to_json())
    return node


def summarize(node: dict) -> str:
    kind = node.get("kind")
    if kind == SUSPENSION_CASE:
        return f"{kind} n={node['n']} {node['subcase']}"
    if kind in (BASE_SIMPLEX_EUCLIDEAN, BASE_SIMPLEX_HYPERBOLIC):
        return f"{kind} {node['gram']}"
    if kind == EUCLIDEAN_REDUCTION:
        return f"{kind} |T|={len(node['euclidean_vertices'])} {node['outcome']}"
    if kind == CIRCUIT_SPLIT:
        return f"{kind} {node['circuit']['kind']} {node['circuit']['cycle']}"
    return str(kind)


def summary_lines(cert: Certificate) -> list[str]:
    """One line per node, indented by depth."""
    out = []
    for path, node in cert.nodes():
        out.append("  " * path.count("/") + summarize(node))
    return out


def node_kinds(cert: Certificate) -> list[str]:
    return [node["kind"] for _, node in cert.nodes()]


__all__ = [
    "Certificate",
    "certify",
    "deserialize",
    "node_kinds",
    "serialize",
    "summarize",
    "summary_lines",
]
