"""Andreev's conditions for the polytope dual to a labeled cell complex.

Faces of the dual polytope are vertices of the complex, its edges are edges,
and its vertices are cells; the dihedral angle on an edge labeled ``m`` is
``pi/m``.  Every condition is therefore a statement about cliques, circuits
and cells of the complex, and all angle comparisons reduce to comparing sums
of ``1/m`` with 1 exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .complex import (
    ADDED_SQUARE,
    LabeledCellComplex,
    LabeledTriangulation,
    angle_sum,
    chordless_4_cycles,
    cliques3,
    edge_key,
)
from .errors import InvariantViolation, SchemaError, SimplexInput

CONDITIONS = ("i", "ii", "iii", "iv", "v")


@dataclass(frozen=True)
class DualPolytope:
    complex: LabeledCellComplex
    dihedral_angles: Mapping[tuple[int, int], Fraction]
    vertex_valences: tuple[int, ...]
    is_simplex: bool
    is_triangular_prism: bool
    prism_poles: tuple[int, int] | None = None

    @property
    def num_faces(self) -> int:
        return self.complex.n

    @property
    def num_edges(self) -> int:
        return len(self.complex.edges)

    @property
    def num_vertices(self) -> int:
        return len(self.complex.cells)


def as_cell_complex(X) -> LabeledCellComplex:
    if isinstance(X, LabeledTriangulation):
        return LabeledCellComplex.from_triangulation(X)
    if not isinstance(X, LabeledCellComplex):
        raise TypeError(f"expected a labeled cell complex, got {type(X).__name__}")
    return X


def dual_polytope(X) -> DualPolytope:
    X = as_cell_complex(X)
    valences = tuple(len(c) for c in X.cells)
    if any(k not in (3, 4) for k in valences):
        raise InvariantViolation("every dual vertex must have 3 or 4 faces")
    angles = {e: Fraction(1, m) for e, m in X.labels.items()}
    is_simplex = X.n == 4 and len(X.edges) == 6
    poles = None
    if X.n == 5 and len(X.cells) == 6 and set(valences) == {3}:
        degs = sorted(X.vertices, key=lambda v: (X.valence(v), v))
        if [X.valence(v) for v in degs] == [3, 3, 4, 4, 4] and not X.adjacent(degs[0], degs[1]):
            poles = (degs[0], degs[1])
    return DualPolytope(X, angles, valences, is_simplex, poles is not None, poles)


@dataclass(frozen=True)
class ConditionRecord:
    condition: str
    instances: tuple[dict, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(inst["ok"] for inst in self.instances)

    @property
    def failures(self) -> list[dict]:
        return [inst for inst in self.instances if not inst["ok"]]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "instances": list(self.instances),
            "failures": self.failures,
        }


@dataclass(frozen=True)
class AndreevTranscript:
    records: tuple[ConditionRecord, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def failed_conditions(self) -> list[str]:
        return [r.condition for r in self.records if not r.passed]

    def record(self, condition: str) -> ConditionRecord:
        for r in self.records:
            if r.condition == condition:
                return r
        raise KeyError(condition)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "conditions": {r.condition: r.to_json() for r in self.records},
        }

    @classmethod
    def from_json(cls, doc) -> AndreevTranscript:
        try:
            conds = doc["conditions"]
            records = []
            for name in CONDITIONS:
                instances = conds[name]["instances"]
                if not isinstance(instances, list) or not all(
                    isinstance(i, dict) and isinstance(i.get("ok"), bool) for i in instances
                ):
                    raise SchemaError(f"malformed instances for condition ({name})")
                records.append(ConditionRecord(name, tuple(instances)))
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed Andreev transcript: {exc}") from None
        return cls(tuple(records))


def _labels(X, pairs) -> list[int]:
    return [X.label(a, b) for a, b in pairs]


def andreev_check(X) -> AndreevTranscript:
    """Evaluate conditions (i)-(v) on the dual of ``X``, recording every
    instance examined.  Simplices are rejected: they fall outside the theorem."""
    D = dual_polytope(X)
    X = D.complex
    if D.is_simplex:
        raise SimplexInput("the dual polytope is a simplex")
    cell_sets = {frozenset(c): prov for c, prov in X.cells_with_provenance()}
    squares = [c for c, prov in X.cells_with_provenance() if prov == ADDED_SQUARE]

    # (i) angle sums at the vertices of the polytope
    cond_i = []
    for c, prov in X.cells_with_provenance():
        k = len(c)
        labs = _labels(X, [(c[j], c[(j + 1) % k]) for j in range(k)])
        if k == 3:
            # Faces meeting at a 3-valent vertex pairwise share edges.
            assert all(X.adjacent(c[a], c[b]) for a in range(3) for b in range(a + 1, 3))
            ok = angle_sum(labs) >= 1
        else:
            ok = all(m == 2 for m in labs)
        cond_i.append({"cell": list(c), "provenance": prov, "labels": labs, "ok": ok})

    # (ii) prismatic 3-circuits
    cond_ii = []
    for t in cliques3(X.neighbor_sets()):
        if frozenset(t) in cell_sets:
            continue
        labs = _labels(X, [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])])
        cond_ii.append({"clique": list(t), "labels": labs, "ok": angle_sum(labs) < 1})

    # (iii) right-angled 4-circuits must close up at a square (ideal 4-valent vertex)
    cond_iii = []
    for c in chordless_4_cycles(X.neighbor_sets()):
        labs = _labels(X, [(c[j], c[(j + 1) % 4]) for j in range(4)])
        if any(m != 2 for m in labs):
            continue
        bounds = cell_sets.get(frozenset(c)) == ADDED_SQUARE
        cond_iii.append({"circuit": list(c), "bounds_square": bounds, "ok": bounds})

    # (iv) triangular prisms: the base and top edges cannot all be right angles
    cond_iv = []
    if D.is_triangular_prism:
        p, q = D.prism_poles
        edges = []
        for pole in (p, q):
            for e in sorted(X.neighbors(pole)):
                edges.append([pole, e, X.label(pole, e)])
        ok = not all(m == 2 for _, _, m in edges)
        cond_iv.append({"poles": [p, q], "suspension_edges": edges, "ok": ok})

    # (v) faces meeting only at a 4-valent vertex, plus a face adjacent to both
    cond_v = []
    for sq in squares:
        for i in (0, 1):
            a, c = sq[i], sq[i + 2]
            pair = frozenset((a, c))
            excluded = set()
            for other in squares:
                if pair <= set(other):
                    excluded.update(other)
            for g in sorted((X.neighbors(a) & X.neighbors(c)) - excluded):
                labs = [X.label(g, a), X.label(g, c)]
                cond_v.append(
                    {
                        "square": list(sq),
                        "pair": sorted((a, c)),
                        "g": g,
                        "labels": labs,
                        "ok": angle_sum(labs) < 1,
                    }
                )

    return AndreevTranscript(
        tuple(
            ConditionRecord(name, tuple(insts))
            for name, insts in zip(CONDITIONS, (cond_i, cond_ii, cond_iii, cond_iv, cond_v))
        )
    )


def edge_labels_2(X, pairs) -> bool:
    return all(X.label(*edge_key(a, b)) == 2 for a, b in pairs)
