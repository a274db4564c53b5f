"""Euclidean vertices, empty Euclidean circuits, circuit splitting and star
replacement.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

from .complex import (
    CycleWithLabels,
    LabeledCellComplex,
    LabeledTriangulation,
    angle_sum,
    cap_disk,
    chordless_4_cycles,
    cliques3,
    edge_key,
    link,
    recognize_boundary_simplex,
    recognize_suspension,
)
from .coxeter import require_metric_flag
from .errors import (
    AdjacentEuclideanVertices,
    DegenerateGlue,
    LabelError,
    LinkMismatch,
    NotEmptyCircuit,
    PreconditionViolated,
    TopologyError,
)

NOT_EUCLIDEAN = "NotEuclidean"
EUCLID3 = "Euclid3"
EUCLID4 = "Euclid4"

THREE = "Three"
FOUR = "Four"


def classify_vertex(L: LabeledTriangulation, v: int) -> str:
    cyc = link(L, v)
    if len(cyc) == 3 and angle_sum(cyc.labels) == 1:
        return EUCLID3
    if len(cyc) == 4 and all(m == 2 for m in cyc.labels):
        return EUCLID4
    return NOT_EUCLIDEAN


def euclidean_vertices(L: LabeledTriangulation) -> tuple[int, ...]:
    return tuple(v for v in L.vertices if classify_vertex(L, v) != NOT_EUCLIDEAN)


@dataclass(frozen=True)
class EmptyEuclideanCircuit:
    kind: str
    cycle: CycleWithLabels
    sides: tuple[tuple[int, ...], tuple[int, ...]]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "cycle": list(self.cycle.vertices),
            "labels": list(self.cycle.labels),
            "sides": [list(s) for s in self.sides],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> EmptyEuclideanCircuit:
        return cls(
            doc["kind"],
            CycleWithLabels(tuple(doc["cycle"]), tuple(doc["labels"])),
            (tuple(doc["sides"][0]), tuple(doc["sides"][1])),
        )


def circuit_sides(L: LabeledTriangulation, cycle: Iterable[int]) -> list[tuple[int, ...]]:
    """Vertex sets of the components of ``L`` minus ``cycle``, ordered by
    their smallest vertex."""
    removed = set(cycle)
    seen = set(removed)
    comps = []
    for start in L.vertices:
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in L.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


def _two_sides(L, cycle) -> tuple[tuple[int, ...], tuple[int, ...]]:
    sides = circuit_sides(L, cycle)
    if len(sides) != 2:
        raise TopologyError(
            f"circuit {list(cycle)} cuts the sphere into {len(sides)} pieces, expected 2"
        )
    return sides[0], sides[1]


def find_empty_euclidean_circuits(L: LabeledTriangulation) -> list[EmptyEuclideanCircuit]:
    """All empty Euclidean 3- and 4-circuits; 3-circuits first, each kind in
    lexicographic order of sorted vertices."""
    found = []
    for t in cliques3(L.neighbor_sets()):
        if L.has_triangle(*t):
            continue
        cyc = CycleWithLabels.from_vertices(t, L)
        if angle_sum(cyc.labels) != 1:
            continue
        sides = _two_sides(L, t)
        if min(len(s) for s in sides) >= 2:
            found.append(EmptyEuclideanCircuit(THREE, cyc, sides))
    for c in chordless_4_cycles(L.neighbor_sets()):
        cyc = CycleWithLabels.from_vertices(c, L)
        if any(m != 2 for m in cyc.labels):
            continue
        sides = _two_sides(L, c)
        # A side with one vertex makes the circuit that vertex's link.
        if min(len(s) for s in sides) >= 2:
            found.append(EmptyEuclideanCircuit(FOUR, cyc, sides))
    return found


@dataclass(frozen=True)
class Split:
    children: tuple[LabeledTriangulation, LabeledTriangulation]
    caps: tuple[int, int]
    vertex_maps: tuple[tuple[int | None, ...], tuple[int | None, ...]]


def split_along_circuit(L: LabeledTriangulation, C: EmptyEuclideanCircuit) -> Split:
    """Cap off both disks bounded by ``C`` with cones whose edges carry 2."""
    if C not in find_empty_euclidean_circuits(L):
        raise NotEmptyCircuit(f"{list(C.cycle.vertices)} is not an empty Euclidean circuit")
    parts = [cap_disk(L, side, C.cycle.vertices) for side in C.sides]
    return Split(
        (parts[0][0], parts[1][0]),
        (parts[0][2], parts[1][2]),
        (parts[0][1], parts[1][1]),
    )


def _cycle_isomorphisms(c1: CycleWithLabels, c2: CycleWithLabels):
    k = len(c1)
    for direction in (1, -1):
        for shift in range(k):
            image = [c2.vertices[(shift + direction * i) % k] for i in range(k)]
            labels = [
                c2.labels[(shift + i) % k] if direction == 1 else c2.labels[(shift - i - 1) % k]
                for i in range(k)
            ]
            if tuple(labels) == c1.labels:
                yield dict(zip(c1.vertices, image))


def merge_along_euclidean_vertices(
    L1: LabeledTriangulation,
    s1: int,
    L2: LabeledTriangulation,
    s2: int,
    iso: Mapping[int, int] | None = None,
) -> LabeledTriangulation:
    """Delete the open stars of ``s1`` and ``s2`` and glue the two disks along
    their boundary cycles. ``iso`` maps link vertices of ``s1`` to link
    vertices of ``s2``; by default the first labeled dihedral match is used.
    """
    for L, s in ((L1, s1), (L2, s2)):
        if classify_vertex(L, s) == NOT_EUCLIDEAN:
            raise PreconditionViolated(f"vertex {s} is not Euclidean")
    c1, c2 = link(L1, s1), link(L2, s2)
    if len(c1) != len(c2):
        raise LinkMismatch(f"links have lengths {len(c1)} and {len(c2)}")
    if iso is None:
        iso = next(_cycle_isomorphisms(c1, c2), None)
        if iso is None:
            raise LinkMismatch(f"labeled links {c1.labels} and {c2.labels} are not isomorphic")
    else:
        iso = dict(iso)
        if set(iso) != set(c1.vertices) or set(iso.values()) != set(c2.vertices):
            raise LinkMismatch("isomorphism does not match the link vertices")
        for u, w in c1.edges():
            if not L2.adjacent(iso[u], iso[w]) or L2.label(iso[u], iso[w]) != L1.label(u, w):
                raise LinkMismatch(f"isomorphism breaks the link edge {[u, w]}")

    index1 = {}
    names = []
    for v in L1.vertices:
        if v != s1:
            index1[v] = len(names)
            names.append(L1.names[v])
    index2 = {w: index1[u] for u, w in iso.items()}
    taken = set(names)
    for v in L2.vertices:
        if v == s2 or v in index2:
            continue
        name = L2.names[v]
        while name in taken:
            name += "'"
        taken.add(name)
        index2[v] = len(names)
        names.append(name)

    tris = []
    labels: dict[tuple[int, int], int] = {}
    for L, s, index in ((L1, s1, index1), (L2, s2, index2)):
        for t in L.triangles:
            if s not in t:
                tris.append(tuple(index[x] for x in t))
        for (a, b), m in L.labels.items():
            if s in (a, b):
                continue
            e = edge_key(index[a], index[b])
            if labels.setdefault(e, m) != m:
                raise DegenerateGlue(f"edge {list(e)} receives labels {labels[e]} and {m}")
    try:
        return LabeledTriangulation(names, tris, labels)
    except (TopologyError, LabelError) as exc:
        raise DegenerateGlue(str(exc)) from None


@dataclass(frozen=True)
class L6Witness:
    """Poles ``t, b``; hexagon ``(l, s1, v, s2, r, x)`` where ``s1`` and ``s2``
    are 4-Euclidean and their stars share the edges ``t-v`` and ``v-b``."""

    poles: tuple[int, int]
    hexagon: tuple[int, ...]

    @property
    def s1(self) -> int:
        return self.hexagon[1]

    @property
    def v(self) -> int:
        return self.hexagon[2]

    @property
    def s2(self) -> int:
        return self.hexagon[3]

    @property
    def x(self) -> int:
        return self.hexagon[5]

    @property
    def shared_edges(self) -> tuple[tuple[int, int], tuple[int, int]]:
        t, b = self.poles
        return edge_key(t, self.v), edge_key(self.v, b)

    def to_json(self) -> dict:
        return {
            "poles": list(self.poles),
            "hexagon": list(self.hexagon),
            "s1": self.s1,
            "s2": self.s2,
            "v": self.v,
            "x": self.x,
            "shared_edges": [list(e) for e in self.shared_edges],
        }


def recognize_L6(L: LabeledTriangulation) -> L6Witness | None:
    sus = recognize_suspension(L)
    if sus is None or sus.n != 6:
        return None
    eq = sus.equator.vertices
    best = None
    for i in range(6):
        s1, s2 = eq[i], eq[(i + 2) % 6]
        if classify_vertex(L, s1) == EUCLID4 and classify_vertex(L, s2) == EUCLID4:
            hexagon = tuple(eq[(i - 1 + j) % 6] for j in range(6))
            if s2 < s1:
                # Walk the other way so that s1 < s2.
                hexagon = tuple(eq[(i + 3 - j) % 6] for j in range(6))
            key = (min(s1, s2), max(s1, s2))
            if best is None or key < best[0]:
                best = (key, hexagon)
    if best is None:
        return None
    return L6Witness(sus.poles, best[1])


@dataclass(frozen=True)
class L6Detected:
    """Two added squares would overlap in more than one edge."""

    squares: tuple[int, int]
    shared_edges: tuple[tuple[int, int], ...]


def reduce_stars(
    L: LabeledTriangulation, T: Iterable[int] | None = None, check_preconditions: bool = True
) -> LabeledCellComplex | L6Detected:
    """Build ``[L - T]`` by replacing the star of each Euclidean vertex in
    ``T`` with a triangle or square cell spanning its link."""
    T = euclidean_vertices(L) if T is None else tuple(sorted(set(T)))
    for v in T:
        if classify_vertex(L, v) == NOT_EUCLIDEAN:
            raise PreconditionViolated(f"vertex {v} is not Euclidean")
    if check_preconditions:
        require_metric_flag(L)
        if recognize_boundary_simplex(L):
            raise PreconditionViolated("L is the boundary of a 3-simplex")
        sus = recognize_suspension(L)
        if sus is not None and sus.n in (3, 4, 5):
            raise PreconditionViolated(f"L is the suspension of a {sus.n}-gon")
        circuits = find_empty_euclidean_circuits(L)
        if circuits:
            raise PreconditionViolated(
                f"L has an empty Euclidean circuit {list(circuits[0].cycle.vertices)}"
            )
        if T != euclidean_vertices(L):
            raise PreconditionViolated("T must be the set of all Euclidean vertices")
    for u, w in combinations(T, 2):
        if L.adjacent(u, w):
            raise AdjacentEuclideanVertices(u, w)
    squares = [v for v in T if L.valence(v) == 4]
    square_edges = {v: set(link(L, v).edges()) for v in squares}
    for u, w in combinations(squares, 2):
        shared = square_edges[u] & square_edges[w]
        if len(shared) >= 2:
            return L6Detected((u, w), tuple(sorted(shared)))
    return LabeledCellComplex.from_star_replacement(L, T)
