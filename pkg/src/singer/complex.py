"""Edge-labeled triangulations and triangle/square cell complexes of the 2-sphere.

Vertices are integers ``0..n-1`` with display names. Edge labels are Coxeter
exponents ``m >= 2``; a missing edge has label ``INFINITE``, which is never
stored. Every object is validated on construction and treated as immutable
afterwards.
"""

from __future__ import annotations

import hashlib
import json
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import (
    InvariantViolation,
    LabelError,
    SchemaError,
    TopologyError,
    UnknownVertex,
)

INFINITE = math.inf

ORIGINAL_TRIANGLE = "OriginalTriangle"
ADDED_TRIANGLE = "AddedTriangle"
ADDED_SQUARE = "AddedSquare"
PROVENANCES = (ORIGINAL_TRIANGLE, ADDED_TRIANGLE, ADDED_SQUARE)


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def angle_sum(labels: Iterable[int]) -> Fraction:
    """Sum of 1/m over ``labels``: the angle sum in units of pi."""
    return sum((Fraction(1, m) for m in labels), Fraction(0))


def canonical_cycle(seq: Sequence[int]) -> tuple[int, ...]:
    """Rotate/reflect a cyclic sequence to start at its minimum and head to
    the smaller of the two neighbours of that minimum."""
    seq = list(seq)
    i = seq.index(min(seq))
    fwd = seq[i:] + seq[:i]
    back = [fwd[0]] + fwd[1:][::-1]
    if len(seq) > 2 and back[1] < fwd[1]:
        return tuple(back)
    return tuple(fwd)


def canonical_json(doc) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode(
        "utf-8"
    )


@dataclass(frozen=True)
class CycleWithLabels:
    """A simple cycle; ``labels[i]`` sits on the edge ``vertices[i]``-``vertices[i+1]``."""

    vertices: tuple[int, ...]
    labels: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [edge_key(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def as_subcomplex(self) -> SubComplex:
        return SubComplex(frozenset(self.vertices), frozenset(self.edges()), frozenset())

    @classmethod
    def from_vertices(cls, vertices: Sequence[int], host) -> CycleWithLabels:
        vs = canonical_cycle(vertices)
        k = len(vs)
        labels = []
        for i in range(k):
            u, w = vs[i], vs[(i + 1) % k]
            if not host.adjacent(u, w):
                raise ValueError(f"{u} and {w} are not adjacent")
            labels.append(host.label(u, w))
        return cls(vs, tuple(labels))

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "labels": list(self.labels)}


@dataclass(frozen=True)
class SubComplex:
    vertices: frozenset
    edges: frozenset
    triangles: frozenset
    boundary: CycleWithLabels | None = None

    def same_cells(self, other: SubComplex) -> bool:
        return (
            self.vertices == other.vertices
            and self.edges == other.edges
            and self.triangles == other.triangles
        )


def _check_sphere(n: int, cells: Sequence[Sequence[int]], error=TopologyError):
    """Check that the cyclic ``cells`` cellulate a 2-sphere on vertices ``0..n-1``.

    Returns ``(edges, neighbours, link_cycles)``.
    """
    edge_count: dict[tuple[int, int], int] = {}
    corners: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for cell in cells:
        k = len(cell)
        for i in range(k):
            u, w = cell[i], cell[(i + 1) % k]
            e = edge_key(u, w)
            edge_count[e] = edge_count.get(e, 0) + 1
            corners[w].append((u, cell[(i + 2) % k]))
    for e, c in sorted(edge_count.items()):
        if c != 2:
            raise error(f"edge {list(e)} lies in {c} cells (expected 2)")

    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, w in edge_count:
        nbrs[u].add(w)
        nbrs[w].add(u)

    links = []
    for v in range(n):
        if not nbrs[v]:
            raise error(f"vertex {v} lies in no cell")
        link_adj: dict[int, list[int]] = {u: [] for u in nbrs[v]}
        for a, b in corners[v]:
            link_adj[a].append(b)
            link_adj[b].append(a)
        if any(len(x) != 2 for x in link_adj.values()):
            raise error(f"link of vertex {v} is not a cycle")
        start = min(link_adj)
        order = [start]
        prev, cur = None, start
        while True:
            a, b = link_adj[cur]
            nxt = b if a == prev else a
            if nxt == start:
                break
            order.append(nxt)
            prev, cur = cur, nxt
            if len(order) > len(link_adj):
                raise error(f"link of vertex {v} is not a cycle")
        if len(order) != len(link_adj):
            raise error(f"link of vertex {v} is not a single cycle")
        links.append(canonical_cycle(order))

    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) != n:
        raise error(f"not connected: vertex {min(set(range(n)) - seen)} unreachable")
    chi = n - len(edge_count) + len(cells)
    if chi != 2:
        raise error(f"Euler characteristic {chi} != 2")
    return sorted(edge_count), tuple(frozenset(s) for s in nbrs), links


def _check_labels(edges, labels: Mapping, error=LabelError) -> dict[tuple[int, int], int]:
    out: dict[tuple[int, int], int] = {}
    for (u, w), m in labels.items():
        e = edge_key(u, w)
        if isinstance(m, bool) or not isinstance(m, int):
            raise error(f"label on {list(e)} is not an integer: {m!r}")
        if m < 2:
            raise error(f"label on {list(e)} is {m}; labels must be >= 2")
        if e in out:
            raise error(f"edge {list(e)} labeled twice")
        out[e] = m
    edge_set = set(edges)
    for e in sorted(out):
        if e not in edge_set:
            raise error(f"label given for non-edge {list(e)}")
    for e in edges:
        if e not in out:
            raise error(f"edge {list(e)} has no label")
    return out


class _LabeledGraph:
    """Adjacency and label queries shared by triangulations and cell complexes."""

    names: tuple[str, ...]
    _nbrs: tuple[frozenset, ...]
    _labels: dict[tuple[int, int], int]

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def vertices(self) -> range:
        return range(len(self.names))

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def labels(self) -> Mapping[tuple[int, int], int]:
        return MappingProxyType(self._labels)

    def check_vertex(self, v) -> None:
        if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < self.n:
            raise UnknownVertex(v)

    def neighbors(self, v: int) -> frozenset:
        self.check_vertex(v)
        return self._nbrs[v]

    def valence(self, v: int) -> int:
        return len(self.neighbors(v))

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._nbrs[u]

    def label(self, u: int, v: int):
        """Label of the pair ``{u, v}``; ``INFINITE`` when they are not adjacent."""
        return self._labels.get(edge_key(u, v), INFINITE)

    def neighbor_sets(self) -> tuple[frozenset, ...]:
        return self._nbrs

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_bytes()).hexdigest()

    def canonical_bytes(self) -> bytes:
        return canonical_json(self.to_document())

    def to_document(self) -> dict:
        raise NotImplementedError


class LabeledTriangulation(_LabeledGraph):
    """A simplicial 2-sphere with finite labels on its edges (a Coxeter nerve)."""

    def __init__(self, names: Sequence[str], triangles: Iterable[Sequence[int]], labels: Mapping):
        self.names = tuple(names)
        n = len(self.names)
        tris = []
        for t in triangles:
            t = tuple(t)
            if len(t) != 3:
                raise TopologyError(f"triangle {list(t)} does not have 3 vertices")
            for v in t:
                if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < n:
                    raise TopologyError(f"triangle {list(t)} uses unknown vertex {v!r}")
            if len(set(t)) != 3:
                raise TopologyError(f"degenerate triangle {list(t)}")
            tris.append(tuple(sorted(t)))
        if len(set(tris)) != len(tris):
            dup = sorted(t for t in set(tris) if tris.count(t) > 1)[0]
            raise TopologyError(f"triangle {list(dup)} listed twice")
        if n < 4:
            raise TopologyError(f"{n} vertices cannot triangulate the 2-sphere")
        self.triangles = tuple(sorted(tris))
        self._triangle_set = frozenset(self.triangles)
        self._edges, self._nbrs, links = _check_sphere(n, self.triangles)
        self._edges = tuple(self._edges)
        self._links = links
        self._labels = _check_labels(self._edges, labels)

    @classmethod
    def from_document(cls, doc) -> LabeledTriangulation:
        return parse_triangulation(doc)

    def has_triangle(self, a: int, b: int, c: int) -> bool:
        return tuple(sorted((a, b, c))) in self._triangle_set

    def link_vertices(self, v: int) -> tuple[int, ...]:
        self.check_vertex(v)
        return self._links[v]

    def triangles_containing(self, v: int) -> list[tuple[int, int, int]]:
        return [t for t in self.triangles if v in t]

    def to_document(self) -> dict:
        return {
            "vertices": list(self.names),
            "triangles": [list(t) for t in self.triangles],
            "labels": [[u, w, m] for (u, w), m in sorted(self._labels.items())],
        }

    def __repr__(self) -> str:
        return f"LabeledTriangulation(V={self.n}, E={len(self._edges)}, F={len(self.triangles)})"


def parse_triangulation(document) -> LabeledTriangulation:
    """Parse and validate a triangulation document (bytes, str or decoded dict)."""
    if isinstance(document, (bytes, bytearray)):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError(f"document is not UTF-8: {exc}") from None
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise SchemaError("document must be a JSON object")
    keys = set(document)
    if keys != {"vertices", "triangles", "labels"}:
        raise SchemaError(
            f"expected keys vertices, triangles, labels; got {sorted(keys)}"
        )
    names = document["vertices"]
    if not isinstance(names, list) or not all(isinstance(x, str) for x in names):
        raise SchemaError("'vertices' must be a list of strings")
    if len(set(names)) != len(names):
        raise SchemaError("vertex names must be unique")

    def int_rows(key):
        rows = document[key]
        if not isinstance(rows, list):
            raise SchemaError(f"'{key}' must be a list")
        for row in rows:
            if (
                not isinstance(row, list)
                or len(row) != 3
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in row)
            ):
                raise SchemaError(f"'{key}' entries must be lists of 3 integers: {row!r}")
        return rows

    triangles = int_rows("triangles")
    label_rows = int_rows("labels")
    labels: dict[tuple[int, int], int] = {}
    for i, j, m in label_rows:
        if not i < j:
            raise SchemaError(f"label pair {[i, j]} must satisfy i < j")
        if (i, j) in labels:
            raise LabelError(f"edge {[i, j]} labeled twice")
        labels[(i, j)] = m
    return LabeledTriangulation(names, triangles, labels)


def link(L: LabeledTriangulation, v: int) -> CycleWithLabels:
    """The link of ``v`` as a labeled cycle (labels of the link's own edges)."""
    vs = L.link_vertices(v)
    k = len(vs)
    return CycleWithLabels(vs, tuple(L.label(vs[i], vs[(i + 1) % k]) for i in range(k)))


def star(L: LabeledTriangulation, v: int) -> SubComplex:
    cyc = link(L, v)
    edges = set(cyc.edges())
    edges.update(edge_key(v, u) for u in cyc.vertices)
    tris = frozenset(t for t in L.triangles if v in t)
    return SubComplex(frozenset(cyc.vertices) | {v}, frozenset(edges), tris, cyc)


def induced_subcomplex(L: LabeledTriangulation, U: Iterable[int]) -> SubComplex:
    U = frozenset(U)
    for v in U:
        L.check_vertex(v)
    edges = frozenset(e for e in L.edges if e[0] in U and e[1] in U)
    tris = frozenset(t for t in L.triangles if all(x in U for x in t))
    return SubComplex(U, edges, tris)


def is_full(L: LabeledTriangulation, A) -> bool:
    """Whether ``A`` (a SubComplex or CycleWithLabels) is the subcomplex of
    ``L`` induced by its own vertex set."""
    if isinstance(A, CycleWithLabels):
        A = A.as_subcomplex()
    return A.same_cells(induced_subcomplex(L, A.vertices))


def cliques3(nbrs: Sequence[frozenset]) -> list[tuple[int, int, int]]:
    out = []
    for u in range(len(nbrs)):
        for v in nbrs[u]:
            if v > u:
                for w in nbrs[u] & nbrs[v]:
                    if w > v:
                        out.append((u, v, w))
    out.sort()
    return out


def chordless_4_cycles(nbrs: Sequence[frozenset]) -> list[tuple[int, int, int, int]]:
    """All induced 4-cycles, each as ``(a, b, c, d)`` with ``a`` minimal and
    ``b < d``, sorted by their sorted vertex tuples."""
    found = set()
    n = len(nbrs)
    for a in range(n):
        for c in range(a + 1, n):
            if c in nbrs[a]:
                continue
            common = sorted(w for w in nbrs[a] & nbrs[c] if w > a)
            for i, b in enumerate(common):
                for d in common[i + 1 :]:
                    if d not in nbrs[b]:
                        found.add((a, b, c, d))
    return sorted(found, key=lambda cyc: (tuple(sorted(cyc)), cyc))


def enumerate_cliques3(L) -> list[tuple[int, int, int]]:
    return cliques3(L.neighbor_sets())


def enumerate_chordless_4_circuits(L) -> list[CycleWithLabels]:
    return [CycleWithLabels.from_vertices(c, L) for c in chordless_4_cycles(L.neighbor_sets())]


def recognize_boundary_simplex(L: LabeledTriangulation) -> bool:
    return (
        L.n == 4
        and len(L.triangles) == 4
        and all(L.adjacent(u, w) for u in range(4) for w in range(u + 1, 4))
    )


@dataclass(frozen=True)
class Suspension:
    poles: tuple[int, int]
    equator: CycleWithLabels

    @property
    def n(self) -> int:
        return len(self.equator)


def suspension_pole_pairs(L: LabeledTriangulation) -> list[tuple[int, int]]:
    """Every non-adjacent pair ``p < q`` exhibiting ``L`` as a suspension."""
    n = L.n
    if n < 5:
        return []
    cand = [v for v in L.vertices if L.valence(v) == n - 2]
    pairs = []
    for i, p in enumerate(cand):
        for q in cand[i + 1 :]:
            if L.adjacent(p, q):
                continue
            rest = frozenset(L.vertices) - {p, q}
            if L.neighbors(p) != rest or L.neighbors(q) != rest:
                continue
            # Both links are then the unique cycle through ``rest``.
            if all(len(L.neighbors(v) & rest) == 2 for v in rest) and set(
                L.link_vertices(p)
            ) == rest:
                pairs.append((p, q))
    return pairs


def recognize_suspension(L: LabeledTriangulation) -> Suspension | None:
    pairs = suspension_pole_pairs(L)
    if not pairs:
        return None
    p, q = pairs[0]
    return Suspension((p, q), link(L, p))


def cap_name(taken: Iterable[str]) -> str:
    taken = set(taken)
    if "cap" not in taken:
        return "cap"
    k = 1
    while f"cap_{k}" in taken:
        k += 1
    return f"cap_{k}"


def cap_disk(
    L: LabeledTriangulation, interior: Iterable[int], cycle: Sequence[int]
) -> tuple[LabeledTriangulation, tuple[int | None, ...], int]:
    """Cut out the disk bounded by ``cycle`` containing ``interior`` and cone
    off its boundary with a new vertex whose edges are labeled 2.

    Returns ``(child, vertex_map, cap)`` where ``vertex_map[i]`` is the parent
    index of child vertex ``i`` (``None`` for the cap).
    """
    interior = frozenset(interior)
    keep = sorted(interior | set(cycle))
    index = {v: i for i, v in enumerate(keep)}
    cap = len(keep)
    tris = [
        tuple(index[x] for x in t)
        for t in L.triangles
        if all(x in index for x in t) and any(x in interior for x in t)
    ]
    k = len(cycle)
    for i in range(k):
        tris.append((index[cycle[i]], index[cycle[(i + 1) % k]], cap))
    labels = {}
    for t in tris:
        for a, b in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2])):
            e = edge_key(a, b)
            if cap in e:
                labels[e] = 2
            else:
                labels[e] = L.label(keep[e[0]], keep[e[1]])
    names = [L.names[v] for v in keep]
    names.append(cap_name(names))
    child = LabeledTriangulation(names, tris, labels)
    return child, tuple(keep) + (None,), cap


class LabeledCellComplex(_LabeledGraph):
    """A 2-sphere built from labeled triangle and square cells.

    ``cells`` are cyclically ordered vertex tuples; ``provenance[i]`` tags
    ``cells[i]``. ``origin`` optionally maps vertices back to the
    triangulation the complex was derived from.
    """

    def __init__(
        self,
        names: Sequence[str],
        cells: Iterable[Sequence[int]],
        labels: Mapping,
        provenance: Iterable[str],
        origin: Sequence[int] | None = None,
    ):
        self.names = tuple(names)
        n = len(self.names)
        pairs = []
        for cell, prov in zip(list(cells), list(provenance), strict=True):
            cell = tuple(cell)
            if prov not in PROVENANCES:
                raise InvariantViolation(f"unknown provenance {prov!r}")
            if len(cell) not in (3, 4) or len(set(cell)) != len(cell):
                raise InvariantViolation(f"cell {list(cell)} is not a triangle or square")
            if (len(cell) == 4) != (prov == ADDED_SQUARE):
                raise InvariantViolation(f"cell {list(cell)} has provenance {prov}")
            for v in cell:
                if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < n:
                    raise InvariantViolation(f"cell {list(cell)} uses unknown vertex {v!r}")
            pairs.append((canonical_cycle(cell), prov))
        pairs.sort()
        self.cells = tuple(c for c, _ in pairs)
        self.provenance = tuple(p for _, p in pairs)
        if len(set(map(frozenset, self.cells))) != len(self.cells):
            raise InvariantViolation("two cells share the same vertex set")
        if n < 4:
            raise InvariantViolation(f"{n} vertices cannot cellulate the 2-sphere")
        edges, self._nbrs, _ = _check_sphere(n, self.cells, InvariantViolation)
        self._edges = tuple(edges)
        self._labels = _check_labels(self._edges, labels, InvariantViolation)
        self.origin = tuple(origin) if origin is not None else tuple(range(n))
        self._check_strict()
        self._check_cell_labels()

    def _check_strict(self) -> None:
        by_vertex: dict[int, list[int]] = {}
        for i, c in enumerate(self.cells):
            for v in c:
                by_vertex.setdefault(v, []).append(i)
            if len(c) == 4:
                for a, b in ((c[0], c[2]), (c[1], c[3])):
                    if self.adjacent(a, b):
                        raise InvariantViolation(
                            f"diagonal {sorted((a, b))} of square {list(c)} is an edge"
                        )
        cell_edges = [_cell_edges(c) for c in self.cells]
        checked = set()
        for v, idx in by_vertex.items():
            for i in idx:
                for j in idx:
                    if j <= i or (i, j) in checked:
                        continue
                    checked.add((i, j))
                    common = set(self.cells[i]) & set(self.cells[j])
                    if len(common) == 1:
                        continue
                    e = tuple(sorted(common))
                    if len(common) == 2 and e in cell_edges[i] and e in cell_edges[j]:
                        continue
                    raise InvariantViolation(
                        f"cells {list(self.cells[i])} and {list(self.cells[j])} "
                        f"meet in {sorted(common)}, which is not a common cell"
                    )

    def _check_cell_labels(self) -> None:
        for c, prov in zip(self.cells, self.provenance):
            labs = [self.label(a, b) for a, b in _cell_edges_ordered(c)]
            if prov == ADDED_SQUARE and any(m != 2 for m in labs):
                raise InvariantViolation(f"square {list(c)} has labels {labs}, expected all 2")
            if prov == ADDED_TRIANGLE and angle_sum(labs) != 1:
                raise InvariantViolation(
                    f"added triangle {list(c)} has labels {labs} with angle sum != pi"
                )

    @classmethod
    def from_triangulation(cls, L: LabeledTriangulation) -> LabeledCellComplex:
        return cls(L.names, L.triangles, L.labels, [ORIGINAL_TRIANGLE] * len(L.triangles))

    @classmethod
    def from_star_replacement(cls, L: LabeledTriangulation, T: Iterable[int]) -> LabeledCellComplex:
        """Delete each vertex of ``T`` and fill its link cycle with one cell."""
        T = sorted(set(T))
        removed = set(T)
        keep = [v for v in L.vertices if v not in removed]
        index = {v: i for i, v in enumerate(keep)}
        cells, prov = [], []
        for t in L.triangles:
            if not removed.intersection(t):
                cells.append(tuple(index[x] for x in t))
                prov.append(ORIGINAL_TRIANGLE)
        for v in T:
            cyc = L.link_vertices(v)
            if any(u in removed for u in cyc):
                raise InvariantViolation(f"vertex {v} is adjacent to another removed vertex")
            if len(cyc) not in (3, 4):
                raise InvariantViolation(f"vertex {v} has valence {len(cyc)}")
            cells.append(tuple(index[x] for x in cyc))
            prov.append(ADDED_TRIANGLE if len(cyc) == 3 else ADDED_SQUARE)
        labels = {}
        for (a, b), m in L.labels.items():
            if a in index and b in index:
                labels[(index[a], index[b])] = m
        names = [L.names[v] for v in keep]
        return cls(names, cells, labels, prov, origin=keep)

    def cells_with_provenance(self):
        return list(zip(self.cells, self.provenance))

    def to_document(self) -> dict:
        return {
            "vertices": list(self.names),
            "cells": [list(c) for c in self.cells],
            "provenance": list(self.provenance),
            "labels": [[u, w, m] for (u, w), m in sorted(self._labels.items())],
        }

    def __repr__(self) -> str:
        return (
            f"LabeledCellComplex(V={self.n}, E={len(self._edges)}, F={len(self.cells)}, "
            f"squares={self.provenance.count(ADDED_SQUARE)})"
        )


def _cell_edges_ordered(cell: Sequence[int]) -> list[tuple[int, int]]:
    k = len(cell)
    return [(cell[i], cell[(i + 1) % k]) for i in range(k)]


def _cell_edges(cell: Sequence[int]) -> set[tuple[int, int]]:
    return {edge_key(a, b) for a, b in _cell_edges_ordered(cell)}
