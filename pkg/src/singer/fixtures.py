"""Named labeled triangulations used by the tests, the generator and the docs."""

from __future__ import annotations

from typing import Mapping, Sequence

from .complex import LabeledTriangulation, edge_key


def build(
    triangles: Sequence[Sequence[int]],
    labels: Mapping | None = None,
    default: int = 2,
    names: Sequence[str] | None = None,
) -> LabeledTriangulation:
    """Triangulation with every edge labeled ``default`` unless overridden."""
    n = 1 + max(max(t) for t in triangles)
    all_labels = {}
    for a, b, c in triangles:
        for e in (edge_key(a, b), edge_key(b, c), edge_key(a, c)):
            all_labels[e] = default
    for (u, w), m in (labels or {}).items():
        e = edge_key(u, w)
        if e not in all_labels:
            raise ValueError(f"{list(e)} is not an edge")
        all_labels[e] = m
    if names is None:
        names = [f"v{i}" for i in range(n)]
    return LabeledTriangulation(names, triangles, all_labels)


def boundary_simplex(labels: Mapping | None = None, default: int = 2) -> LabeledTriangulation:
    return build([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)], labels, default)


def affine_simplex() -> LabeledTriangulation:
    """The 4-cycle 0-1-2-3 labeled 3 with diagonals 2 (affine type A~3)."""
    return boundary_simplex({(0, 1): 3, (1, 2): 3, (2, 3): 3, (0, 3): 3})


def linear_diagram_simplex(p: int = 5, q: int = 3, r: int = 4) -> LabeledTriangulation:
    """Linear diagram 0-1-2-3 with labels p, q, r and all other pairs 2."""
    return boundary_simplex({(0, 1): p, (1, 2): q, (2, 3): r})


def suspension_triangles(n: int) -> list[tuple[int, int, int]]:
    """Suspension of the n-gon 0..n-1 with poles n (top) and n+1 (bottom)."""
    tris = []
    for i in range(n):
        j = (i + 1) % n
        tris.append((i, j, n))
        tris.append((i, j, n + 1))
    return tris


def suspension(
    n: int,
    equator_labels: Sequence[int] | None = None,
    pole_labels: Mapping | None = None,
    default: int = 2,
) -> LabeledTriangulation:
    """``equator_labels[i]`` labels the edge i-(i+1); ``pole_labels`` maps
    ``(pole, i)`` pairs to labels."""
    labels = dict(pole_labels or {})
    if equator_labels is not None:
        for i, m in enumerate(equator_labels):
            labels[(i, (i + 1) % n)] = m
    return build(suspension_triangles(n), labels, default)


def octahedron(default: int = 2) -> LabeledTriangulation:
    return suspension(4, default=default)


def icosahedron_triangles() -> list[tuple[int, int, int]]:
    upper = [1 + i for i in range(5)]
    lower = [6 + i for i in range(5)]
    tris = []
    for i in range(5):
        j = (i + 1) % 5
        tris.append((0, upper[i], upper[j]))
        tris.append((11, lower[i], lower[j]))
        tris.append((upper[i], upper[j], lower[i]))
        tris.append((upper[j], lower[i], lower[j]))
    return tris


def icosahedron(labels: Mapping | None = None, default: int = 2) -> LabeledTriangulation:
    return build(icosahedron_triangles(), labels, default)


def prism_nerve(equator: Sequence[int] = (4, 4, 4)) -> LabeledTriangulation:
    """Suspension of a 3-gon whose dual is a triangular prism with right
    angles along base and top; the equator labels make it metric flag."""
    return suspension(3, equator_labels=equator)


# Vertex layout of the 6-gon suspension obtained by coning off the boundary
# l-t-r-b of the two-overlapping-stars configuration with a new vertex x.
L6_NAMES = ("l", "s1", "v", "s2", "r", "x", "t", "b")


def l6_triangulation(labels: Mapping | None = None, default: int = 3) -> LabeledTriangulation:
    """Hexagon l,s1,v,s2,r,x with poles t,b; the link edges of s1 and s2
    (l-t, t-v, v-b, b-l, t-r, r-b) carry 2, everything else ``default``."""
    idx = {name: i for i, name in enumerate(L6_NAMES)}
    hexagon = ["l", "s1", "v", "s2", "r", "x"]
    tris = []
    for i in range(6):
        a, c = idx[hexagon[i]], idx[hexagon[(i + 1) % 6]]
        tris.append((a, c, idx["t"]))
        tris.append((a, c, idx["b"]))
    forced = {}
    for a, c in (("l", "t"), ("t", "v"), ("v", "b"), ("b", "l"), ("t", "r"), ("r", "b")):
        forced[(idx[a], idx[c])] = 2
    forced.update(labels or {})
    return build(tris, forced, default, names=L6_NAMES)


def planted_three_circuit() -> LabeledTriangulation:
    """Two five-triangle disks glued along a non-face 3-cycle a,b,c labeled
    (3,3,3): an empty Euclidean 3-circuit."""
    a, b, c = 0, 1, 2
    tris = []
    labels = {(a, b): 3, (b, c): 3, (a, c): 3}
    for x, y in ((3, 4), (5, 6)):
        tris += [(a, b, x), (b, x, y), (b, c, y), (c, a, y), (a, x, y)]
        labels.update(
            {(a, x): 2, (b, x): 2, (x, y): 2, (b, y): 4, (a, y): 4, (c, y): 2}
        )
    return build(tris, labels)


def euclidean_poles_suspension(equator: Sequence[int] = (3, 3, 3)) -> LabeledTriangulation:
    """Suspension of a 3-gon whose equator is a Euclidean triangle, so both
    poles are 3-Euclidean."""
    return suspension(3, equator_labels=equator)


def cusped_simplex() -> LabeledTriangulation:
    """The boundary of a 3-simplex 0,1,2,3 with the faces 0,1,2 and 0,1,3
    coned off by 3-Euclidean vertices 4 and 5.  Removing both stars leaves a
    simplex whose Gram form is indefinite."""
    tris = [(0, 2, 3), (1, 2, 3)]
    for w, (a, b, c) in ((4, (0, 1, 2)), (5, (0, 1, 3))):
        tris += [(a, b, w), (b, c, w), (a, c, w)]
    return build(tris, {(0, 1): 3, (0, 2): 3, (1, 2): 3, (0, 3): 3, (1, 3): 3}, default=2)


def subdivided_bipyramid() -> LabeledTriangulation:
    """Suspension of the 7-gon 0..6 (poles 7, 8) whose equator edge 0-1 is
    subdivided by a 4-Euclidean vertex 9; 16 triangles.  Equator edges carry
    2, pole edges 3, and the star of 9 is right-angled."""
    tris = [t for t in suspension_triangles(7) if not {0, 1} <= set(t)]
    tris += [(0, 7, 9), (1, 7, 9), (0, 8, 9), (1, 8, 9)]
    labels = {}
    for i in range(7):
        for pole in (7, 8):
            labels[(i, pole)] = 3
    for i in range(1, 7):
        labels[(i, (i + 1) % 7)] = 2
    for a, b in ((0, 7), (7, 1), (1, 8), (8, 0)):
        labels[(a, b)] = 2
    return build(tris, labels, default=2)
