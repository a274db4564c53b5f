"""Deterministic random generator of metric flag labeled triangulations.

Pieces start as flag triangulations (every edge has exactly two common
neighbours, so every 3-clique is a face and there are no 4-cliques), grown by
vertex splits and mixed by edge flips.  Empty Euclidean circuits are planted
by adding a Euclidean vertex to the main piece and to a fresh piece and then
gluing the two along the links of those vertices.  Labels come from the
palette; faces that are not spherical are repaired by lowering their largest
free label, which terminates because labels only decrease.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .complex import LabeledTriangulation, angle_sum, edge_key
from .coxeter import metric_flag_check
from .errors import GenerationFailed, TopologyError
from .fixtures import icosahedron_triangles, suspension_triangles
from .reduction import FOUR, THREE, find_empty_euclidean_circuits, merge_along_euclidean_vertices

MAX_ATTEMPTS = 50
MIN_PIECE = 6
EUCLIDEAN_TRIPLES = ((3, 3, 3), (2, 4, 4), (2, 3, 6))


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    vertices: int
    palette: tuple[int, ...] = (2, 3, 4, 5)
    plant3: int = 0
    plant4: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not self.palette or any(int(m) != m or m < 2 for m in self.palette):
            raise ValueError("palette labels must be integers >= 2")
        if self.plant3 < 0 or self.plant4 < 0:
            raise ValueError("plant counts must be nonnegative")


class _Retry(Exception):
    pass


# -- flag pieces -----------------------------------------------------------------


class _Piece:
    """Mutable triangulated sphere on vertices ``0..n-1``."""

    def __init__(self, triangles):
        self.tris = {frozenset(t) for t in triangles}
        self.n = 1 + max(max(t) for t in self.tris)

    def nbrs(self) -> list[set]:
        out = [set() for _ in range(self.n)]
        for t in self.tris:
            for a in t:
                out[a].update(t - {a})
        return out

    def link_cycle(self, v) -> list[int]:
        adj: dict[int, list[int]] = {}
        for t in self.tris:
            if v in t:
                a, b = sorted(t - {v})
                adj.setdefault(a, []).append(b)
                adj.setdefault(b, []).append(a)
        cyc = [min(adj)]
        cyc.append(min(adj[cyc[0]]))
        while True:
            a, b = adj[cyc[-1]]
            step = b if a == cyc[-2] else a
            if step == cyc[0]:
                return cyc
            cyc.append(step)

    def is_flag(self) -> bool:
        nb = self.nbrs()
        return all(len(nb[a] & nb[b]) == 2 for a in range(self.n) for b in nb[a] if a < b)

    def split_vertex(self, rng: random.Random) -> bool:
        v = rng.randrange(self.n)
        cyc = self.link_cycle(v)
        d = len(cyc)
        if d < 4:
            return False
        i = rng.randrange(d)
        span = rng.randrange(2, d - 1)
        j = (i + span) % d
        w = self.n
        old = set(self.tris)
        new = set(old)
        # v keeps the fan from cyc[i] to cyc[j]; w takes the rest.
        for k in range(d):
            if (k - i) % d >= span:
                t = frozenset((v, cyc[k], cyc[(k + 1) % d]))
                new.remove(t)
                new.add(frozenset((w, cyc[k], cyc[(k + 1) % d])))
        new.add(frozenset((v, w, cyc[i])))
        new.add(frozenset((v, w, cyc[j])))
        self.tris, self.n = new, self.n + 1
        if not self.is_flag():
            self.tris, self.n = old, self.n - 1
            return False
        return True

    def flip_edge(self, rng: random.Random) -> bool:
        nb = self.nbrs()
        edges = sorted((a, b) for a in range(self.n) for b in nb[a] if a < b)
        a, b = edges[rng.randrange(len(edges))]
        if len(nb[a]) < 5 or len(nb[b]) < 5:
            return False
        c, d = sorted(nb[a] & nb[b])
        if d in nb[c]:
            return False
        old = set(self.tris)
        self.tris -= {frozenset((a, b, c)), frozenset((a, b, d))}
        self.tris |= {frozenset((a, c, d)), frozenset((b, c, d))}
        if not self.is_flag():
            self.tris = old
            return False
        return True


def _flag_piece(n: int, rng: random.Random) -> _Piece:
    if n >= 12 and rng.random() < 0.5:
        piece = _Piece(icosahedron_triangles())
    else:
        piece = _Piece(suspension_triangles(rng.randint(4, n - 2)))
    tries = 0
    while piece.n < n:
        tries += 1
        if tries > 50 * n:
            raise _Retry("vertex splits keep breaking flagness")
        piece.split_vertex(rng)
    for _ in range(2 * n):
        piece.flip_edge(rng)
    return piece


# -- labeled working complexes -----------------------------------------------------


class _Work:
    """Named triangulation under construction; ``frozen`` holds name pairs
    whose labels the repair step must not touch."""

    def __init__(self, names, tris, labels, frozen=()):
        self.names = list(names)
        self.tris = [tuple(sorted(t)) for t in tris]
        self.labels = dict(labels)
        self.frozen = set(frozen)

    @classmethod
    def from_piece(cls, piece: _Piece, prefix: str, rng, palette) -> _Work:
        names = [f"{prefix}{i}" for i in range(piece.n)]
        tris = sorted(tuple(sorted(t)) for t in piece.tris)
        edges = sorted({edge_key(t[x], t[y]) for t in tris for x, y in ((0, 1), (1, 2), (0, 2))})
        labels = {e: rng.choice(palette) for e in edges}
        return cls(names, tris, labels)

    @classmethod
    def from_triangulation(cls, L: LabeledTriangulation, frozen) -> _Work:
        return cls(L.names, L.triangles, L.labels, frozen)

    def build(self) -> LabeledTriangulation:
        return LabeledTriangulation(self.names, self.tris, self.labels)

    def key(self, a, b) -> frozenset:
        return frozenset((self.names[a], self.names[b]))

    def is_frozen(self, a, b) -> bool:
        return self.key(a, b) in self.frozen

    def freeze(self, a, b, m) -> None:
        self.labels[edge_key(a, b)] = m
        self.frozen.add(self.key(a, b))

    def nbrs(self) -> list[set]:
        out = [set() for _ in self.names]
        for t in self.tris:
            for a in t:
                out[a].update(x for x in t if x != a)
        return out

    def plant_three(self, triple, rng, name) -> int | None:
        faces = [t for t in self.tris if not any(self.is_frozen(*e) for e in _tri_edges(t))]
        if not faces:
            return None
        a, b, c = faces[rng.randrange(len(faces))]
        w = len(self.names)
        self.names.append(name)
        self.tris.remove((a, b, c))
        self.tris += [(a, b, w), (b, c, w), (a, c, w)]
        m = list(triple)
        rng.shuffle(m)
        for (x, y), lab in zip(((a, b), (b, c), (a, c)), m):
            self.freeze(x, y, lab)
        for x in (a, b, c):
            self.labels[(x, w)] = 2
        return w

    def plant_four(self, rng, name) -> int | None:
        nb = self.nbrs()
        apex: dict[tuple[int, int], list[int]] = {}
        for t in self.tris:
            for x in t:
                apex.setdefault(edge_key(*[y for y in t if y != x]), []).append(x)
        cands = []
        for a, b in sorted(self.labels):
            c, d = sorted(apex[(a, b)])
            if d in nb[c]:
                continue
            if any(self.is_frozen(*e) for e in ((a, b), (a, c), (b, c), (a, d), (b, d))):
                continue
            cands.append((a, b, c, d))
        if not cands:
            return None
        a, b, c, d = cands[rng.randrange(len(cands))]
        w = len(self.names)
        self.names.append(name)
        self.tris.remove(tuple(sorted((a, b, c))))
        self.tris.remove(tuple(sorted((a, b, d))))
        self.tris += [tuple(sorted(t)) for t in ((a, w, c), (w, b, c), (a, w, d), (w, b, d))]
        del self.labels[(a, b)]
        for x, y in ((a, c), (c, b), (b, d), (d, a)):
            self.freeze(x, y, 2)
        for x in (a, b, c, d):
            self.labels[(x, w)] = 2
        return w

    def repair(self, palette) -> None:
        lower = sorted(set(palette) | {2})
        changed = True
        while changed:
            changed = False
            for t in sorted(self.tris):
                while angle_sum(self.labels[e] for e in _tri_edges(t)) <= 1:
                    free = [e for e in _tri_edges(t) if not self.is_frozen(*e)]
                    free = [e for e in free if self.labels[e] > 2]
                    if not free:
                        raise _Retry(f"face {t} cannot be made spherical")
                    e = max(free, key=lambda e: (self.labels[e], [-x for x in e]))
                    m = self.labels[e]
                    self.labels[e] = max([x for x in lower if x < m], default=2)
                    changed = True


def _tri_edges(t):
    a, b, c = t
    return [edge_key(a, b), edge_key(b, c), edge_key(a, c)]


# -- sizing and the top-level driver ---------------------------------------------------


def _plan_sizes(cfg: GeneratorConfig, rng) -> tuple[int, list[tuple[str, int]]]:
    kinds = [THREE] * cfg.plant3 + [FOUR] * cfg.plant4
    circuit = {THREE: 3, FOUR: 4}
    slack = cfg.vertices - MIN_PIECE - sum(MIN_PIECE - circuit[k] for k in kinds)
    if slack < 0:
        raise GenerationFailed(
            f"seed {cfg.seed}: {cfg.vertices} vertices cannot host "
            f"{cfg.plant3} planted 3-circuits and {cfg.plant4} planted 4-circuits"
        )
    parts = [0] * (len(kinds) + 1)
    for _ in range(slack):
        parts[rng.randrange(len(parts))] += 1
    return MIN_PIECE + parts[0], [(k, MIN_PIECE + x) for k, x in zip(kinds, parts[1:])]


def _five_vertex(cfg: GeneratorConfig, rng) -> LabeledTriangulation:
    triples = sorted(
        {tuple(sorted((p, q, r))) for p in cfg.palette for q in cfg.palette for r in cfg.palette}
    )
    triples = [t for t in triples if angle_sum(t) <= 1]
    if not triples:
        raise GenerationFailed(f"seed {cfg.seed}: palette has no non-spherical triple")
    work = _Work([f"v{i}" for i in range(5)], suspension_triangles(3), {})
    for a, b in sorted({e for t in work.tris for e in _tri_edges(t)}):
        work.labels[(a, b)] = rng.choice(cfg.palette)
    for (a, b), m in zip(((0, 1), (1, 2), (0, 2)), rng.choice(triples)):
        work.freeze(a, b, m)
    work.repair(cfg.palette)
    return work.build()


def _attempt(cfg: GeneratorConfig, rng: random.Random) -> LabeledTriangulation:
    if cfg.vertices == 5:
        return _five_vertex(cfg, rng)
    n0, plan = _plan_sizes(cfg, rng)
    triples = [t for t in EUCLIDEAN_TRIPLES if set(t) <= set(cfg.palette) | {2}]
    if cfg.plant3 and not triples:
        raise GenerationFailed(f"seed {cfg.seed}: palette has no Euclidean triple")
    main = _Work.from_piece(_flag_piece(n0, rng), "p0_", rng, cfg.palette)
    for j, (kind, size) in enumerate(plan, start=1):
        piece = _Work.from_piece(_flag_piece(size, rng), f"p{j}_", rng, cfg.palette)
        if kind == THREE:
            triple = triples[rng.randrange(len(triples))]
            s1 = main.plant_three(triple, rng, f"w{j}a")
            s2 = piece.plant_three(triple, rng, f"w{j}b")
        else:
            s1 = main.plant_four(rng, f"w{j}a")
            s2 = piece.plant_four(rng, f"w{j}b")
        if s1 is None or s2 is None:
            raise _Retry("no room to plant a Euclidean vertex")
        try:
            merged = merge_along_euclidean_vertices(main.build(), s1, piece.build(), s2)
        except TopologyError as exc:
            raise _Retry(str(exc)) from None
        main = _Work.from_triangulation(merged, main.frozen | piece.frozen)
    main.repair(cfg.palette)
    L = main.build()
    if not metric_flag_check(L).passed:
        raise _Retry("result is not metric flag")
    found = find_empty_euclidean_circuits(L)
    if sum(c.kind == THREE for c in found) < cfg.plant3 or sum(
        c.kind == FOUR for c in found
    ) < cfg.plant4:
        raise _Retry("planted circuits did not survive")
    return LabeledTriangulation([f"v{i}" for i in range(L.n)], L.triangles, L.labels)


def generate(cfg: GeneratorConfig) -> LabeledTriangulation:
    """Generate a metric flag labeled triangulation with ``cfg.vertices``
    vertices; identical configurations give identical outputs."""
    if cfg.vertices < 5:
        raise GenerationFailed(f"seed {cfg.seed}: at least 5 vertices are required")
    if cfg.vertices == 5 and (cfg.plant3 or cfg.plant4):
        raise GenerationFailed(f"seed {cfg.seed}: 5 vertices leave no room for planted circuits")
    rng = random.Random(cfg.seed)
    last = None
    for _ in range(MAX_ATTEMPTS):
        try:
            L = _attempt(cfg, rng)
        except _Retry as exc:
            last = exc
            continue
        if L.n != cfg.vertices:
            raise GenerationFailed(f"seed {cfg.seed}: produced {L.n} vertices")
        return L
    raise GenerationFailed(f"seed {cfg.seed}: gave up after {MAX_ATTEMPTS} attempts ({last})")


def corpus_config(seed: int) -> GeneratorConfig:
    """The configuration used for seed ``seed`` of the acceptance sweep:
    8 to 60 vertices, with planted circuits on three seeds out of four."""
    n = 8 + (seed * 37) % 53
    plant3 = 1 if seed % 4 in (0, 2) and n >= 9 else 0
    plant4 = 1 if seed % 4 in (1, 2) and n >= 8 + 3 * plant3 else 0
    return GeneratorConfig(seed=seed, vertices=n, plant3=plant3, plant4=plant4)


__all__ = ["GeneratorConfig", "corpus_config", "generate"]
