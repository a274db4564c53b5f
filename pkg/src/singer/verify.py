"""Independent certificate verification.

The verifier re-derives every hypothesis a certificate node relies on from
the triangulation itself.  It deliberately uses only the complex and Coxeter
primitives (links, stars, fullness, cell-complex construction, Gram classes,
metric flagness) and its own enumerations; it never calls the engine's
reduction, Andreev or certification code, so a bug there cannot vouch for
itself.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .complex import (
    ADDED_SQUARE,
    LabeledCellComplex,
    LabeledTriangulation,
    angle_sum,
    cap_disk,
    is_full,
    link,
    star,
    suspension_pole_pairs,
)
from .coxeter import coxeter_matrix, gram_class, is_spherical, metric_flag_check

FORMAT = "singer-certificate/1"


@dataclass(frozen=True)
class VerificationReport:
    accepted: bool
    failures: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "accepted": self.accepted,
            "failures": [{"path": p, "reason": r} for p, r in self.failures],
        }


class _Reject(Exception):
    pass


def _require(cond, reason: str) -> None:
    if not cond:
        raise _Reject(reason)


# -- independent combinatorics ------------------------------------------------


def _vertex_class(L, v) -> str:
    cyc = link(L, v)
    if len(cyc) == 3 and angle_sum(cyc.labels) == 1:
        return "Euclid3"
    if len(cyc) == 4 and set(cyc.labels) == {2}:
        return "Euclid4"
    return "NotEuclidean"


def _triangles_3(X) -> set[frozenset]:
    out = set()
    for a, b in X.edges:
        for c in X.neighbors(a) & X.neighbors(b):
            out.add(frozenset((a, b, c)))
    return out


def _induced_4_cycles(X) -> dict[frozenset, tuple[int, int, int, int]]:
    """Chordless 4-cycles found from paths ``b - a - d`` closed through a
    fourth vertex ``c`` adjacent to neither ``a`` nor the chords."""
    out = {}
    for a in X.vertices:
        nb = sorted(X.neighbors(a))
        for b, d in combinations(nb, 2):
            if X.adjacent(b, d):
                continue
            for c in X.neighbors(b) & X.neighbors(d):
                if c != a and not X.adjacent(a, c):
                    out.setdefault(frozenset((a, b, c, d)), (a, b, c, d))
    return out


def _components(L, removed) -> list[tuple[int, ...]]:
    removed = set(removed)
    seen = set(removed)
    comps = []
    for s in L.vertices:
        if s in seen:
            continue
        seen.add(s)
        comp, queue = [s], deque([s])
        while queue:
            u = queue.popleft()
            for w in L.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


def _empty_circuits(L) -> list[tuple[str, tuple[int, ...]]]:
    found = []
    for t in _triangles_3(L):
        t = tuple(sorted(t))
        labs = [L.label(t[0], t[1]), L.label(t[1], t[2]), L.label(t[0], t[2])]
        if t in L.triangles or angle_sum(labs) != 1:
            continue
        comps = _components(L, t)
        if len(comps) == 2 and min(map(len, comps)) >= 2:
            found.append(("Three", t))
    for vs, cyc in _induced_4_cycles(L).items():
        if any(L.label(cyc[i], cyc[(i + 1) % 4]) != 2 for i in range(4)):
            continue
        comps = _components(L, vs)
        if len(comps) == 2 and min(map(len, comps)) >= 2:
            found.append(("Four", tuple(sorted(vs))))
    return sorted(found)


def _is_simplex(L) -> bool:
    return L.n == 4 and len(L.edges) == 6


def _small_suspension(L):
    for p, q in suspension_pole_pairs(L):
        if L.n - 2 in (3, 4, 5):
            return (p, q)
    return None


def _l6_shape(L) -> bool:
    for p, q in suspension_pole_pairs(L):
        if L.n - 2 != 6:
            continue
        eq = link(L, p).vertices
        for i in range(6):
            if _vertex_class(L, eq[i]) == "Euclid4" == _vertex_class(L, eq[(i + 2) % 6]):
                return True
    return False


def _full_star_and_link(L, v) -> None:
    _require(is_full(L, link(L, v)), f"link of {v} is not full")
    _require(is_full(L, star(L, v)), f"star of {v} is not full")


def _same_cycle(a, b) -> bool:
    a, b = list(a), list(b)
    if len(a) != len(b) or set(a) != set(b):
        return False
    k = len(a)
    for seq in (b, b[::-1]):
        i = seq.index(a[0])
        if all(seq[(i + j) % k] == a[j] for j in range(k)):
            return True
    return False


# -- Andreev transcripts -------------------------------------------------------


def _keys(inst, *names) -> None:
    _require(isinstance(inst, dict) and set(inst) == set(names), f"instance keys {inst!r}")


def _check_transcript(X: LabeledCellComplex, doc) -> dict[str, bool]:
    """Re-evaluate every recorded instance against ``X`` and check that each
    condition lists exactly the instances an independent enumeration finds.
    Returns the recomputed pass/fail of each condition."""
    _require(isinstance(doc, dict) and isinstance(doc.get("conditions"), dict), "bad transcript")
    _require(set(doc) == {"passed", "conditions"}, "transcript keys")
    conds = doc["conditions"]
    _require(set(conds) == {"i", "ii", "iii", "iv", "v"}, "transcript must list (i)-(v)")
    cells = {frozenset(c): p for c, p in zip(X.cells, X.provenance)}
    squares = [c for c, p in zip(X.cells, X.provenance) if p == ADDED_SQUARE]
    results = {}

    def instances(name):
        rec = conds[name]
        _require(isinstance(rec, dict) and isinstance(rec.get("instances"), list), f"({name})")
        return rec["instances"]

    # (i)
    got = {}
    for inst in instances("i"):
        _keys(inst, "cell", "provenance", "labels", "ok")
        c = tuple(inst["cell"])
        _require(frozenset(c) in cells, f"(i) instance {list(c)} is not a cell")
        _require(any(_same_cycle(c, cell) for cell in X.cells), f"(i) cell {list(c)} is misordered")
        labs = [X.label(c[j], c[(j + 1) % len(c)]) for j in range(len(c))]
        ok = angle_sum(labs) >= 1 if len(c) == 3 else set(labs) == {2}
        got[frozenset(c)] = ok
        _require(inst["provenance"] == cells[frozenset(c)], f"(i) cell {list(c)} provenance")
        _require(inst["labels"] == labs, f"(i) cell {list(c)} labels")
        _require(inst["ok"] is ok, f"(i) instance {list(c)} misjudged")
    _require(set(got) == set(cells), "(i) does not cover every cell")
    results["i"] = all(got.values())

    # (ii)
    expected = {t for t in _triangles_3(X) if t not in cells}
    got = {}
    for inst in instances("ii"):
        _keys(inst, "clique", "labels", "ok")
        t = frozenset(inst["clique"])
        s = sorted(t)
        _require(inst["clique"] == s, f"(ii) clique {inst['clique']} is not sorted")
        labs = [X.label(s[0], s[1]), X.label(s[1], s[2]), X.label(s[0], s[2])]
        ok = angle_sum(labs) < 1
        _require(inst["labels"] == labs, f"(ii) clique {s} labels")
        _require(inst["ok"] is ok, f"(ii) instance {s} misjudged")
        got[t] = ok
    _require(set(got) == expected, "(ii) does not cover every non-cell 3-clique")
    results["ii"] = all(got.values())

    # (iii)
    expected = {
        vs
        for vs, cyc in _induced_4_cycles(X).items()
        if all(X.label(cyc[i], cyc[(i + 1) % 4]) == 2 for i in range(4))
    }
    got = {}
    for inst in instances("iii"):
        _keys(inst, "circuit", "bounds_square", "ok")
        vs = frozenset(inst["circuit"])
        _require(vs in expected and _same_cycle(inst["circuit"], _induced_4_cycles(X)[vs]),
                 f"(iii) {inst['circuit']} is not a right-angled 4-circuit")
        ok = cells.get(vs) == ADDED_SQUARE
        _require(inst["bounds_square"] is ok, f"(iii) instance {sorted(vs)} bounds_square")
        _require(inst["ok"] is ok, f"(iii) instance {sorted(vs)} misjudged")
        got[vs] = ok
    _require(set(got) == expected, "(iii) does not cover every right-angled 4-circuit")
    results["iii"] = all(got.values())

    # (iv)
    low = sorted(v for v in X.vertices if X.valence(v) == 3)
    prism = (
        X.n == 5
        and len(X.cells) == 6
        and all(len(c) == 3 for c in X.cells)
        and len(low) == 2
        and not X.adjacent(*low)
    )
    recs = instances("iv")
    _require(len(recs) == (1 if prism else 0), "(iv) prism detection disagrees")
    if prism:
        _keys(recs[0], "poles", "suspension_edges", "ok")
        edges = [[p, w, X.label(p, w)] for p in low for w in sorted(X.neighbors(p))]
        ok = any(m != 2 for _, _, m in edges)
        _require(recs[0]["poles"] == low, "(iv) poles are wrong")
        _require(recs[0]["suspension_edges"] == edges, "(iv) suspension edges are wrong")
        _require(recs[0]["ok"] is ok, "(iv) misjudged")
        results["iv"] = ok
    else:
        results["iv"] = True

    # (v)
    expected = set()
    for sq in squares:
        for a, c in ((sq[0], sq[2]), (sq[1], sq[3])):
            corners = set()
            for other in squares:
                if a in other and c in other:
                    corners.update(other)
            for g in (X.neighbors(a) & X.neighbors(c)) - corners:
                expected.add((frozenset(sq), frozenset((a, c)), g))
    got = {}
    for inst in instances("v"):
        _keys(inst, "square", "pair", "g", "labels", "ok")
        key = (frozenset(inst["square"]), frozenset(inst["pair"]), inst["g"])
        _require(key in expected, f"(v) instance {inst} is not a square configuration")
        _require(any(_same_cycle(inst["square"], sq) for sq in squares), "(v) square misordered")
        a, c = sorted(key[1])
        _require(inst["pair"] == [a, c], f"(v) pair {inst['pair']} is not sorted")
        labs = [X.label(inst["g"], a), X.label(inst["g"], c)]
        ok = not (labs[0] == 2 and labs[1] == 2)
        _require(inst["labels"] == labs, f"(v) instance {inst} labels")
        _require(inst["ok"] is ok, f"(v) instance {inst} misjudged")
        got[key] = ok
    _require(set(got) == expected, "(v) does not cover every square configuration")
    results["v"] = all(got.values())

    for name, ok in results.items():
        rec = conds[name]
        _require(set(rec) == {"passed", "instances", "failures"}, f"({name}) record keys")
        _require(rec["passed"] is ok, f"({name}) pass flag is wrong")
        failing = [inst for inst in rec["instances"] if not inst["ok"]]
        _require(rec["failures"] == failing, f"({name}) failure list is wrong")
    _require(doc.get("passed") is all(results.values()), "overall pass flag is wrong")
    return results


# -- nodes ---------------------------------------------------------------------

_COMMON = {"kind", "num_vertices"}
_NODE_KEYS = {
    "BaseSimplexEuclidean": _COMMON | {"gram"},
    "BaseSimplexHyperbolic": _COMMON | {"gram", "faces"},
    "SuspensionCase": _COMMON | {"n", "poles", "equator", "andreev", "subcase", "witness"},
    "L6": _COMMON | {"witness"},
    "CircuitSplit": _COMMON | {"circuit", "children"},
    "EuclideanReduction": _COMMON
    | {"euclidean_vertices", "reduced_digest", "reduced_num_vertices", "outcome"},
}
_WITNESS_KEYS = {
    "AndreevDirect": set(),
    "RightAngledSuspension": {"suspension_edges"},
    "FiveGonReduction": {"v", "reduced_digest", "reduced_andreev"},
    "FiveGonFigure4Split": {"v", "reduced_digest", "reduced_andreev", "s"},
    "FiveGonAdjacentEuclidean": {"v", "u", "v_prime"},
}


class _Verifier:
    def __init__(self, root_vertices: int):
        self.max_depth = root_vertices
        self.failures: list[tuple[str, str]] = []

    def node(self, L: LabeledTriangulation, node, path: str, depth: int) -> None:
        try:
            _require(isinstance(node, dict), "node is not an object")
            _require(node.get("num_vertices") == L.n, "num_vertices does not match")
            _require(depth <= self.max_depth, "recursion deeper than the vertex count")
            kind = node.get("kind")
            _require(kind in _NODE_KEYS, f"unknown node kind {kind!r}")
            keys = set(_NODE_KEYS[kind])
            if kind == "EuclideanReduction":
                keys.add("gram" if node.get("outcome") == "SimplexAfterReduction" else "andreev")
            _require(set(node) == keys, f"{kind} node has keys {sorted(node)}")
            handler = getattr(self, f"_{kind}")
            self._precedence(L, kind)
            handler(L, node, path, depth)
        except _Reject as exc:
            self.failures.append((path, str(exc)))
        except Exception as exc:  # malformed certificates must not crash verify
            self.failures.append((path, f"{type(exc).__name__}: {exc}"))

    def _precedence(self, L, kind) -> None:
        if _is_simplex(L):
            expected = ("BaseSimplexEuclidean", "BaseSimplexHyperbolic")
        elif _small_suspension(L):
            expected = ("SuspensionCase",)
        elif _l6_shape(L):
            expected = ("L6",)
        elif _empty_circuits(L):
            expected = ("CircuitSplit",)
        else:
            expected = ("EuclideanReduction",)
        _require(kind in expected, f"node kind {kind} but the complex calls for {expected}")

    def _BaseSimplexEuclidean(self, L, node, path, depth):
        g = gram_class(coxeter_matrix(L, L.vertices))
        _require(str(g) == "PSDCorank(1)" == node.get("gram"), f"Gram class is {g}")

    def _BaseSimplexHyperbolic(self, L, node, path, depth):
        g = gram_class(coxeter_matrix(L, L.vertices))
        _require(str(g) == "Indefinite" == node.get("gram"), f"Gram class is {g}")
        faces = sorted(tuple(f["face"]) for f in node.get("faces", []))
        _require(faces == sorted(L.triangles), "face list does not match")
        for f in node["faces"]:
            _keys(f, "face", "labels")
            a, b, c = f["face"]
            _require(f["labels"] == [L.label(a, b), L.label(b, c), L.label(a, c)], f"face {[a, b, c]} labels")
        for t in L.triangles:
            _require(is_spherical(coxeter_matrix(L, t)), f"face {list(t)} is not spherical")

    def _SuspensionCase(self, L, node, path, depth):
        p, q = node["poles"]
        _require((min(p, q), max(p, q)) in suspension_pole_pairs(L), "poles are not suspension points")
        n = node["n"]
        _require(n == L.n - 2 and n in (3, 4, 5), "wrong polygon size")
        eq = node["equator"]
        _require(_same_cycle(eq, link(L, p).vertices), "equator is not the link of the pole")
        res = _check_transcript(LabeledCellComplex.from_triangulation(L), node["andreev"])
        failed = {c for c, ok in res.items() if not ok}
        sub = node["subcase"]
        w = node["witness"]
        if sub == "EuclideanPolesSplit":
            want = {"euclidean_vertices", "class"} | ({"circuit"} if n == 4 else set())
        else:
            want = _WITNESS_KEYS.get(sub)
        _require(want is not None and set(w) == want, f"bad witness for {sub!r}")
        if sub == "AndreevDirect":
            _require(not failed, "Andreev conditions fail")
            _require(w == {}, "the direct subcase carries no witness")
            return
        _require(failed, "Andreev passes, so the direct subcase applies")
        if sub == "EuclideanPolesSplit":
            a, b = w["euclidean_vertices"]
            cls = "Euclid3" if n == 3 else "Euclid4"
            _require(w["class"] == cls, "wrong Euclidean class")
            for v in (a, b):
                _require(_vertex_class(L, v) == cls, f"vertex {v} is not {cls}")
                _full_star_and_link(L, v)
            _require(
                (min(a, b), max(a, b)) in suspension_pole_pairs(L),
                "the Euclidean pair does not exhibit L as the union of their stars",
            )
            if n == 3:
                _require("ii" in failed, "(ii) does not fail")
            else:
                _require(n == 4 and failed == {"iii"}, "only (iii) may fail")
                _require(
                    set(w["circuit"]) == set(L.vertices) - {a, b}, "pair is not the circuit complement"
                )
            return
        if sub == "RightAngledSuspension":
            _require(n == 3 and failed == {"iv"}, "only (iv) may fail")
            for s in (p, q):
                for e in eq:
                    _require(L.label(s, e) == 2, f"suspension edge {s}-{e} is not labeled 2")
            edges = [[s, e, L.label(s, e)] for s in (p, q) for e in eq]
            _require(w == {"suspension_edges": edges}, "suspension edges are misreported")
            return
        _require(n == 5 and failed == {"iii"}, "only (iii) may fail for a 5-gon")
        e4 = {v for v in eq if _vertex_class(L, v) == "Euclid4"}
        v = w["v"]
        _require(v in e4, f"vertex {v} is not a 4-Euclidean equator vertex")
        if sub in ("FiveGonReduction", "FiveGonFigure4Split"):
            _require(not any(L.adjacent(v, u) for u in e4), f"{v} touches a 4-Euclidean vertex")
            _full_star_and_link(L, v)
            reduced = LabeledCellComplex.from_star_replacement(L, [v])
            _require(reduced.digest() == w["reduced_digest"], "reduced digest mismatch")
            res = _check_transcript(reduced, w["reduced_andreev"])
            if sub == "FiveGonReduction":
                _require(all(res.values()), "[L - v] fails Andreev")
                return
            _require(not res["v"], "[L - v] satisfies (v)")
            s = w["s"]
            _require(s in e4 and s != v and not L.adjacent(s, v), "bad second Euclidean vertex")
            _full_star_and_link(L, s)
            for u in eq:
                if u not in (v, s):
                    _require(
                        L.label(p, u) == 2 == L.label(q, u),
                        f"remainder is not right-angled at {u}",
                    )
            return
        _require(sub == "FiveGonAdjacentEuclidean", f"unknown subcase {sub!r}")
        u, vp = w["u"], w["v_prime"]
        _require(u in e4 and L.adjacent(u, v), "v has no adjacent 4-Euclidean vertex")
        _require(vp in e4, f"{vp} is not 4-Euclidean")
        _full_star_and_link(L, vp)
        for x in eq:
            if x != vp:
                _require(L.label(p, x) == 2 == L.label(q, x), f"pole labels at {x} are not 2")

    def _L6(self, L, node, path, depth):
        w = node["witness"]
        _keys(w, "poles", "hexagon", "s1", "v", "s2", "x", "shared_edges")
        t, b = w["poles"]
        hexagon = w["hexagon"]
        _require(len(hexagon) == 6 and L.n == 8, "not a 6-gon suspension")
        _require((min(t, b), max(t, b)) in suspension_pole_pairs(L), "bad poles")
        _require(_same_cycle(hexagon, link(L, t).vertices), "hexagon is not the equator")
        s1, v, s2, x = hexagon[1], hexagon[2], hexagon[3], hexagon[5]
        _require([w["s1"], w["v"], w["s2"], w["x"]] == [s1, v, s2, x], "witness fields disagree")
        for s in (s1, s2, x):
            _require(_vertex_class(L, s) == "Euclid4", f"vertex {s} is not 4-Euclidean")
            _full_star_and_link(L, s)
        shared = {tuple(e) for e in w["shared_edges"]}
        _require(shared == {(min(t, v), max(t, v)), (min(v, b), max(v, b))}, "bad shared edges")
        for s in (s1, s2):
            edges = set(star(L, s).edges)
            _require(shared <= edges, f"shared edges are not in the star of {s}")

    def _CircuitSplit(self, L, node, path, depth):
        c = node["circuit"]
        _keys(c, "kind", "cycle", "labels", "sides")
        cycle, labels, kind = c["cycle"], c["labels"], c["kind"]
        k = len(cycle)
        _require(len(set(cycle)) == k and k in (3, 4), "circuit is not a simple 3- or 4-cycle")
        for i in range(k):
            a, b = cycle[i], cycle[(i + 1) % k]
            _require(L.adjacent(a, b), f"{a}-{b} is not an edge")
            _require(L.label(a, b) == labels[i], f"label of {a}-{b} is wrong")
        if kind == "Three":
            _require(k == 3 and tuple(sorted(cycle)) not in L.triangles, "3-circuit spans a face")
            _require(angle_sum(labels) == 1, "3-circuit is not Euclidean")
        else:
            _require(kind == "Four" and k == 4, "unknown circuit kind")
            _require(set(labels) == {2}, "4-circuit is not right-angled")
            for a, b in ((cycle[0], cycle[2]), (cycle[1], cycle[3])):
                _require(not L.adjacent(a, b), "4-circuit has a chord")
        sides = [tuple(s) for s in c["sides"]]
        _require(sorted(sides) == _components(L, cycle), "sides are not the complementary pieces")
        _require(len(sides) == 2 and min(map(len, sides)) >= 2, "circuit is a vertex link")
        kids = node["children"]
        _require(isinstance(kids, list) and len(kids) == 2, "expected two children")
        cls = "Euclid3" if k == 3 else "Euclid4"
        total = 0
        for i, (side, kid) in enumerate(zip(sides, kids)):
            _keys(kid, "digest", "num_vertices", "cap_vertex", "vertex_map", "certificate")
            child, vmap, cap = cap_disk(L, side, cycle)
            _require(child.digest() == kid["digest"], f"child {i} digest mismatch")
            _require(kid["num_vertices"] == child.n < L.n, f"child {i} is not smaller")
            _require(kid["cap_vertex"] == cap, f"child {i} cap vertex mismatch")
            _require(kid["vertex_map"] == list(vmap), f"child {i} vertex map mismatch")
            _require(_vertex_class(child, cap) == cls, f"child {i} cap is not {cls}")
            _require(metric_flag_check(child).passed, f"child {i} is not metric flag")
            total += child.n
            self.node(child, kid["certificate"], f"{path}/children[{i}]", depth + 1)
        # Both children contain the circuit and one cone point each.
        _require(total == L.n + k + 2, "vertex accounting fails")

    def _EuclideanReduction(self, L, node, path, depth):
        T = [v for v in L.vertices if _vertex_class(L, v) != "NotEuclidean"]
        recorded = [tuple(x) for x in node["euclidean_vertices"]]
        _require(recorded == [(v, _vertex_class(L, v)) for v in T], "Euclidean vertices differ")
        for u, v in combinations(T, 2):
            _require(not L.adjacent(u, v), f"Euclidean vertices {u} and {v} are adjacent")
        for v in T:
            _full_star_and_link(L, v)
        reduced = LabeledCellComplex.from_star_replacement(L, T)
        _require(reduced.digest() == node["reduced_digest"], "reduced digest mismatch")
        _require(reduced.n == node["reduced_num_vertices"], "reduced vertex count mismatch")
        simplex = reduced.n == 4 and len(reduced.edges) == 6
        if node["outcome"] == "SimplexAfterReduction":
            _require(simplex, "[L - T] is not a simplex")
            g = gram_class(coxeter_matrix(reduced, reduced.vertices))
            _require(str(g) == "Indefinite" == node["gram"], f"Gram class is {g}")
        else:
            _require(node["outcome"] == "Andreev" and not simplex, "bad outcome")
            res = _check_transcript(reduced, node["andreev"])
            _require(all(res.values()), "[L - T] fails Andreev")


def verify(L: LabeledTriangulation, cert) -> VerificationReport:
    """Check ``cert`` (a Certificate or its JSON document) against ``L``.
    Never raises on malformed certificates."""
    failures: list[tuple[str, str]] = []
    try:
        doc = cert.to_json() if hasattr(cert, "to_json") else cert
        _require(isinstance(doc, dict), "certificate is not an object")
        _require(doc.get("format") == FORMAT, "unknown certificate format")
        _require(doc.get("input_digest") == L.digest(), "input digest does not match")
        report = metric_flag_check(L)
        _require(report.passed, "input is not metric flag")
        v = _Verifier(L.n)
        v.node(L, doc.get("root"), "root", 1)
        failures.extend(v.failures)
    except _Reject as exc:
        failures.append(("root", str(exc)))
    except Exception as exc:
        failures.append(("root", f"{type(exc).__name__}: {exc}"))
    return VerificationReport(not failures, tuple(failures))
