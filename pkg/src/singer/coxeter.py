"""Coxeter-theoretic predicates: Gram classes, spherical subsets, metric flagness
and the l2-Euler characteristic of a nerve.

Subsets are described by their Coxeter matrix ``m`` (``m[i][i] == 1``,
``m[i][j]`` the label of the pair, ``INFINITE`` for a missing edge).
Everything up to rank 3 is exact rational arithmetic; rank 4 goes through
high-precision principal minors (see ``gram_class``).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import mpmath

from .complex import LabeledTriangulation, angle_sum, cliques3
from .errors import InfiniteLabel, LabelError, NotMetricFlag, NotSpherical, SubsetTooLarge

MAX_LABEL = 10**6
ZERO_THRESHOLD = mpmath.mpf("1e-20")
DEFAULT_PRECISION_BITS = 256

POSITIVE_DEFINITE = "PositiveDefinite"
POSITIVE_SEMIDEFINITE = "PositiveSemidefinite"
INDEFINITE = "Indefinite"


@dataclass(frozen=True)
class GramClass:
    kind: str
    corank: int = 0

    def __post_init__(self):
        if self.kind == POSITIVE_SEMIDEFINITE and self.corank < 1:
            raise ValueError("a semidefinite class needs corank >= 1")
        if self.kind != POSITIVE_SEMIDEFINITE and self.corank != 0:
            raise ValueError(f"{self.kind} has no corank")

    def __str__(self) -> str:
        if self.kind == POSITIVE_SEMIDEFINITE:
            return f"PSDCorank({self.corank})"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> GramClass:
        if text in (POSITIVE_DEFINITE, INDEFINITE):
            return cls(text)
        if text.startswith("PSDCorank(") and text.endswith(")"):
            return cls(POSITIVE_SEMIDEFINITE, int(text[len("PSDCorank(") : -1]))
        raise ValueError(f"unknown Gram class {text!r}")


PD = GramClass(POSITIVE_DEFINITE)


def precision_bits() -> int:
    return int(os.environ.get("SINGER_PRECISION_BITS", DEFAULT_PRECISION_BITS))


def coxeter_matrix(L, subset: Sequence[int]) -> list[list]:
    subset = list(subset)
    return [[1 if u == w else L.label(u, w) for w in subset] for u in subset]


def _off_diagonal(m) -> list:
    k = len(m)
    for i in range(k):
        if len(m[i]) != k:
            raise ValueError("Coxeter matrix must be square")
        for j in range(i + 1, k):
            if m[i][j] != m[j][i]:
                raise ValueError(f"Coxeter matrix not symmetric at ({i}, {j})")
    return [m[i][j] for i in range(k) for j in range(i + 1, k)]


def _rank3_excess(m) -> Fraction:
    return angle_sum((m[0][1], m[1][2], m[0][2])) - 1


def gram_class(m: Sequence[Sequence]) -> GramClass:
    """Classify the Gram form ``G[i][j] = -cos(pi / m[i][j])`` of a subset of
    at most four generators.

    Rank 4 is decided from the coefficients of the characteristic polynomial
    (sums of principal minors), which for a symmetric matrix determine the
    inertia exactly: all nonnegative means PSD, and the corank is the number
    of trailing zero coefficients.  Minors are evaluated with ``mpmath`` at
    ``SINGER_PRECISION_BITS`` bits and treated as zero below 1e-20.
    """
    k = len(m)
    if k > 4:
        raise SubsetTooLarge(f"subsets of size {k} are not supported")
    off = _off_diagonal(m)
    if any(x == math.inf or x is None for x in off):
        raise InfiniteLabel("some pair in the subset is not joined by an edge")
    if k <= 2:
        return PD
    if k == 3:
        excess = _rank3_excess(m)
        if excess > 0:
            return PD
        if excess == 0:
            return GramClass(POSITIVE_SEMIDEFINITE, 1)
        return GramClass(INDEFINITE)
    if any(x > MAX_LABEL for x in off):
        raise LabelError(f"labels above {MAX_LABEL} are not supported in rank 4")
    signs = _char_poly_signs(m)
    if any(s < 0 for s in signs):
        return GramClass(INDEFINITE)
    corank = 0
    for s in reversed(signs):
        if s != 0:
            break
        corank += 1
    if corank == 0:
        return PD
    return GramClass(POSITIVE_SEMIDEFINITE, corank)


def _char_poly_signs(m) -> list[int]:
    k = len(m)
    with mpmath.workprec(precision_bits()):
        G = mpmath.matrix(k, k)
        for i in range(k):
            G[i, i] = 1
            for j in range(k):
                if i != j:
                    G[i, j] = -mpmath.cos(mpmath.pi / m[i][j])
        signs = []
        for size in range(1, k + 1):
            total = mpmath.mpf(0)
            for idx in combinations(range(k), size):
                sub = mpmath.matrix(size, size)
                for a, i in enumerate(idx):
                    for b, j in enumerate(idx):
                        sub[a, b] = G[i, j]
                total += mpmath.det(sub)
            signs.append(0 if abs(total) < ZERO_THRESHOLD else (1 if total > 0 else -1))
    return signs


def is_spherical(m: Sequence[Sequence]) -> bool:
    k = len(m)
    if k > 4:
        raise SubsetTooLarge(f"subsets of size {k} are not supported")
    off = _off_diagonal(m)
    if k <= 1:
        return True
    if any(x == math.inf or x is None for x in off):
        return False
    if k == 2:
        return True
    if k == 3:
        return _rank3_excess(m) > 0
    return gram_class(m) == PD


def spherical_order(m: Sequence[Sequence]) -> Fraction:
    """Order of the finite Coxeter group of a subset of size at most 3."""
    k = len(m)
    if k > 3:
        raise SubsetTooLarge("group orders are only computed up to rank 3")
    if not is_spherical(m):
        raise NotSpherical("the subset generates an infinite group")
    if k == 0:
        return Fraction(1)
    if k == 1:
        return Fraction(2)
    if k == 2:
        return Fraction(2 * m[0][1])
    return Fraction(4) / _rank3_excess(m)


@dataclass(frozen=True)
class Violation:
    clause: str
    vertices: tuple[int, ...]
    detail: str

    def __str__(self) -> str:
        return f"clause ({self.clause}) at {list(self.vertices)}: {self.detail}"

    def to_json(self) -> dict:
        return {"clause": self.clause, "vertices": list(self.vertices), "detail": self.detail}


@dataclass(frozen=True)
class MetricFlagReport:
    violations: tuple[Violation, ...]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"passed": self.passed, "violations": [v.to_json() for v in self.violations]}


def cliques4(nbrs) -> list[tuple[int, int, int, int]]:
    out = []
    for a, b, c in cliques3(nbrs):
        for d in nbrs[a] & nbrs[b] & nbrs[c]:
            if d > c:
                out.append((a, b, c, d))
    out.sort()
    return out


def metric_flag_check(L: LabeledTriangulation) -> MetricFlagReport:
    """(a) faces spherical, (b) spherical 3-cliques are faces, (c) no 4-clique
    has a positive definite Gram form."""
    violations = []
    for t in L.triangles:
        if not is_spherical(coxeter_matrix(L, t)):
            labs = [L.label(t[0], t[1]), L.label(t[1], t[2]), L.label(t[0], t[2])]
            violations.append(Violation("a", t, f"face labels {labs} are not spherical"))
    for t in cliques3(L.neighbor_sets()):
        if not L.has_triangle(*t) and is_spherical(coxeter_matrix(L, t)):
            labs = [L.label(t[0], t[1]), L.label(t[1], t[2]), L.label(t[0], t[2])]
            violations.append(
                Violation("b", t, f"spherical 3-clique with labels {labs} spans no face")
            )
    for q in cliques4(L.neighbor_sets()):
        if gram_class(coxeter_matrix(L, q)) == PD:
            violations.append(Violation("c", q, "4-clique with positive definite Gram form"))
    return MetricFlagReport(tuple(violations))


def require_metric_flag(L: LabeledTriangulation) -> None:
    report = metric_flag_check(L)
    if not report.passed:
        raise NotMetricFlag(report.violations)


@dataclass(frozen=True)
class SphericalPoset:
    """Spherical subsets (as sorted vertex tuples) with their group orders."""

    elements: tuple[tuple[tuple[int, ...], Fraction], ...]

    def __len__(self) -> int:
        return len(self.elements)

    def order(self, subset) -> Fraction:
        key = tuple(sorted(subset))
        for t, o in self.elements:
            if t == key:
                return o
        raise NotSpherical(f"{list(key)} is not a spherical subset")


def spherical_poset(L: LabeledTriangulation) -> SphericalPoset:
    require_metric_flag(L)
    subsets = [()] + [(v,) for v in L.vertices] + list(L.edges) + list(L.triangles)
    return SphericalPoset(tuple((t, spherical_order(coxeter_matrix(L, t))) for t in subsets))


def l2_euler_characteristic(L: LabeledTriangulation) -> Fraction:
    """Alternating sum of 1/|W_T| over the spherical subsets T."""
    total = Fraction(0)
    for t, order in spherical_poset(L).elements:
        total += Fraction((-1) ** len(t)) / order
    return total
