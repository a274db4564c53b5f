"""Shared helpers for the test suite."""

from __future__ import annotations

import time
from dataclasses import dataclass

from singer.certify import Certificate, certify
from singer.complex import LabeledTriangulation, cap_disk
from singer.errors import InternalContradiction
from singer.generate import GeneratorConfig, corpus_config, generate
from singer.verify import VerificationReport, verify

CORPUS_SEEDS = range(1, 201)

# Lines printed in the terminal summary by conftest, one per acceptance criterion.
ACCEPTANCE_LINES: list[str] = []


@dataclass
class CorpusEntry:
    seed: int
    config: GeneratorConfig
    L: LabeledTriangulation
    cert: Certificate | None
    report: VerificationReport | None
    error: Exception | None
    seconds: float


def build_corpus() -> list[CorpusEntry]:
    out = []
    for seed in CORPUS_SEEDS:
        cfg = corpus_config(seed)
        start = time.perf_counter()
        L = generate(cfg)
        cert = report = err = None
        try:
            cert = certify(L)
            report = verify(L, cert)
        except InternalContradiction as exc:
            err = exc
        out.append(CorpusEntry(seed, cfg, L, cert, report, err, time.perf_counter() - start))
    return out


def walk(L: LabeledTriangulation, node: dict, depth: int = 1, path: str = "root"):
    """Yield ``(path, depth, complex, node)`` for every node, rebuilding the
    complexes of split children from the recorded circuit sides."""
    yield path, depth, L, node
    if node["kind"] == "CircuitSplit":
        cycle = node["circuit"]["cycle"]
        for i, (side, kid) in enumerate(zip(node["circuit"]["sides"], node["children"])):
            child, _, _ = cap_disk(L, side, cycle)
            yield from walk(child, kid["certificate"], depth + 1, f"{path}/children[{i}]")


def record(name: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
