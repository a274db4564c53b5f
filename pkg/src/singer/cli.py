"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 certificate rejected,
4 internal contradiction (an artifact is written for inspection).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .andreev import andreev_check
from .certify import certify, deserialize, serialize, summary_lines
from .complex import LabeledTriangulation, canonical_json, parse_triangulation
from .coxeter import l2_euler_characteristic, metric_flag_check
from .errors import GenerationFailed, InternalContradiction, SingerError
from .generate import GeneratorConfig, generate
from .verify import verify

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_REJECTED = 3
EXIT_CONTRADICTION = 4


class _Exit(Exception):
    def __init__(self, code: int, message: str, payload: dict | None = None):
        super().__init__(message)
        self.code = code
        self.payload = payload or {}


def _emit(args, text: str, doc: dict) -> None:
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    elif text:
        print(text)


def _load(path: str) -> LabeledTriangulation:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise _Exit(EXIT_INVALID, f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_triangulation(data)
    except SingerError as exc:
        raise _Exit(EXIT_INVALID, f"{type(exc).__name__}: {exc}", {"error": type(exc).__name__}) from None


def _write(path: str | None, data: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)


def _dump_artifact(L: LabeledTriangulation, exc: InternalContradiction) -> Path:
    directory = Path(os.environ.get("SINGER_ARTIFACT_DIR") or tempfile.gettempdir())
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"singer-contradiction-{L.digest()[:12]}.json"
    doc = {
        "message": str(exc),
        "engine_version": __version__,
        "input": L.to_document(),
        "witness": exc.witness,
    }
    path.write_bytes(canonical_json(doc) + b"\n")
    return path


def cmd_validate(args) -> int:
    L = _load(args.file)
    report = metric_flag_check(L)
    doc = {
        "valid": report.passed,
        "vertices": L.n,
        "edges": len(L.edges),
        "triangles": len(L.triangles),
        **report.to_json(),
    }
    if report.passed:
        text = f"ok: V={L.n} E={len(L.edges)} F={len(L.triangles)}, metric flag"
    else:
        text = "not metric flag:\n" + "\n".join(f"  {v}" for v in report.violations)
    _emit(args, text, doc)
    return EXIT_OK if report.passed else EXIT_INVALID


def _require_metric_flag(L) -> None:
    report = metric_flag_check(L)
    if not report.passed:
        raise _Exit(
            EXIT_INVALID,
            "not metric flag: " + "; ".join(str(v) for v in report.violations),
            report.to_json(),
        )


def cmd_certify(args) -> int:
    L = _load(args.file)
    _require_metric_flag(L)
    try:
        cert = certify(L)
    except InternalContradiction as exc:
        path = _dump_artifact(L, exc)
        raise _Exit(
            EXIT_CONTRADICTION,
            f"internal contradiction: {exc}; artifact written to {path}",
            {"artifact": str(path)},
        ) from None
    data = serialize(cert) + b"\n"
    lines = summary_lines(cert)
    if args.output:
        _write(args.output, data)
        _emit(args, "\n".join(lines), {"summary": lines, "certificate": args.output})
    elif args.json:
        _write(None, data)
    else:
        print("\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    L = _load(args.file)
    try:
        cert = deserialize(Path(args.certificate).read_bytes())
    except OSError as exc:
        raise _Exit(EXIT_INVALID, f"cannot read {args.certificate}: {exc.strerror}") from None
    except SingerError as exc:
        _emit(args, f"rejected: {exc}", {"accepted": False, "failures": [{"path": "", "reason": str(exc)}]})
        return EXIT_REJECTED
    report = verify(L, cert)
    if report.accepted:
        text = "accepted"
    else:
        text = "rejected:\n" + "\n".join(f"  {p}: {r}" for p, r in report.failures)
    _emit(args, text, report.to_json())
    return EXIT_OK if report.accepted else EXIT_REJECTED


def cmd_euler(args) -> int:
    L = _load(args.file)
    _require_metric_flag(L)
    chi = l2_euler_characteristic(L)
    text = f"{chi.numerator}/{chi.denominator}"
    _emit(args, text, {"euler": text})
    return EXIT_OK


def cmd_andreev(args) -> int:
    L = _load(args.file)
    try:
        transcript = andreev_check(L)
    except SingerError as exc:
        raise _Exit(EXIT_INVALID, f"{type(exc).__name__}: {exc}", {"error": type(exc).__name__}) from None
    print(json.dumps(transcript.to_json(), indent=None if args.json else 2, sort_keys=True))
    return EXIT_OK


def _palette(text: str) -> tuple[int, ...]:
    try:
        values = tuple(sorted({int(x) for x in text.split(",") if x.strip()}))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad palette {text!r}") from None
    if not values or min(values) < 2:
        raise argparse.ArgumentTypeError("palette labels must be integers >= 2")
    return values


def cmd_gen(args) -> int:
    try:
        cfg = GeneratorConfig(
            seed=args.seed,
            vertices=args.vertices,
            palette=args.palette,
            plant3=args.plant_3,
            plant4=args.plant_4,
        )
        L = generate(cfg)
    except (ValueError, GenerationFailed) as exc:
        raise _Exit(EXIT_INVALID, f"generation failed: {exc}") from None
    data = canonical_json(L.to_document()) + b"\n"
    _write(args.output, data)
    if args.output and args.json:
        _emit(args, "", {"output": args.output, "vertices": L.n, "digest": L.digest()})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="singer",
        description="Certify l2-acyclicity proof paths for labeled triangulations of the 2-sphere.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check the input and metric flagness")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("certify", parents=[common], help="build a certificate")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="write the certificate here")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", parents=[common], help="check a certificate independently")
    p.add_argument("file")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("euler", parents=[common], help="exact l2-Euler characteristic")
    p.add_argument("file")
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("andreev", parents=[common], help="Andreev transcript of the input")
    p.add_argument("file")
    p.set_defaults(func=cmd_andreev)

    p = sub.add_parser("gen", parents=[common], help="generate a random metric flag nerve")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--plant-3", type=int, default=0, help="empty Euclidean 3-circuits to plant")
    p.add_argument("--plant-4", type=int, default=0, help="empty Euclidean 4-circuits to plant")
    p.add_argument("--palette", type=_palette, default=(2, 3, 4, 5), help="e.g. 2,3,4,5")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        if args.json:
            print(json.dumps({"error": str(exc), "exit_code": exc.code, **exc.payload}, sort_keys=True))
        else:
            print(f"singer {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
