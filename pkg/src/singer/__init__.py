"""Certify l2-acyclicity proof paths for Coxeter nerves triangulating the 2-sphere."""

__version__ = "0.1.0"

from .complex import (
    CycleWithLabels,
    LabeledCellComplex,
    LabeledTriangulation,
    SubComplex,
    parse_triangulation,
)
from .errors import (
    InternalContradiction,
    LabelError,
    SchemaError,
    SingerError,
    TopologyError,
)

__all__ = [
    "CycleWithLabels",
    "InternalContradiction",
    "LabelError",
    "LabeledCellComplex",
    "LabeledTriangulation",
    "SchemaError",
    "SingerError",
    "SubComplex",
    "TopologyError",
    "parse_triangulation",
]
