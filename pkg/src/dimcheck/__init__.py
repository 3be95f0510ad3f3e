"""Exact decimal measurement arithmetic with dimension checking.

The package has three layers: exact decimal values (`DecValue`), units and
measurements over a seven-base dimension group (`Dimension`, `Unit`,
`Measurement`, `UnitRegistry`), and a small statement language for
declaring units and checking expressions (`quantlang`).  A settlement
engine for multi-currency billing lives in `currency`, and batched
dimension kernels (numba-accelerated, numpy fallback) in `kernels`.
"""

from importlib import resources

from .decvalue import (
    DEFAULT_CONTEXT,
    DecimalParseError,
    DecValue,
    ExponentOverflowError,
    PrecisionContext,
    ulp,
    within_ulps,
)
from .dimension import (
    BASE_DIMENSIONS,
    DIMENSIONLESS,
    BaseDimension,
    Dimension,
    base_by_name,
)
from .measure import (
    AffineCompositeError,
    DimensionMismatchError,
    DuplicateNameError,
    InvalidScaleError,
    Measurement,
    RegistryParseError,
    Unit,
    UnitError,
    UnitRegistry,
    UnknownUnitError,
    convert_roundtrip,
    default_registry,
    load_registry,
)
from .selftest import SelfTestReport, run_selftest

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONTEXT",
    "DecimalParseError",
    "DecValue",
    "ExponentOverflowError",
    "PrecisionContext",
    "ulp",
    "within_ulps",
    "BASE_DIMENSIONS",
    "DIMENSIONLESS",
    "BaseDimension",
    "Dimension",
    "base_by_name",
    "AffineCompositeError",
    "DimensionMismatchError",
    "DuplicateNameError",
    "InvalidScaleError",
    "Measurement",
    "RegistryParseError",
    "Unit",
    "UnitError",
    "UnitRegistry",
    "UnknownUnitError",
    "convert_roundtrip",
    "default_registry",
    "load_registry",
    "SelfTestReport",
    "run_selftest",
    "corpus_path",
    "__version__",
]


def corpus_path(name: str):
    """Path to a bundled example program, e.g. ``corpus_path("reactor.dc")``."""
    return resources.files(__name__) / "corpus" / name
