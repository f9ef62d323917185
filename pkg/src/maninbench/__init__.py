"""Rational points of bounded height on compactified products of PGL2, with finite-group companions."""

from .picard import (
    DivisorGeometry,
    LineBundleClass,
    ManinInvariants,
    RestrictionTable,
    is_balanced,
    lex_less,
    manin_a,
    manin_b,
    manin_invariants,
)
from .model import ModelConfig, PointTuple, PrimitiveMatrix, height, height_L, normalize
from .enumeration import (
    CountCurve,
    HeightHistogram,
    HistogramTooShort,
    ResourceLimitError,
    count_curve,
    count_on_small_diagonal,
    count_points,
    count_with_clamp,
    height_histogram,
    near_diagonal_fraction,
    schanuel_count,
)
from .asymptotics import (
    FitReport,
    LeadingTermRegressor,
    dirichlet_pole_probe,
    exponent_probe,
    fit_constant,
    saturation_profile,
    well_roundedness,
)
from .local_density import LocalDensityProfile, local_density, local_factor_check
from .groups import FiniteGroup, alternating5, builtin
from .subgroups import (
    GroupTuple,
    Partition,
    admissible_subgroups,
    goursat_closure,
    intermediate_subgroups,
    rank,
    tuple_validity,
)

__version__ = "0.1.0"
