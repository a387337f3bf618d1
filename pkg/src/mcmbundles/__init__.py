"""Exact cohomology of presented vector bundles on projective space."""

__version__ = "0.1.0"

from .cohomology import (  # noqa: F401
    ChernData,
    CohomologyTable,
    GenericityError,
    InternalConsistencyError,
    LineBundleSum,
    PresentedBundle,
    UnsupportedDimensionError,
    bundle_cohomology,
    chern_data,
    cohomology_table,
    dual_bundle_cohomology,
    euler_characteristic,
    line_bundle_cohomology,
    make_bundle,
)
from .constructors import *  # noqa: F401,F403
from .forms import HomogeneousForm, parse_form  # noqa: F401
from .linalg import QQ, FieldMismatchError, Matrix, PrimeField, parse_field  # noqa: F401
