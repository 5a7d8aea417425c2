"""Exact toric foliated minimal model program.

Fans, co-rank 1 toric foliations given by a functional with coefficients in
``Q + Q*tau``, foliated discrepancies and singularity classes, the cone of
curves and the MMP driver with verifiable traces.
"""

from ._version import __version__
from .errors import *  # noqa: F401,F403
from .fan import (
    Fan,
    Wall,
    has_convex_support,
    is_complete,
    is_smooth,
    minimal_cone_containing,
    multiplicity,
    star_subdivision,
    validate_fan,
    walls,
)
from .foliation import (
    FixedPointType,
    FoliationForm,
    SingularityClass,
    check_non_dicritical,
    check_singularity_class,
    classify_fixed_point,
    detect_pullback,
    discrepancy_oracle,
    epsilon,
    foliated_canonical_divisor,
    foliated_discrepancy,
    wall_tangency,
)
from .intersection import (
    ToricDivisor,
    canonical_divisor,
    curve_class,
    extremal_rays,
    intersect,
    is_nef,
    picard_rank,
    prime_divisor,
    wall_relation,
)
from .lattice import cone_coordinates, cone_multiplicity, integer_kernel, primitive_part
from .mmp import (
    Divisorial,
    FibreType,
    Flipping,
    classify_contraction,
    contract_divisorial,
    flip,
    negative_extremal_rays,
    run_mmp,
)
