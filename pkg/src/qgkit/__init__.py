"""qgkit: finite quasigroups, Bruck extensions and the deviation varieties."""

from .bruck import (
    BruckSystem,
    EndoDecomposition,
    compose,
    decompose_endo,
    decompose_epi,
    is_idempotent_via_decomposition,
    make_bruck_system,
    transport,
)
from .core import (
    Congruence,
    QMap,
    Quasigroup,
    are_isomorphic,
    classify,
    fibers,
    image_subquasigroup,
    is_homomorphism,
    iter_homomorphisms,
    local_units,
    make_quasigroup,
    quotient,
)
from .errors import *  # noqa: F401,F403
from .varieties import (
    corollary_injectivity,
    has_left_inverse_property,
    in_aDl,
    in_Dl,
    is_LF,
    left_deviation,
    theorem2_check,
    theorem3_check,
)

__version__ = "0.1.0"
