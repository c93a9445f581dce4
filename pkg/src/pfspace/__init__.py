"""Exact constructive maps on the space P_f(X) of finitely supported measures."""

from .errors import *  # noqa: F401,F403
from .measure import (
    FiniteSpace,
    Measure,
    PointMap,
    canonicalize,
    convex_combine,
    from_vector,
    mass_of_set,
    pushforward,
)
from .omega import (
    Infeasible,
    PairDecomposition,
    half_neighborhood_contains,
    omega_half_membership,
    pair_decompose,
    retract_to_pf,
)
from .pf import (
    HomotopyFamily,
    NotMember,
    PfCertificate,
    deformation_homotopy,
    fiber_homotopy,
    functor_map,
    homotopy_lift,
    is_pf,
    pf_membership,
    retract_to_dirac,
)
from .transfer import EmbeddedSubspace, mass_transfer_into, transfer_retract

__version__ = "0.1.0"
