from .neighborhoods import NeighborhoodSpec, openness_witness, weak_nbhd_contains
from .probes import (
    ProbeReport,
    closure_probe,
    continuity_core_search,
    continuity_probe,
    degenerate_family,
    openness_probe,
)
from .wasserstein import optimal_coupling, wasserstein1, wasserstein1_bruteforce
