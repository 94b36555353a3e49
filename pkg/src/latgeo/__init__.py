"""Lattice geometry toolkit: systoles, well-rounded retraction, symplectic scans."""

from latgeo.core import (
    BasisMatrix,
    GramMatrix,
    MinimalVectorSet,
    enumerate_short_vectors,
    gram_of,
    is_well_rounded,
    length_spectrum,
    lll_reduce,
    normalize_covolume,
    span_rank,
    stratum_index,
    systole_data,
)
from latgeo.flow import (
    FlowEvent,
    RetractionTrace,
    candidate_horizon,
    first_event,
    flow_gram,
    retract_step,
    well_rounded_retract,
)
from latgeo.kernels import BACKEND as KERNEL_BACKEND
from latgeo.siegel import (
    SiegelPoint,
    SymplecticForm,
    UpperHalfPoint,
    hexagonal_point,
    in_bavard_set,
    is_symplectic,
    mobius,
    mobius_to_inner,
    product_embed,
    product_gram,
    restricted_form,
    siegel_gram_identity_check,
    standard_J,
    tau_to_basis,
)

__version__ = "0.1.0"

__all__ = [
    "BasisMatrix",
    "GramMatrix",
    "MinimalVectorSet",
    "FlowEvent",
    "RetractionTrace",
    "SiegelPoint",
    "SymplecticForm",
    "UpperHalfPoint",
    "KERNEL_BACKEND",
    "candidate_horizon",
    "enumerate_short_vectors",
    "first_event",
    "flow_gram",
    "gram_of",
    "hexagonal_point",
    "in_bavard_set",
    "is_symplectic",
    "is_well_rounded",
    "length_spectrum",
    "lll_reduce",
    "mobius",
    "mobius_to_inner",
    "normalize_covolume",
    "product_embed",
    "product_gram",
    "restricted_form",
    "retract_step",
    "siegel_gram_identity_check",
    "span_rank",
    "standard_J",
    "stratum_index",
    "systole_data",
    "tau_to_basis",
    "well_rounded_retract",
]
