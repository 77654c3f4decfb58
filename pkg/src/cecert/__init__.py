"""Exact homological algebra over F_p[x]/(x^m), with verified resolutions.

The package builds split Cartan-Eilenberg injective resolutions of
bounded complexes, cototalizes them, and certifies the structural
claims that make the construction useful: exactness and splitting of
the bicomplex, quasi-isomorphism of the augmentation, split truncation
towers with identified stage kernels, inverse-limit presentations,
cofiltration certificates by shifted free modules, hom-vanishing from
acyclic complexes, and hyper-Ext tables.  All arithmetic is exact and
every computation is deterministic.
"""

from .ce import (
    CEData,
    DoubleComplex,
    Totalization,
    augmentation,
    augmented_bicomplex,
    build_ce,
    cototalize,
    truncated_ce,
    verify_ce,
    verify_ce_plus,
)
from .certify import (
    CofiltrationCertificate,
    ExtData,
    KernelPiece,
    certify_cofiltered,
    derived_hom,
    hom_vanishing_test,
    sample_chain_map,
    verify_certificate,
)
from .complexes import (
    ChainMap,
    Complex,
    Homotopy,
    cohomology,
    cohomology_dims,
    find_homotopy,
    is_acyclic,
    is_contractible,
    is_quasi_iso,
    mapping_cone,
    null_homotopy_into_injectives,
    shift,
    truncate_geq,
)
from .fpla import Mat, PrimeField
from .instances import (
    Instance,
    InstanceError,
    random_complex,
    read_instance,
    write_instance,
)
from .modules import (
    CatParams,
    Hom,
    Module,
    free_module,
    injective_hull,
    is_injective,
    jordan_module,
    jordan_type,
    min_injective_resolution,
)
from .report import CheckReport, report_to_json
from .towers import (
    HolimPresentation,
    StageKernelAnalysis,
    Tower,
    holim_presentation,
    inverse_limit,
    stage_kernel,
    truncation_tower,
    verify_left_complete,
    verify_split_links,
)

__version__ = "0.1.0"

__all__ = [
    "CEData",
    "CatParams",
    "ChainMap",
    "CheckReport",
    "CofiltrationCertificate",
    "Complex",
    "DoubleComplex",
    "ExtData",
    "HolimPresentation",
    "Hom",
    "Homotopy",
    "Instance",
    "InstanceError",
    "KernelPiece",
    "Mat",
    "Module",
    "PrimeField",
    "StageKernelAnalysis",
    "Totalization",
    "Tower",
    "augmentation",
    "augmented_bicomplex",
    "build_ce",
    "certify_cofiltered",
    "cohomology",
    "cohomology_dims",
    "cototalize",
    "derived_hom",
    "find_homotopy",
    "free_module",
    "holim_presentation",
    "hom_vanishing_test",
    "injective_hull",
    "inverse_limit",
    "is_acyclic",
    "is_contractible",
    "is_injective",
    "is_quasi_iso",
    "jordan_module",
    "jordan_type",
    "mapping_cone",
    "min_injective_resolution",
    "null_homotopy_into_injectives",
    "random_complex",
    "read_instance",
    "report_to_json",
    "sample_chain_map",
    "shift",
    "stage_kernel",
    "truncate_geq",
    "truncated_ce",
    "verify_ce",
    "verify_ce_plus",
    "verify_certificate",
    "verify_left_complete",
    "verify_split_links",
    "write_instance",
]
