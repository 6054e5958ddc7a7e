"""Spectral k-statistics and polykays for Haar-unitary spectral samples.

The spectral analogue of simple random sampling: y is the spectrum of the
leading m x m block of H diag(x) H^dagger with H Haar on U(n).  The
statistics here are the polynomials in the eigenvalues that are unbiased on
average under that scheme, computed exactly in the centre of the group
algebra of the symmetric group.
"""

from .classical import PowerSums, augmented, k_statistic, power_sums, tukey_identity_residual
from .combinat import (
    IntegerPartition,
    SetPartition,
    coeff_d,
    coeff_s,
    enumerate_noncrossing,
    enumerate_partitions,
    enumerate_set_partitions,
    is_noncrossing,
    lattice_type,
    moebius,
    parse_partition,
    refines,
)
from .errors import CapacityError, DegreeExceedsSampleError, NotInvertibleError, PopulationParseError
from .experiments import (
    BUILTIN_POPULATIONS,
    ExperimentConfig,
    SpectralExperimentReport,
    read_population,
    run_inheritance,
    run_limit_demo,
    run_variance_check,
    write_report,
)
from .free import free_cumulants_to_moments, moments_to_free_cumulants
from .group_algebra import ClassFunction, build_convolution_table, convolve, delta, invert, mu_identity
from .random_matrix import RngStream, haar_unitary, hermitian_eigenvalues, spectral_sample, srs_sample
from .spectral import (
    conditional_moment_formulas,
    cumulant_products_from_trace_moments,
    generalized_polykay_l,
    kappa_tilde,
    normalized_spectral,
    spectral_kstat,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
