"""Higher-order Fourier analysis on finite abelian groups."""

__version__ = "0.1.0"

from .groups import GroupElement, GroupSpec, make_group, add, neg, index_of, element_of, char_eval
from .functions import (
    GroupFunction,
    inner,
    lp_norm,
    delta,
    delta_multi,
    psi_eval,
    shift,
    gen_quadratic_phase,
    gen_random_unimodular,
    correlation,
)
from .fourier import FourierSpectrum, dft, idft, truncate, u2_from_spectrum
from .gowers import CubeSystem, gowers_norm, gowers_norm_bruteforce, cube_average, additivity_check
from .spectral import (
    KernelMatrix,
    EigenPair,
    DecompositionReport,
    shift_averaged_matrix,
    quadratic_kernel,
    hermitian_eig,
    cluster_eigenvalues,
    disambiguate_cluster,
    decompose,
)
from .multilinear import MultilinearTensor, vtilde, symmetry_defect, nonvanishing_check, extract_bilinear
from .regularity import Partition, character_test, complexity_check_c1, furreg_pipeline
