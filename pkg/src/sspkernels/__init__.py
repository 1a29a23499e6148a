"""Radial basis kernels induced by Spatial Semantic Pointer embeddings.

Build phase matrices (HexSSP, random isotropic, axis-product baseline),
estimate their similarity kernels, and compare them with the analytic
sinc, Gaussian, integrated hypergeometric and n-jinc kernels or with a
quadrature of the general isotropic kernel integral.
"""

__version__ = "0.1.0"

from .analysis import (
    BuilderConfig,
    ConvergenceReport,
    SimilarityProfile,
    analytic_reference,
    anisotropy_gap,
    convergence_sweep,
    empirical_profile,
    heatmap2d,
    kernel_profile,
)
from .encoder import SSPVector, dot, encode, similarity
from .exceptions import AccuracyError, DomainError
from .kernels import (
    KernelSpec,
    gaussian_kernel,
    hypergeometric_kernel,
    jinc_kernel,
    quadrature_kernel,
    sinc_kernel,
)
from .phase import PhaseMatrix, build_hexssp, build_product_ssp, build_randssp
from .sampling import (
    RadialDistribution,
    haar_rotation,
    radial_pdf,
    sample_isotropic_direction,
    sample_radius,
    simplex_vertices,
)
from .specfun import SeriesControl, bessel_j, gamma, hyp0f1, pochhammer
