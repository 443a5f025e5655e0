"""Maximum-likelihood phase inference from repeated homodyne quadrature measurements."""

__version__ = "0.1.0"

from .circular import VonMisesFactor, decompose_posterior, verify_decomposition, von_mises_dispersion, von_mises_pdf
from .comparison import (
    Method,
    ResolutionCurve,
    homodyne_posterior,
    resolution_scan,
    semiclassical_width,
    vogel_schleich_density,
    vs_agreement_check,
)
from .exceptions import ContractError, DomainError, IntegrationError
from .inference import (
    EstimateReport,
    PhaseDistribution,
    PhaseInterval,
    asymptotic_posterior,
    circular_dispersion,
    empirical_posterior,
    fisher_information,
    gaussian_width,
    log_likelihood,
    ml_estimate,
    relative_entropy,
    shannon_entropy,
    total_variation,
    width_scaling_probe,
)
from .numerics import Grid1D, bessel_i0, bessel_i1, integrate, log_bessel_i0, log_sum_exp_weighted
from .sampling import SampleSet, draw_samples, read_samples, sample_moments
from .states import (
    StateModel,
    mean_photon_number,
    optimum_partition,
    quadrature_logpdf,
    quadrature_mean_and_std,
    quadrature_pdf,
    theta_prime,
)
