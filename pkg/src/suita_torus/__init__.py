"""Theta functions, Arakelov-Green functions and Suita ratios on (punctured) complex tori."""
from .errors import ConvergenceError, DomainError, PoleError
from .potentials import (
    PuncturedTorus,
    Torus,
    arakelov_green,
    arakelov_metric_torus,
    bergman_density_punctured,
    bergman_density_torus,
    evans_selberg,
    fundamental_metric,
    reduce_to_fundamental_domain,
    suita_ratio_punctured,
    suita_ratio_torus,
)
from .special_functions import (
    Nome,
    SeriesControl,
    dedekind_eta,
    nome_from_tau,
    theta1,
    theta1_prime_at_zero,
    theta1_series_oracle,
)
from .verification import (
    FiniteDifferenceScheme,
    RatioSample,
    SupSearchConfig,
    VerificationReport,
    asymptotic_scan_puncture,
    curvature_report_fundamental,
    degeneration_scan,
    laplacian_check_evans,
    laplacian_check_green,
    run_full_suite,
    sup_green,
    verify_bound_compact,
)

__version__ = "0.1.0"
