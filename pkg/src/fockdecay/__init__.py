"""Phase-space simulation of Fock states decohering in a Markovian bath.

The closed-form machinery lives in :mod:`fockdecay.states` (mixture weights,
Wigner functions, characteristic function, populations, purity),
:mod:`fockdecay.metrics` computes the negative-volume nonclassicality and
its peak over initial levels, and :mod:`fockdecay.oracles` holds the
independent numerical validators (rate-equation ODE, Hankel inversion,
evolution-equation residual, phase-space purity).  ``fockdecay.cli``
exposes all of it as a command-line tool.
"""

__version__ = "0.1.0"

from .states import (
    DecoherenceParams,
    MixtureState,
    PhasePoint,
    characteristic_fn,
    mixture_coefficients,
    populations,
    purity,
    wigner_radial,
    wigner_static,
    wigner_t,
)
from .metrics import (
    EtaResult,
    PeakResult,
    RadialPolynomial,
    SweepTable,
    eta_sweep,
    find_sign_roots,
    negative_volume,
    peak_state,
    radial_polynomial,
)
from .oracles import (
    OdeConfig,
    TransformPoint,
    alternating_binomial_identity,
    diffusion_residual,
    hankel_wigner,
    lindblad_populations,
    phase_space_purity,
    run_validation_suite,
)
from .quadrature import QuadratureResult, adaptive_quadrature
from .specfn import (
    LaguerreSeries,
    bessel_j0,
    laguerre,
    log_binomial,
    upper_incomplete_gamma,
)

__all__ = [
    "DecoherenceParams",
    "EtaResult",
    "LaguerreSeries",
    "MixtureState",
    "OdeConfig",
    "PeakResult",
    "PhasePoint",
    "QuadratureResult",
    "RadialPolynomial",
    "SweepTable",
    "TransformPoint",
    "__version__",
    "adaptive_quadrature",
    "alternating_binomial_identity",
    "bessel_j0",
    "characteristic_fn",
    "diffusion_residual",
    "eta_sweep",
    "find_sign_roots",
    "hankel_wigner",
    "laguerre",
    "lindblad_populations",
    "log_binomial",
    "mixture_coefficients",
    "negative_volume",
    "peak_state",
    "phase_space_purity",
    "populations",
    "purity",
    "radial_polynomial",
    "run_validation_suite",
    "upper_incomplete_gamma",
    "wigner_radial",
    "wigner_static",
    "wigner_t",
]
