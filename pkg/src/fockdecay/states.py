"""Decohering Fock states of a damped harmonic oscillator.

A Fock state |n> coupled to a Markovian bath stays diagonal in the number
basis, so its full description at dimensionless time tau (coupling strength
times elapsed time) is a weight vector over the static Fock Wigner
functions:

    W_n(x, p, tau) = sum_m c_m(tau) * Wstat_m(x, p),
    c_m = C(n,m) e^{-n tau} (e^tau - 1)^{n-m},

    Wstat_m(x, p) = ((-1)^m / pi) e^{-r^2} L_m(2 r^2),   r^2 = x^2 + p^2.

The weights coincide with the number-state occupation probabilities and sum
to one by the binomial theorem.  The closed-form mixture requires a
zero-temperature bath (nbar = 0); for thermal baths only the characteristic
function below is available here, and the Hankel inversion in
:mod:`fockdecay.oracles` recovers the Wigner function numerically.

The characteristic function is

    chi_n(lam2, tau) = L_n(lam2 e^{-tau}) exp(-lam2 (1 + 2 nbar (1 - e^{-tau})) / 2)

with lam2 = |lambda|^2 the squared radius in the transform plane.  The sign
of the Gaussian envelope is the decaying one: the growing-envelope variant
is not integrable, fails the transform-plane evolution equation, and exists
in this package only as an intentionally broken validation mode (see
``fockdecay.oracles.diffusion_residual`` and the CLI ``--break-sign`` flag).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .specfn import laguerre, laguerre_sum, log_binomial

__all__ = [
    "N_MAX",
    "TAU_MAX",
    "DecoherenceParams",
    "MixtureState",
    "PhasePoint",
    "characteristic_fn",
    "mixture_coefficients",
    "populations",
    "purity",
    "wigner_radial",
    "wigner_static",
    "wigner_t",
]

# Supported parameter region.  Double-precision behaviour is validated for
# n <= 50 and tau <= 50; beyond that operations refuse rather than degrade.
N_MAX = 50
TAU_MAX = 50.0


def _check_range(n: int, tau: float):
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ValueError(f"n must be an integer, got {n!r}")
    if n < 0 or n > N_MAX:
        raise ValueError(f"n must be in [0, {N_MAX}], got {n}")
    tau = float(tau)
    if not math.isfinite(tau) or tau < 0:
        raise ValueError(f"tau must be finite and >= 0, got {tau}")
    if tau > TAU_MAX:
        raise ValueError(f"tau must be <= {TAU_MAX}, got {tau}")
    return tau


@dataclass(frozen=True)
class DecoherenceParams:
    """Initial Fock level n, dimensionless elapsed time tau, bath occupation nbar."""

    n: int
    tau: float
    nbar: float = 0.0

    def __post_init__(self):
        tau = _check_range(self.n, self.tau)
        nbar = float(self.nbar)
        if not math.isfinite(nbar) or nbar < 0:
            raise ValueError(f"nbar must be finite and >= 0, got {self.nbar}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "nbar", nbar)


@dataclass(frozen=True)
class PhasePoint:
    """A point (x, p) of phase space."""

    x: float
    p: float

    @property
    def r2(self) -> float:
        return self.x * self.x + self.p * self.p


@functools.lru_cache(maxsize=512)
def _weights(n: int, tau: float) -> np.ndarray:
    """Mixture weights c_0..c_n, cached and frozen read-only."""
    if tau == 0.0:
        c = np.zeros(n + 1)
        c[n] = 1.0
    else:
        # log-space assembly: exp(ln C(n,m) - n tau + (n-m) ln(e^tau - 1)).
        # expm1 keeps ln(e^tau - 1) accurate for small tau.
        log_em1 = math.log(math.expm1(tau))
        c = np.array([
            math.exp(log_binomial(n, m) - n * tau + (n - m) * log_em1)
            for m in range(n + 1)
        ])
    c.setflags(write=False)
    return c


def mixture_coefficients(n: int, tau: float) -> np.ndarray:
    """Weights c_m = C(n,m) e^{-n tau} (e^tau - 1)^{n-m} of the Wigner mixture.

    At tau = 0 the vector is the Kronecker delta at m = n; the term
    (e^tau - 1)^{n-m} follows the 0^0 = 1 convention there.  The weights
    sum to 1 (binomial theorem) and double as the occupation probabilities.
    """
    tau = _check_range(n, tau)
    return _weights(n, tau).copy()


def populations(n: int, tau: float) -> np.ndarray:
    """Occupation probabilities p_k of levels k = 0..n at time tau.

    Identical to :func:`mixture_coefficients`: the state is a diagonal
    mixture and the Wigner weight of each static component is exactly the
    probability of finding the system in that level.
    """
    return mixture_coefficients(n, tau)


def purity(n: int, tau: float) -> float:
    """Tr rho^2 = sum_k p_k^2 for the diagonal mixture.

    Equals the phase-space form 2 pi Int W^2 dx dp; the quadrature
    cross-check lives in :func:`fockdecay.oracles.phase_space_purity`.
    """
    p = mixture_coefficients(n, tau)
    return float(np.dot(p, p))


def wigner_static(n: int, point: PhasePoint) -> float:
    """Wigner function of the bare Fock state |n>: ((-1)^n/pi) e^{-r^2} L_n(2 r^2)."""
    _check_range(n, 0.0)
    r2 = point.r2
    return (-1.0) ** n / math.pi * math.exp(-r2) * laguerre(n, 2.0 * r2)


def _require_zero_temperature(params: DecoherenceParams, what: str):
    if params.nbar != 0.0:
        raise ValueError(
            f"{what} requires nbar = 0 (closed-form mixture); "
            "use fockdecay.oracles.hankel_wigner for thermal baths"
        )


def wigner_radial(params: DecoherenceParams, r2):
    """Time-dependent Wigner function as a function of r^2 = x^2 + p^2.

    Vectorized over ``r2``.  All states reachable here are radially
    symmetric, so this is the natural evaluation surface for grids,
    quadrature and metric integrals.
    """
    _require_zero_temperature(params, "wigner_radial")
    w = _weights(params.n, params.tau)
    signed = w * (-1.0) ** np.arange(params.n + 1)
    r2_arr = np.asarray(r2, dtype=float)
    out = np.exp(-r2_arr) * laguerre_sum(signed, 2.0 * r2_arr) / math.pi
    return out if isinstance(r2, np.ndarray) else float(out)


def wigner_t(params: DecoherenceParams, point: PhasePoint) -> float:
    """W_n(x, p, tau) = sum_m c_m Wstat_m(x, p) for a zero-temperature bath."""
    return wigner_radial(params, point.r2)


def characteristic_fn(params: DecoherenceParams, lambda2) -> float:
    """chi_n(lam2, tau) on the transform plane, lam2 = |lambda|^2 >= 0.

    Valid at any bath occupation.  chi(0) = 1 (trace normalization) and the
    decaying Gaussian envelope drives chi -> 0 as lam2 -> inf, which is what
    makes the inverse transform back to the Wigner function well defined.
    """
    lam_arr = np.asarray(lambda2, dtype=float)
    if np.any(~np.isfinite(lam_arr)) or np.any(lam_arr < 0):
        raise ValueError(f"lambda2 must be finite and >= 0, got {lambda2!r}")
    envelope_rate = 0.5 * (1.0 + 2.0 * params.nbar * (-math.expm1(-params.tau)))
    out = laguerre(params.n, lam_arr * math.exp(-params.tau)) * np.exp(
        -lam_arr * envelope_rate
    )
    return out if isinstance(lambda2, np.ndarray) else float(out)


@dataclass(frozen=True)
class MixtureState:
    """A decohering Fock state: parameters plus the frozen weight vector."""

    params: DecoherenceParams
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size != self.params.n + 1:
            raise ValueError(
                f"weights must have length n+1 = {self.params.n + 1}, got {w.size}"
            )
        if np.any(w < 0):
            raise ValueError("weights must be non-negative")
        if abs(float(w.sum()) - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {w.sum()!r}")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_params(cls, params: DecoherenceParams) -> "MixtureState":
        _require_zero_temperature(params, "MixtureState")
        return cls(params, mixture_coefficients(params.n, params.tau))

    def wigner(self, point: PhasePoint) -> float:
        signed = self.weights * (-1.0) ** np.arange(self.params.n + 1)
        r2 = point.r2
        return math.exp(-r2) * laguerre_sum(signed, 2.0 * r2) / math.pi
