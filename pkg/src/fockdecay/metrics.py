"""Negative-volume nonclassicality metric and the quantumness sweep.

Every zero-temperature state here has a Wigner function of the form

    W(r^2) = e^{-r^2} Q(2 r^2) / pi

with Q a degree-n polynomial.  Expanding the mixture
Q(u) = sum_m c_m (-1)^m L_m(u) into the monomial basis and applying the
binomial-transform identity sum_m C(n,m) a^{n-m} (-1)^m C(m,j)
= C(n,j) (-1)^j (a-1)^{n-j} collapses the coefficients to single products:

    q_j = C(n,j) e^{-n tau} (e^tau - 2)^{n-j} / j!

so the monomial construction involves no cancellation at all.  (The test
suite cross-checks this against the direct expansion.)  One structural
consequence: for tau >= ln 2 every q_j is non-negative, Q has no positive
roots, and the negative volume is exactly zero.

The metric itself integrates the negative part of W.  Radial symmetry turns
the plane integral into a 1-D integral over s = r^2 (dx dp = pi ds), and
the pi cancels the Wigner prefactor:

    eta = integral over {Q(2s) < 0} of e^{-s} |Q(2s)| ds.

Between consecutive sign-roots the integrand is a polynomial times e^{-s},
integrated exactly with integer-order upper incomplete gamma functions.
The polynomial coefficients and the gamma sums are evaluated with mpmath at
a precision chosen from n, because the monomial basis of an oscillatory
polynomial is badly conditioned in double precision once n grows past ~12.
Root *location* is insensitive to all this: sign changes are found on the
stable Laguerre-recurrence evaluation of Q and refined by bisection, and
eta depends on root error only to second order (the integrand vanishes at
the roots).

An adaptive-quadrature route computes the same metric from pointwise W
evaluations with no knowledge of coefficients or roots; it is the
independent cross-check for the semi-analytic values and the fallback if
root isolation ever fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from .quadrature import adaptive_quadrature, clustered_edges
from .states import DecoherenceParams, N_MAX, _check_range, _weights, wigner_radial
from .specfn import laguerre_sum

__all__ = [
    "EtaResult",
    "PeakResult",
    "RadialPolynomial",
    "SweepTable",
    "eta_sweep",
    "find_sign_roots",
    "negative_volume",
    "peak_state",
    "radial_polynomial",
]


def _working_dps(n: int) -> int:
    # Enough digits to absorb the monomial-basis condition number, which
    # grows roughly geometrically with the degree.
    return 30 + n


def _mp_coeffs(n: int, tau: float) -> list:
    """Monomial coefficients q_0..q_n of Q(u) as mpf values."""
    with mp.workdps(_working_dps(n)):
        t = mp.mpf(tau)
        a = mp.e ** t - 2
        emt = mp.e ** (-n * t)
        return [
            mp.binomial(n, j) * emt * a ** (n - j) / mp.factorial(j)
            for j in range(n + 1)
        ]


def _q_recurrence(n: int, tau: float, u) -> np.ndarray:
    """Q(u) by the signed Laguerre mixture (stable evaluation for root work)."""
    w = _weights(n, tau) * (-1.0) ** np.arange(n + 1)
    return laguerre_sum(w, np.asarray(u, dtype=float))


@dataclass(frozen=True)
class RadialPolynomial:
    """Q(u) with W(r) = e^{-r^2} Q(2 r^2) / pi, plus its positive sign-roots."""

    n: int
    tau: float
    coeffs: np.ndarray = field(repr=False)
    roots: np.ndarray = field(repr=False)
    _mp_coeffs: list = field(repr=False, default=None)

    @property
    def degree(self) -> int:
        return self.n

    def evaluate(self, u):
        """Q(u) from the stored monomial coefficients (extended precision).

        Goes through the coefficient representation rather than the
        recurrence, so agreement with :func:`fockdecay.states.wigner_radial`
        genuinely validates the expansion.
        """
        u_arr = np.atleast_1d(np.asarray(u, dtype=float))
        out = np.empty_like(u_arr)
        with mp.workdps(_working_dps(self.n)):
            for i, ui in enumerate(u_arr):
                acc = mp.mpf(0)
                uu = mp.mpf(float(ui))
                for c in reversed(self._mp_coeffs):
                    acc = acc * uu + c
                out[i] = float(acc)
        return out if isinstance(u, np.ndarray) else float(out[0])

    def wigner(self, r2):
        """e^{-r^2} Q(2 r^2) / pi evaluated via the stored coefficients."""
        r2_arr = np.atleast_1d(np.asarray(r2, dtype=float))
        out = np.exp(-r2_arr) * self.evaluate(2.0 * r2_arr) / math.pi
        return out if isinstance(r2, np.ndarray) else float(out[0])


def radial_polynomial(n: int, tau: float) -> RadialPolynomial:
    """Monomial expansion of Q for state (n, tau), with isolated sign-roots."""
    tau = _check_range(n, tau)
    mp_coeffs = _mp_coeffs(n, tau)
    coeffs = np.array([float(c) for c in mp_coeffs])
    poly = RadialPolynomial(n=n, tau=tau, coeffs=coeffs, roots=None, _mp_coeffs=mp_coeffs)
    roots = find_sign_roots(poly)
    object.__setattr__(poly, "roots", roots)
    return poly


def find_sign_roots(poly: RadialPolynomial, max_iter: int = 200) -> np.ndarray:
    """All sign changes of Q on (0, u_max], refined to 1e-12 by bisection.

    u_max = 2(4n + 20) dominates the oscillatory range of every reachable Q;
    the leading coefficient q_n = e^{-n tau}/n! is positive, so Q keeps one
    sign beyond its last root.  That bound is re-verified by sign sampling
    on [u_max, 2 u_max] at 64 points on every call.
    """
    n, tau = poly.n, poly.tau
    if not np.all(np.isfinite(poly.coeffs)):
        raise ValueError("polynomial coefficients must be finite")
    if n == 0:
        return np.array([])
    # Descartes gate: every q_j with j < n carries the same (e^tau - 2)
    # power, so past tau = ln 2 the coefficient sequence has no sign
    # variation and Q has no positive roots at all.  Searching anyway would
    # chase rounding noise, because Q near the origin is then smaller than
    # the evaluation error of the mixture sum.
    signs = np.sign(poly.coeffs[poly.coeffs != 0.0])
    if signs.size == 0 or np.all(signs == signs[0]):
        return np.array([])
    u_max = 2.0 * (4 * n + 20)

    guard = _q_recurrence(n, tau, np.linspace(u_max, 2 * u_max, 64))
    if np.any(np.sign(guard) != np.sign(guard[0])) or np.any(guard == 0.0):
        raise RuntimeError(
            f"sign change detected beyond u_max={u_max}; root bound violated"
        )

    # Sample on a quadratically clustered grid: Laguerre-type roots crowd
    # toward the origin like the squares of Bessel zeros, so uniform spacing
    # in sqrt(u) tracks the local root density.
    m = max(256, 16 * (n + 2))
    u_grid = np.linspace(0.0, math.sqrt(u_max), m + 1) ** 2
    vals = np.empty(m + 1)
    # Q(0) = q_0; if that underflows to zero exactly, every q_j with j < n
    # shares the vanished (e^tau - 2) factor, Q = q_n u^n > 0 on (0, inf),
    # and the zero endpoint simply registers no crossing.
    vals[0] = float(poly.coeffs[0])
    vals[1:] = _q_recurrence(n, tau, u_grid[1:])
    sign_change = vals[:-1] * vals[1:] < 0
    # Sign flips where both endpoint values sit below the evaluation noise
    # of the mixture sum (|L_m(u)| <= e^{u/2} bounds every term) are
    # rounding artifacts of vanishingly shallow lobes, not roots.
    noise = 64.0 * (n + 1) * np.finfo(float).eps * np.exp(0.5 * u_grid)
    significant = np.maximum(np.abs(vals[:-1]), np.abs(vals[1:])) > noise[1:]
    sign_change &= significant
    lo = u_grid[:-1][sign_change]
    hi = u_grid[1:][sign_change]
    if lo.size == 0:
        return np.array([])
    flo = vals[:-1][sign_change]

    converged = False
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = _q_recurrence(n, tau, mid)
        go_right = flo * fmid > 0
        lo = np.where(go_right, mid, lo)
        flo = np.where(go_right, fmid, flo)
        hi = np.where(go_right, hi, mid)
        if np.all(hi - lo < 1e-12):
            converged = True
            break
    if not converged:
        raise RuntimeError(
            f"bisection did not reach 1e-12 within {max_iter} iterations"
        )
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class EtaResult:
    """Negative volume, the route that produced it, and an error estimate."""

    value: float
    method: str
    error_estimate: float


def _eta_semi_analytic(n: int, tau: float) -> EtaResult:
    poly = radial_polynomial(n, tau)
    roots_s = poly.roots / 2.0
    if roots_s.size == 0:
        return EtaResult(0.0, "semi-analytic", 0.0)
    with mp.workdps(_working_dps(n)):
        # R(s) = Q(2s): coefficients r_j = q_j 2^j.
        r = [c * mp.mpf(2) ** j for j, c in enumerate(poly._mp_coeffs)]
        bounds = [mp.mpf(0)] + [mp.mpf(float(s)) for s in roots_s] + [None]

        def gamma_table(s):
            # Gamma(j+1, s) for j = 0..n, built incrementally.
            if s is None:
                return [mp.mpf(0)] * (n + 1)
            es = mp.e ** (-s)
            out = []
            term = mp.mpf(1)
            acc = mp.mpf(1)
            fact = mp.mpf(1)
            for j in range(n + 1):
                if j > 0:
                    fact *= j
                    term = term * s / j
                    acc += term
                out.append(fact * es * acc)
            return out

        tables = [gamma_table(b) for b in bounds]
        total = mp.mpf(0)
        for i in range(len(bounds) - 1):
            left = float(bounds[i])
            right = float(bounds[i + 1]) if bounds[i + 1] is not None else left + 1.0
            mid_s = 0.5 * (left + right)
            mid_sign = float(_q_recurrence(n, tau, np.array([2.0 * mid_s]))[0])
            if mid_sign < 0:
                piece = mp.mpf(0)
                for j in range(n + 1):
                    piece += r[j] * (tables[i][j] - tables[i + 1][j])
                total -= piece
        value = max(0.0, float(total))
    # The gamma sums carry >= 10 guard digits past double precision, so the
    # dominant residual error is the final rounding plus the second-order
    # effect of 1e-12 root perturbations.
    err = 4e-16 * abs(value) + 1e-15
    return EtaResult(value, "semi-analytic", err)


def _eta_quadrature(n: int, tau: float, tol: float) -> EtaResult:
    s_max = 4.0 * n + 20.0
    edges = clustered_edges(s_max, max(64, 24 * (n + 1)))
    params = DecoherenceParams(n, tau)

    def integrand(s):
        return np.maximum(0.0, -wigner_radial(params, s)) * math.pi

    # clip_guard: the |.|_- integrand has kinks at the roots, where the
    # plain Kronrod-Gauss estimate can be blind; extra headroom on top.
    res = adaptive_quadrature(
        integrand, 0.0, s_max, tol / 10.0, initial_edges=edges, clip_guard=True
    )
    return EtaResult(max(0.0, res.value), "quadrature", max(res.error, tol / 10.0))


def negative_volume(n: int, tau: float, method: str = "auto", tol: float = 1e-10) -> EtaResult:
    """Negative volume eta of the Wigner function of state (n, tau).

    ``method`` selects the route: "semi-analytic" (piecewise-exact gamma
    integration between sign-roots), "quadrature" (adaptive Gauss-Kronrod
    on max(0, -W)), or "auto" (semi-analytic with quadrature fallback if
    root isolation fails).
    """
    tau = _check_range(n, tau)
    if method not in ("auto", "semi-analytic", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if method == "quadrature":
        return _eta_quadrature(n, tau, tol)
    if method == "semi-analytic":
        return _eta_semi_analytic(n, tau)
    try:
        return _eta_semi_analytic(n, tau)
    except RuntimeError:
        return _eta_quadrature(n, tau, tol)


@dataclass
class SweepTable:
    """eta and purity over an (n, tau) rectangle, with per-cell failure records."""

    n_values: list
    tau_values: list
    eta: list  # eta[i][j]: EtaResult or None (failed)
    purity: np.ndarray
    failures: dict  # (i, j) -> message
    meta: dict


def eta_sweep(n_max: int, tau_values, method: str = "auto", tol: float = 1e-10) -> SweepTable:
    """Populate eta and purity for n in [0, n_max] x tau_values.

    Cells are independent (parallel-map contract: disjoint result slots,
    order-independent determinism); evaluation is sequential here.  A cell
    failure is recorded and the sweep continues.
    """
    from .states import purity as purity_fn

    if n_max < 0 or n_max > N_MAX:
        raise ValueError(f"n_max must be in [0, {N_MAX}], got {n_max}")
    tau_list = [float(t) for t in tau_values]
    n_list = list(range(n_max + 1))
    eta = [[None] * len(tau_list) for _ in n_list]
    pur = np.full((len(n_list), len(tau_list)), np.nan)
    failures = {}
    for i, n in enumerate(n_list):
        for j, tau in enumerate(tau_list):
            try:
                eta[i][j] = negative_volume(n, tau, method=method, tol=tol)
                pur[i, j] = purity_fn(n, tau)
            except (ValueError, RuntimeError) as exc:
                failures[(i, j)] = str(exc)
    return SweepTable(
        n_values=n_list,
        tau_values=tau_list,
        eta=eta,
        purity=pur,
        failures=failures,
        meta={"method": method, "tol": tol},
    )


@dataclass(frozen=True)
class PeakResult:
    """argmax_n eta(n, tau) with a boundary indicator and the peak value."""

    n_star: int
    boundary: bool
    eta_at_peak: float


def peak_state(tau: float, n_max: int, method: str = "auto", tol: float = 1e-10) -> PeakResult:
    """Most negative-volume-rich initial level at fixed tau.

    Ties break toward smaller n.  ``boundary`` flags an argmax sitting at
    n_max, which happens as tau -> 0 where eta still grows monotonically
    with n.
    """
    if n_max < 0 or n_max > N_MAX:
        raise ValueError(f"n_max must be in [0, {N_MAX}], got {n_max}")
    best_n = 0
    best_eta = -1.0
    for n in range(n_max + 1):
        value = negative_volume(n, tau, method=method, tol=tol).value
        if value > best_eta:
            best_eta = value
            best_n = n
    return PeakResult(n_star=best_n, boundary=best_n == n_max, eta_at_peak=best_eta)
