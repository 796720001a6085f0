"""Truncated orthonormal Hermite-function basis.

Evaluation by three-term recurrence, projection of sampled signals onto the
basis by trapezoidal quadrature, reconstruction from coefficients, and the
affine time scaling that maps an arbitrary experiment window onto the region
where the truncated basis is numerically significant.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

_PI_QUARTER = np.pi ** 0.25

# Scaled sample times may exceed the effective support by at most this much
# and still count as "inside" (guards against end-point rounding).
SUPPORT_TOL = 1e-9

# |h_n(t)| < 1e-6 once |t| > sqrt(2n+1) + DECAY_PAD (holds for n <= 500), so
# quadrature grids padded by this amount capture the full basis mass.
DECAY_PAD = 4.0


@dataclass(frozen=True)
class BasisSpec:
    """Basis of the orthonormal Hermite functions of orders 0..n_max."""

    n_max: int

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError(f"n_max must be >= 0, got {self.n_max}")

    @property
    def n_c(self) -> int:
        """Number of basis functions, n_max + 1."""
        return self.n_max + 1

    @property
    def half_width(self) -> float:
        """Half-width sqrt(2*n_max + 1) of the effective support."""
        return float(np.sqrt(2.0 * self.n_max + 1.0))


@dataclass
class SampledSignal:
    """Multichannel real signal on a strictly increasing time grid.

    ``values`` has one row per channel and one column per sample; a 1-D
    array is accepted and treated as a single channel.
    """

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.array(self.times, dtype=float, copy=True).ravel()
        values = np.atleast_2d(np.array(self.values, dtype=float, copy=True))
        if values.shape[1] != times.size:
            raise ValueError(
                f"values has {values.shape[1]} columns but there are "
                f"{times.size} time instants"
            )
        if times.size >= 2 and not np.all(np.diff(times) > 0.0):
            raise ValueError("times must be strictly increasing")
        times.setflags(write=False)
        values.setflags(write=False)
        self.times = times
        self.values = values

    @property
    def n_f(self) -> int:
        return self.values.shape[0]

    @property
    def n_samples(self) -> int:
        return self.times.size


@dataclass
class CoefficientMatrix:
    """Hermite-domain signal: rows are channels, columns are orders 0..n_max."""

    coeffs: np.ndarray
    basis: BasisSpec

    def __post_init__(self):
        coeffs = np.atleast_2d(np.array(self.coeffs, dtype=float, copy=True))
        if coeffs.shape[1] != self.basis.n_c:
            raise ValueError(
                f"coefficient matrix has {coeffs.shape[1]} columns, "
                f"expected {self.basis.n_c}"
            )
        coeffs.setflags(write=False)
        self.coeffs = coeffs

    @property
    def n_f(self) -> int:
        return self.coeffs.shape[0]


@dataclass(frozen=True)
class TimeScaling:
    """Affine map t' = (t - mid)/alpha used to fit a window to the basis.

    ``tau`` is the half-duration of the recorded window and
    ``alpha = tau / sqrt(2*n_max + 1)`` the scale factor, both in seconds.
    """

    tau: float
    alpha: float
    mid: float

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise ValueError("alpha must be positive")


def eval_basis(spec: BasisSpec, t: float) -> np.ndarray:
    """Evaluate [h_0(t), ..., h_n_max(t)] at a single time instant."""
    return sampled_basis_matrix(spec, np.atleast_1d(float(t)))[:, 0]


def sampled_basis_matrix(spec: BasisSpec, times) -> np.ndarray:
    """Matrix H with H[n, k] = h_n(times[k]).

    The recurrence propagates the normalized functions directly, Gaussian
    factor included, so no overflow occurs at high orders where the bare
    polynomials would blow up.
    """
    t = np.asarray(times, dtype=float).ravel()
    h = np.empty((spec.n_c, t.size))
    h[0] = np.exp(-0.5 * t * t) / _PI_QUARTER
    if spec.n_c > 1:
        h[1] = np.sqrt(2.0) * t * h[0]
    for n in range(1, spec.n_max):
        h[n + 1] = t * np.sqrt(2.0 / (n + 1)) * h[n] - np.sqrt(n / (n + 1.0)) * h[n - 1]
    return h


def quadrature_grid(spec: BasisSpec, points_per_fn: int = 10, pad: float = DECAY_PAD) -> np.ndarray:
    """Uniform grid covering the padded effective support of the basis.

    With the default padding every basis function is below 1e-6 outside the
    grid, so trapezoidal quadrature on it resolves inner products of basis
    functions essentially to machine precision.
    """
    half = spec.half_width + pad
    return np.linspace(-half, half, points_per_fn * spec.n_c)


def shift_and_scale(signal: SampledSignal, spec: BasisSpec) -> tuple[SampledSignal, TimeScaling]:
    """Map the recorded window symmetrically onto the effective support.

    The midpoint of the recorded time span is shifted to zero and time is
    scaled by alpha = tau/sqrt(2*n_max+1), so the output grid spans exactly
    [-sqrt(2*n_max+1), +sqrt(2*n_max+1)]. Values are unchanged.
    """
    t = signal.times
    if t.size < 2 or not t[-1] > t[0]:
        raise ValueError("zero-length experiment: need a window with positive duration")
    mid = 0.5 * (t[0] + t[-1])
    tau = 0.5 * (t[-1] - t[0])
    half = spec.half_width
    alpha = tau / half
    scaled = (t - mid) / alpha
    # pin the endpoints, which the affine map only reproduces to rounding
    scaled[0] = -half
    scaled[-1] = half
    return SampledSignal(scaled, signal.values), TimeScaling(tau=tau, alpha=alpha, mid=mid)


def _check_projectable(signal: SampledSignal, spec: BasisSpec) -> None:
    if signal.n_samples < 2:
        raise ValueError("projection needs at least 2 samples")
    if np.max(np.abs(signal.times)) > spec.half_width + SUPPORT_TOL:
        raise ValueError(
            "signal not scaled: time grid extends outside the effective support "
            f"[-{spec.half_width:.6g}, {spec.half_width:.6g}]"
        )


def _trapezoid_weights(times: np.ndarray) -> np.ndarray:
    dt = np.diff(times)
    w = np.empty(times.size)
    w[0] = 0.5 * dt[0]
    w[-1] = 0.5 * dt[-1]
    w[1:-1] = 0.5 * (dt[1:] + dt[:-1])
    return w


def project(signal: SampledSignal, spec: BasisSpec) -> CoefficientMatrix:
    """Project a scaled signal onto the basis by trapezoidal quadrature.

    The integral runs over the signal's own (possibly non-uniform) grid; the
    signal is taken to vanish outside the recorded window.
    """
    _check_projectable(signal, spec)
    w = _trapezoid_weights(signal.times)
    h = sampled_basis_matrix(spec, signal.times)
    return CoefficientMatrix((signal.values * w) @ h.T, spec)


def reconstruct(coeffs: CoefficientMatrix, times) -> SampledSignal:
    """Evaluate the truncated expansion on a time grid."""
    t = np.asarray(times, dtype=float).ravel()
    if t.size and np.max(np.abs(t)) > coeffs.basis.half_width + SUPPORT_TOL:
        warnings.warn(
            "reconstructing outside the effective support; values there are extrapolated",
            stacklevel=2,
        )
    return SampledSignal(t, coeffs.coeffs @ sampled_basis_matrix(coeffs.basis, t))


def convolution_coefficients(signal: SampledSignal, spec: BasisSpec) -> CoefficientMatrix:
    """Expansion coefficients obtained from convolutions evaluated at zero.

    The convolution of h_n with the signal, evaluated at t = 0, equals
    (-1)^n times the projection onto h_n; the alternating sign is folded in
    here so the result agrees with :func:`project` up to quadrature error.
    """
    _check_projectable(signal, spec)
    w = _trapezoid_weights(signal.times)
    h_reflected = sampled_basis_matrix(spec, -signal.times)  # h_n(0 - t)
    raw = (signal.values * w) @ h_reflected.T
    signs = np.where(np.arange(spec.n_c) % 2 == 0, 1.0, -1.0)
    return CoefficientMatrix(raw * signs, spec)
