"""Continuous-time LTI models, excitation signals, and simulation.

State propagation uses the exact matrix-exponential map of the augmented
system under first-order-hold input interpolation, so smooth excitations are
reproduced with second-order accuracy on the sampling grid. Measurement
noise is additive white Gaussian on the outputs, scaled to a requested SNR.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .basis import BasisSpec, SampledSignal, project, reconstruct, shift_and_scale


@dataclass
class StateSpaceModel:
    """Continuous-time model (A, B, C, D, K); K defaults to zero."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    K: np.ndarray | None = None

    def __post_init__(self):
        self.A = np.atleast_2d(np.array(self.A, dtype=float, copy=True))
        self.B = np.atleast_2d(np.array(self.B, dtype=float, copy=True))
        self.C = np.atleast_2d(np.array(self.C, dtype=float, copy=True))
        self.D = np.atleast_2d(np.array(self.D, dtype=float, copy=True))
        n_x = self.A.shape[0]
        if self.A.shape != (n_x, n_x):
            raise ValueError(f"A must be square, got {self.A.shape}")
        if self.B.ndim != 2 or self.B.shape[0] != n_x:
            # accept a flat vector as a single-input column
            if self.B.size == n_x:
                self.B = self.B.reshape(n_x, 1)
            else:
                raise ValueError(f"B must have {n_x} rows, got shape {self.B.shape}")
        if self.C.shape[1] != n_x:
            raise ValueError(f"C must have {n_x} columns, got shape {self.C.shape}")
        n_y = self.C.shape[0]
        n_u = self.B.shape[1]
        if self.D.shape != (n_y, n_u):
            if self.D.size == n_y * n_u:
                self.D = self.D.reshape(n_y, n_u)
            else:
                raise ValueError(
                    f"D must be {n_y}x{n_u}, got shape {self.D.shape}"
                )
        if self.K is None:
            self.K = np.zeros((n_x, n_y))
        else:
            self.K = np.atleast_2d(np.array(self.K, dtype=float, copy=True))
            if self.K.shape != (n_x, n_y):
                raise ValueError(f"K must be {n_x}x{n_y}, got shape {self.K.shape}")
        for m in (self.A, self.B, self.C, self.D, self.K):
            m.setflags(write=False)
        self._rank_diagnostics()

    def _rank_diagnostics(self):
        n_x = self.n_x
        obs = np.vstack([self.C @ np.linalg.matrix_power(self.A, k) for k in range(n_x)])
        ctr = np.hstack([np.linalg.matrix_power(self.A, k) @ self.B for k in range(n_x)])
        r_obs = np.linalg.matrix_rank(obs)
        r_ctr = np.linalg.matrix_rank(ctr)
        if r_obs < n_x:
            warnings.warn(f"(A, C) not observable: rank {r_obs} < {n_x}", stacklevel=3)
        if r_ctr < n_x:
            warnings.warn(f"(A, B) not controllable: rank {r_ctr} < {n_x}", stacklevel=3)

    @property
    def n_x(self) -> int:
        return self.A.shape[0]

    @property
    def n_u(self) -> int:
        return self.B.shape[1]

    @property
    def n_y(self) -> int:
        return self.C.shape[0]

    @property
    def a_bar(self) -> np.ndarray:
        """Predictor state matrix A - K C."""
        return self.A - self.K @ self.C

    @property
    def b_bar(self) -> np.ndarray:
        """Predictor input matrix [B - K D, K]."""
        return np.hstack([self.B - self.K @ self.D, self.K])


@dataclass(frozen=True)
class NoiseSpec:
    """Additive output-noise description; only SNR mode is implemented."""

    snr_db: float
    seed: int = 0
    mode: str = "snr_db"
    Q: np.ndarray | None = None  # reserved
    S: np.ndarray | None = None  # reserved
    R: np.ndarray | None = None  # reserved

    def __post_init__(self):
        if self.mode != "snr_db" or any(m is not None for m in (self.Q, self.S, self.R)):
            raise NotImplementedError("covariance noise mode is reserved")
        if not np.isfinite(self.snr_db):
            raise ValueError("snr_db must be finite")


@dataclass(frozen=True)
class SweepSpec:
    """Linear sine sweep from f1 to f2 hertz over T seconds."""

    T: float
    f1: float
    f2: float

    def __post_init__(self):
        if not self.T > 0.0:
            raise ValueError("sweep duration T must be positive")
        if not (self.f2 >= self.f1 >= 0.0):
            raise ValueError("sweep frequencies must satisfy f2 >= f1 >= 0")


def sine_sweep(spec: SweepSpec, times) -> SampledSignal:
    """u(t) = sin(2*pi*(f1*t + (f2 - f1)/(2T) * t^2)) on the given grid."""
    t = np.asarray(times, dtype=float)
    phase = 2.0 * np.pi * (spec.f1 * t + (spec.f2 - spec.f1) / (2.0 * spec.T) * t * t)
    return SampledSignal(t, np.sin(phase))


def bandlimit_via_hermite(signal: SampledSignal, eta: int) -> SampledSignal:
    """Project a signal onto Hermite orders 0..eta and resample it.

    The signal is scaled onto the effective support of the order-eta basis,
    projected, reconstructed on the scaled grid, and returned on the
    original time grid.
    """
    spec = BasisSpec(eta)
    shifted, _ = shift_and_scale(signal, spec)
    coeffs = project(shifted, spec)
    recon = reconstruct(coeffs, shifted.times)
    return SampledSignal(signal.times, recon.values)


def _foh_step_map(model: StateSpaceModel, h: float) -> np.ndarray:
    """expm of the system augmented with an affine input segment."""
    n_x, n_u = model.n_x, model.n_u
    aug = np.zeros((n_x + 2 * n_u, n_x + 2 * n_u))
    aug[:n_x, :n_x] = model.A
    aug[:n_x, n_x:n_x + n_u] = model.B
    aug[n_x:n_x + n_u, n_x + n_u:] = np.eye(n_u)
    return expm(aug * h)


def simulate(model: StateSpaceModel, input_signal: SampledSignal, noise: NoiseSpec | None = None) -> SampledSignal:
    """Simulate the output response from rest, optionally adding output noise.

    Propagation is interval-by-interval with the exact matrix-exponential
    map under first-order-hold interpolation of the input samples, starting
    from x(0) = 0. With a noise spec, zero-mean white Gaussian noise is
    added per output channel with variance set so that
    10*log10(signal_power/noise_power) equals ``snr_db``, the signal power
    being the per-channel mean square of the noise-free output. The result
    is reproducible for a fixed seed.
    """
    if input_signal.n_f != model.n_u:
        raise ValueError(
            f"input has {input_signal.n_f} channels but the model expects {model.n_u}"
        )
    t = input_signal.times
    u = input_signal.values
    n_x, n_u = model.n_x, model.n_u
    xs = np.zeros((n_x, t.size))
    step_maps: dict[float, np.ndarray] = {}
    x = np.zeros(n_x)
    for k in range(t.size - 1):
        h = float(t[k + 1] - t[k])
        phi = step_maps.get(h)
        if phi is None:
            phi = _foh_step_map(model, h)
            step_maps[h] = phi
        ramp = (u[:, k + 1] - u[:, k]) / h
        x = (
            phi[:n_x, :n_x] @ x
            + phi[:n_x, n_x:n_x + n_u] @ u[:, k]
            + phi[:n_x, n_x + n_u:] @ ramp
        )
        xs[:, k + 1] = x
    y = model.C @ xs + model.D @ u
    if noise is not None:
        rng = np.random.default_rng(noise.seed)
        power = np.mean(y * y, axis=1)
        sigma = np.sqrt(power * 10.0 ** (-noise.snr_db / 10.0))
        y = y + rng.standard_normal(y.shape) * sigma[:, None]
    return SampledSignal(t, y)


def eigenvalues(model: StateSpaceModel) -> list[complex]:
    """Eigenvalues of A sorted by (real part, imaginary part)."""
    eig = np.linalg.eigvals(model.A)
    return sorted((complex(v) for v in eig), key=lambda z: (z.real, z.imag))


def frequency_response(model: StateSpaceModel, freqs_hz) -> np.ndarray:
    """G(j*2*pi*f) = C (jwI - A)^-1 B + D, shape (n_y, n_u, n_freq)."""
    freqs = np.asarray(freqs_hz, dtype=float).ravel()
    eig = np.linalg.eigvals(model.A)
    out = np.empty((model.n_y, model.n_u, freqs.size), dtype=complex)
    eye = np.eye(model.n_x)
    for i, f in enumerate(freqs):
        s = 2.0j * np.pi * f
        if np.min(np.abs(s - eig)) < 1e-9:
            raise ValueError(
                f"resolvent singular at {f} Hz: eigenvalue on the imaginary axis"
            )
        out[:, :, i] = model.C @ np.linalg.solve(s * eye - model.A, model.B) + model.D
    return out
