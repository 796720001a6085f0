"""Predictor-based subspace identification in the Hermite coefficient domain.

From sampled input/output data the pipeline produces a continuous-time
state-space model (A, B, C, D, K):

1. scale the experiment window onto the basis support and project u, y;
2. regress the output coefficients on repeatedly integrated input/output
   stacks to estimate the predictor Markov parameters and D;
3. assemble the observability-times-controllability product, take its SVD
   to recover a state coefficient sequence, then solve two further least
   squares for C and for (A, B, K).

All least-squares problems are solved minimum-norm via SVD; no step leaves
the continuous-time parameterization.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.linalg import lu_solve

from . import operators
from .basis import BasisSpec, CoefficientMatrix, SampledSignal, project, shift_and_scale
from .lti import StateSpaceModel
from .operators import ModifiedOperator

# Relative Frobenius norm below which the innovation sequence is considered
# too small to identify K.
_INNOVATION_TOL = 1e-8


@dataclass(frozen=True)
class IdentConfig:
    """Algorithm parameters.

    ``order`` is the model order or "auto", in which case the order is the
    position of the largest consecutive singular-value ratio exceeding
    ``sv_gap_threshold``.
    """

    n_max: int
    beta: float
    gamma: float
    p: int = 10
    f: int = 10
    order: int | str = "auto"
    sv_gap_threshold: float = 10.0

    def __post_init__(self):
        if self.gamma <= 0.0:
            raise ValueError("gamma must be positive")
        if self.beta < 0.0:
            raise ValueError("beta must be nonnegative")
        if not (self.p >= self.f >= 1):
            raise ValueError("windows must satisfy p >= f >= 1")
        if self.n_max < self.p:
            raise ValueError("n_max must be at least the past window p")
        if self.order != "auto" and (not isinstance(self.order, int) or self.order < 1):
            raise ValueError("order must be a positive integer or 'auto'")


@dataclass(frozen=True)
class LsInfo:
    """Condition number, residual norm and rank of one least-squares solve."""

    cond: float
    residual: float
    rank: int


@dataclass
class IdentResult:
    """Identified model plus the intermediate quantities and diagnostics."""

    model: StateSpaceModel
    singular_values: np.ndarray
    x_hat: CoefficientMatrix
    e_hat: CoefficientMatrix
    markov: np.ndarray
    diagnostics: dict = field(default_factory=dict)


def _min_norm_lstsq(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, LsInfo]:
    """Minimum-norm least squares via SVD with solve diagnostics."""
    sol, _, rank, sv = scipy.linalg.lstsq(a, b, lapack_driver="gelsd")
    if sv is not None and sv.size and sv[-1] > 0.0:
        cond = float(sv[0] / sv[-1])
    else:
        cond = float("inf")
    residual = float(np.linalg.norm(a @ sol - b))
    return sol, LsInfo(cond=cond, residual=residual, rank=int(rank))


def build_predictor_data(u_c: CoefficientMatrix, y_c: CoefficientMatrix) -> CoefficientMatrix:
    """Stack input rows over output rows, sharing the coefficient columns."""
    if u_c.basis.n_c != y_c.basis.n_c:
        raise ValueError(
            f"coefficient column counts differ: {u_c.basis.n_c} vs {y_c.basis.n_c}"
        )
    return CoefficientMatrix(np.vstack([u_c.coeffs, y_c.coeffs]), u_c.basis)


def build_Z(z_c: CoefficientMatrix, dp: ModifiedOperator, p: int) -> np.ndarray:
    """Stack z integrated p, p-1, ..., 1 times (highest inverse power on top)."""
    if p < 1:
        raise ValueError("past window p must be >= 1")
    if dp.n_c != z_c.basis.n_c:
        raise ValueError("operator size does not match the coefficient columns")
    lu = operators.factorization(dp)
    blocks = []
    w = z_c.coeffs
    for _ in range(p):
        # w <- w @ dp^-1, i.e. solve dp^T x^T = w^T
        w = lu_solve(lu, w.T, trans=1).T
        blocks.append(w)
    return np.vstack(blocks[::-1])


def solve_markov(
    y_c: CoefficientMatrix, Z: np.ndarray, u_c: CoefficientMatrix
) -> tuple[np.ndarray, np.ndarray, LsInfo]:
    """Joint least squares for the Markov-parameter row and the direct term.

    Returns (CK_p, D_hat, info) minimizing ||y - CK_p * Z - D * u||_F with a
    minimum-norm solution when the stacked regressors are rank deficient.
    """
    if Z.shape[1] != y_c.basis.n_c or u_c.basis.n_c != y_c.basis.n_c:
        raise ValueError("column counts of y, Z and u must agree")
    regressors = np.vstack([Z, u_c.coeffs])
    if not np.any(regressors):
        raise ValueError("Markov stage: unexcited system (zero regressor matrix)")
    theta, info = _min_norm_lstsq(regressors.T, y_c.coeffs.T)
    theta = theta.T
    ck_p = theta[:, : Z.shape[0]]
    d_hat = theta[:, Z.shape[0]:]
    return ck_p, d_hat, info


def assemble_gamma_k(ck_p: np.ndarray, p: int, f: int, n_u: int, n_y: int) -> np.ndarray:
    """Arrange the Markov blocks into the upper-triangular block matrix.

    Block row i starts with i zero blocks; block (i, j) for j >= i is block
    j - i of ``ck_p``. Blocks that would need powers beyond the past window
    are zero, consistent with the contraction assumption behind the method.
    """
    if f > p:
        raise ValueError("future window f must not exceed past window p")
    nz = n_u + n_y
    if ck_p.shape != (n_y, p * nz):
        raise ValueError(
            f"Markov matrix has shape {ck_p.shape}, expected {(n_y, p * nz)}"
        )
    gamma_k = np.zeros((f * n_y, p * nz))
    for i in range(f):
        for j in range(i, p):
            src = ck_p[:, (j - i) * nz: (j - i + 1) * nz]
            gamma_k[i * n_y: (i + 1) * n_y, j * nz: (j + 1) * nz] = src
    return gamma_k


def _auto_order(s: np.ndarray, threshold: float) -> int:
    if s.size < 2 or s[0] == 0.0:
        raise ValueError(
            f"state estimation stage: order undetermined; singular values {s.tolist()}"
        )
    with np.errstate(divide="ignore"):
        ratios = np.where(s[1:] > 0.0, s[:-1] / np.where(s[1:] > 0.0, s[1:], 1.0), np.inf)
    best = int(np.argmax(ratios))
    if not ratios[best] > threshold:
        raise ValueError(
            "state estimation stage: order undetermined "
            f"(largest singular-value ratio {ratios[best]:.3g} below threshold "
            f"{threshold:.3g}); singular values {s.tolist()}"
        )
    return best + 1


def estimate_states(
    gamma_k: np.ndarray,
    Z: np.ndarray,
    order: int | str,
    sv_gap_threshold: float = 10.0,
) -> tuple[np.ndarray, np.ndarray]:
    """SVD-based state coefficient estimate sqrt(S_n) V_n^T.

    Returns (x_hat, singular_values). The sign of each right singular
    vector is fixed so its largest-magnitude entry is positive, which makes
    the result deterministic across linear-algebra backends.
    """
    product = gamma_k @ Z
    _, s, vt = np.linalg.svd(product, full_matrices=False)
    if order == "auto":
        n = _auto_order(s, sv_gap_threshold)
    else:
        n = int(order)
        if not (1 <= n <= s.size):
            raise ValueError(
                f"state estimation stage: requested order {n} outside 1..{s.size}"
            )
    vn = vt[:n, :].copy()
    for i in range(n):
        j = int(np.argmax(np.abs(vn[i])))
        if vn[i, j] < 0.0:
            vn[i] = -vn[i]
    x_hat = np.sqrt(s[:n])[:, None] * vn
    return x_hat, s


def solve_output(
    y_c: CoefficientMatrix, x_hat: np.ndarray, d_hat: np.ndarray, u_c: CoefficientMatrix
) -> tuple[np.ndarray, LsInfo]:
    """Least squares for C with the direct term held fixed."""
    target = y_c.coeffs - d_hat @ u_c.coeffs
    sol, info = _min_norm_lstsq(x_hat.T, target.T)
    if info.rank < x_hat.shape[0]:
        warnings.warn(
            "output stage: state sequence rank-deficient, minimum-norm C returned",
            stacklevel=2,
        )
    return sol.T, info


def innovation_estimate(
    y_c: CoefficientMatrix,
    c_hat: np.ndarray,
    x_hat: np.ndarray,
    d_hat: np.ndarray,
    u_c: CoefficientMatrix,
) -> CoefficientMatrix:
    """Residual y - C x - D u in the coefficient domain."""
    return CoefficientMatrix(
        y_c.coeffs - c_hat @ x_hat - d_hat @ u_c.coeffs, y_c.basis
    )


def solve_system_matrices(
    x_hat: np.ndarray,
    dp: ModifiedOperator,
    u_c: CoefficientMatrix,
    e_hat: CoefficientMatrix,
    beta: float,
    gamma: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, LsInfo]:
    """Joint least squares for the continuous-time A, B and K.

    The target is gamma * x_hat @ dp - beta * x_hat and the regressors are
    the stacked state, input and innovation rows; the solution is already in
    continuous time, no back-transformation is applied.
    """
    n = x_hat.shape[0]
    n_u = u_c.n_f
    if np.linalg.matrix_rank(x_hat) < n:
        raise ValueError("system-matrix stage: state regressor block rank-deficient")
    if np.linalg.matrix_rank(u_c.coeffs) < n_u:
        raise ValueError("system-matrix stage: input regressor block rank-deficient")
    target = gamma * (x_hat @ dp.matrix) - beta * x_hat
    regressors = np.vstack([x_hat, u_c.coeffs, e_hat.coeffs])
    theta, info = _min_norm_lstsq(regressors.T, target.T)
    theta = theta.T
    a_hat = theta[:, :n]
    b_hat = theta[:, n: n + n_u]
    k_hat = theta[:, n + n_u:]
    return a_hat, b_hat, k_hat, info


def identify(u: SampledSignal, y: SampledSignal, cfg: IdentConfig) -> IdentResult:
    """Identify a continuous-time model from sampled input/output data.

    The input and output grids may differ in the interior but must share
    their first and last time instants. The identified matrices are unique
    only up to a similarity transformation of the state coordinates.
    """
    if abs(u.times[0] - y.times[0]) > 1e-9 or abs(u.times[-1] - y.times[-1]) > 1e-9:
        raise ValueError(
            "input and output recordings must share their first and last time instants"
        )
    spec = BasisSpec(cfg.n_max)
    u_scaled, scaling = shift_and_scale(u, spec)
    y_scaled, _ = shift_and_scale(y, spec)
    u_c = project(u_scaled, spec)
    y_c = project(y_scaled, spec)

    d_op = operators.derivative_operator(spec.n_c)
    dp = operators.modified_operator(d_op, scaling.alpha, cfg.beta, cfg.gamma)

    z_c = build_predictor_data(u_c, y_c)
    Z = build_Z(z_c, dp, cfg.p)
    ck_p, d_hat, ls_markov = solve_markov(y_c, Z, u_c)
    gamma_k = assemble_gamma_k(ck_p, cfg.p, cfg.f, u.n_f, y.n_f)
    x_hat, svals = estimate_states(gamma_k, Z, cfg.order, cfg.sv_gap_threshold)
    c_hat, ls_output = solve_output(y_c, x_hat, d_hat, u_c)
    e_hat = innovation_estimate(y_c, c_hat, x_hat, d_hat, u_c)
    innovation_deficient = (
        np.linalg.norm(e_hat.coeffs) <= _INNOVATION_TOL * np.linalg.norm(y_c.coeffs)
    )
    a_hat, b_hat, k_hat, ls_system = solve_system_matrices(
        x_hat, dp, u_c, e_hat, cfg.beta, cfg.gamma
    )

    with warnings.catch_warnings():
        # near-singular identified models are reported via diagnostics, not
        # construction-time warnings
        warnings.simplefilter("ignore")
        model = StateSpaceModel(A=a_hat, B=b_hat, C=c_hat, D=d_hat, K=k_hat)

    predictor = (a_hat - k_hat @ c_hat + cfg.beta * np.eye(a_hat.shape[0])) / cfg.gamma
    predictor_eigs = np.linalg.eigvals(predictor)
    diagnostics = {
        "alpha": scaling.alpha,
        "operator_condition": operators.condition_number(dp),
        "condition_numbers": {
            "markov": ls_markov.cond,
            "output": ls_output.cond,
            "system": ls_system.cond,
        },
        "residuals": {
            "markov": ls_markov.residual,
            "output": ls_output.residual,
            "system": ls_system.residual,
        },
        "predictor_eigenvalues": [complex(v) for v in predictor_eigs],
        "predictor_in_unit_circle": bool(np.all(np.abs(predictor_eigs) < 1.0)),
        "truncation_norm": float(
            np.linalg.norm(np.linalg.matrix_power(predictor, cfg.p), 2)
        ),
        "innovation_deficient": bool(innovation_deficient),
    }
    return IdentResult(
        model=model,
        singular_values=svals,
        x_hat=CoefficientMatrix(x_hat, spec),
        e_hat=e_hat,
        markov=ck_p,
        diagnostics=diagnostics,
    )
