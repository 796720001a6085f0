"""Hermite-domain differentiation operators.

The derivative of a truncated Hermite expansion is another expansion whose
coefficients are obtained by right-multiplying the coefficient rows with a
skew-symmetric tridiagonal matrix. A shifted/scaled variant of that matrix
keeps the downstream predictor recursion contractive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

# Roughly machine-epsilon headroom for the least-squares stages that consume
# the inverse powers.
CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class DerivativeOperator:
    """Tridiagonal matrix mapping coefficient rows to derivative coefficients.

    Acts from the right: ``coeffs @ matrix`` are the coefficients of the
    time derivative.
    """

    matrix: np.ndarray
    n_c: int


@dataclass(frozen=True)
class ModifiedOperator:
    """Shifted and scaled derivative operator (D/alpha + beta*I)/gamma."""

    matrix: np.ndarray
    alpha: float
    beta: float
    gamma: float

    @property
    def n_c(self) -> int:
        return self.matrix.shape[0]


def derivative_operator(n_c: int) -> DerivativeOperator:
    """Build the derivative operator truncated to n_c basis functions."""
    if n_c < 1:
        raise ValueError(f"operator size must be >= 1, got {n_c}")
    c = np.sqrt(np.arange(1, n_c) / 2.0)
    m = np.diag(-c, k=1) + np.diag(c, k=-1)
    m.setflags(write=False)
    return DerivativeOperator(matrix=m, n_c=n_c)


def modified_operator(d: DerivativeOperator, alpha: float, beta: float, gamma: float) -> ModifiedOperator:
    """Form (D/alpha + beta*I)/gamma entrywise."""
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    if beta < 0.0:
        raise ValueError("beta must be nonnegative")
    m = (d.matrix / alpha + beta * np.eye(d.n_c)) / gamma
    m.setflags(write=False)
    return ModifiedOperator(matrix=m, alpha=alpha, beta=beta, gamma=gamma)


def condition_number(m: ModifiedOperator) -> float:
    """2-norm condition number of the operator matrix."""
    return float(np.linalg.cond(m.matrix))


def factorization(m: ModifiedOperator):
    """LU factorization (with partial pivoting) of a well-conditioned operator.

    Raises if the matrix is singular or its condition number exceeds
    CONDITION_LIMIT; callers reuse the factorization across repeated solves
    instead of ever forming explicit inverses.
    """
    cond = condition_number(m)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise ValueError(
            f"operator ill-conditioned; increase beta (condition number {cond:.3e})"
        )
    return lu_factor(m.matrix)


def operator_power(m: ModifiedOperator, k: int) -> np.ndarray:
    """k-th matrix power; k = 0 gives the identity."""
    if k < 0:
        raise ValueError("power must be nonnegative")
    return np.linalg.matrix_power(m.matrix, k)


def operator_inverse_power(m: ModifiedOperator, k: int) -> np.ndarray:
    """k-th inverse power, one factorization reused for all k solves."""
    if k < 1:
        raise ValueError("inverse power must be >= 1")
    lu = factorization(m)
    x = np.eye(m.n_c)
    for _ in range(k):
        x = lu_solve(lu, x)
    return x
