"""Comparison of identified models against ground truth.

Eigenvalue pairing uses an optimal assignment restricted to the closed
upper half-plane and mirrored to the conjugates, so conjugate-symmetric
spectra stay conjugate-consistent. Monte Carlo bias/STD follow the
complex-mean conventions: bias is the modulus of the mean estimation error
and STD the root mean square modulus of deviations from the complex mean.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .lti import StateSpaceModel, frequency_response

_IMAG_TOL = 1e-9


@dataclass
class EigMatch:
    """Pairing of estimated and true eigenvalues.

    ``pairs`` holds (estimate, truth, |estimate - truth|); ``unmatched``
    collects values from either set left without a partner when the set
    sizes or structures differ.
    """

    pairs: list[tuple[complex, complex, float]]
    unmatched: list[complex]


@dataclass
class McStats:
    """Per-eigenvalue Monte Carlo statistics.

    ``std_defined`` is False when fewer than two trials contributed, in
    which case ``std`` is reported as 0.
    """

    eigenvalue: complex
    bias: float
    std: float
    trial_count: int
    failures: int
    std_defined: bool = True


def _canonical(v) -> complex:
    z = complex(v)
    if abs(z.imag) <= _IMAG_TOL * max(1.0, abs(z)):
        return complex(z.real, 0.0)
    return z


def _conjugate_partners(vals: list[complex]) -> list[int]:
    """Index of each value's conjugate partner (itself for reals)."""
    partner = [-1] * len(vals)
    for i, v in enumerate(vals):
        if partner[i] >= 0:
            continue
        if v.imag == 0.0:
            partner[i] = i
            continue
        best, best_dist = -1, np.inf
        for j, w in enumerate(vals):
            if j == i or partner[j] >= 0:
                continue
            dist = abs(w - v.conjugate())
            if dist < best_dist:
                best, best_dist = j, dist
        if best >= 0:
            partner[i] = best
            partner[best] = i
        else:
            partner[i] = i
    return partner


def _match_index_pairs(est: list[complex], truth: list[complex]) -> list[tuple[int, int]]:
    """Index pairs of the conjugate-consistent minimum-cost matching."""
    est_c = [_canonical(v) for v in est]
    truth_c = [_canonical(v) for v in truth]
    est_u = [i for i, v in enumerate(est_c) if v.imag >= 0.0]
    truth_u = [j for j, v in enumerate(truth_c) if v.imag >= 0.0]
    if not est_u or not truth_u:
        return []
    cost = np.array([[abs(est_c[i] - truth_c[j]) for j in truth_u] for i in est_u])
    rows, cols = linear_sum_assignment(cost)
    est_partner = _conjugate_partners(est_c)
    truth_partner = _conjugate_partners(truth_c)
    pairs: list[tuple[int, int]] = []
    truth_used = [False] * len(truth_c)
    for a, b in zip(rows, cols):
        i, j = est_u[a], truth_u[b]
        pairs.append((i, j))
        truth_used[j] = True
        pi, pj = est_partner[i], truth_partner[j]
        if (pi, pj) != (i, j) and not truth_used[pj]:
            pairs.append((pi, pj))
            truth_used[pj] = True
    return pairs


def match_eigenvalues(est, truth) -> EigMatch:
    """Pair estimated with true eigenvalues by minimum total distance.

    Matching is performed on the closed upper half-plane and mirrored to
    the conjugates, keeping conjugate pairs consistent; a real value may
    serve as partner for both halves of a complex pair when the structures
    differ.
    """
    est = [complex(v) for v in est]
    truth = [complex(v) for v in truth]
    idx_pairs = _match_index_pairs(est, truth)
    pairs = [(est[i], truth[j], abs(est[i] - truth[j])) for i, j in idx_pairs]
    est_used = {i for i, _ in idx_pairs}
    truth_used = {j for _, j in idx_pairs}
    unmatched = [v for i, v in enumerate(est) if i not in est_used]
    unmatched += [v for j, v in enumerate(truth) if j not in truth_used]
    return EigMatch(pairs=pairs, unmatched=unmatched)


def mc_statistics(trials, truth, include_failures: bool = False, error_count: int = 0) -> list[McStats]:
    """Bias and standard deviation of matched eigenvalues over trials.

    ``trials`` is a list of eigenvalue lists, one per successful trial;
    trials whose eigenvalue count differs from the truth are counted as
    failures and excluded unless ``include_failures`` is set.
    ``error_count`` adds trials that produced no estimate at all to the
    failure tally.
    """
    truth = [complex(v) for v in truth]
    per_eig: list[list[complex]] = [[] for _ in truth]
    failures = int(error_count)
    used_trials = 0
    for est in trials:
        est = [complex(v) for v in est]
        mismatched = len(est) != len(truth)
        if mismatched:
            failures += 1
            if not include_failures:
                continue
        for i, j in _match_index_pairs(est, truth):
            per_eig[j].append(est[i])
        used_trials += 1
    if used_trials == 0:
        raise ValueError("zero successful trials")
    stats = []
    for k, lam in enumerate(truth):
        vals = np.asarray(per_eig[k], dtype=complex)
        if vals.size == 0:
            stats.append(McStats(lam, float("nan"), 0.0, 0, failures, False))
            continue
        mean = vals.mean()
        bias = float(abs(mean - lam))
        if vals.size >= 2:
            std = float(np.sqrt(np.sum(np.abs(vals - mean) ** 2) / (vals.size - 1)))
            defined = True
        else:
            std = 0.0
            defined = False
        stats.append(McStats(lam, bias, std, int(vals.size), failures, defined))
    return stats


def frf_discrepancy(model_a: StateSpaceModel, model_b: StateSpaceModel, freqs) -> float:
    """Worst relative magnitude error between two frequency responses.

    Normalization is by the second model's magnitude (floored at 1e-12), so
    ``model_b`` acts as the reference.
    """
    if (model_a.n_y, model_a.n_u) != (model_b.n_y, model_b.n_u):
        raise ValueError("models must share input and output dimensions")
    g_a = frequency_response(model_a, freqs)
    g_b = frequency_response(model_b, freqs)
    denom = np.maximum(np.abs(g_b), 1e-12)
    return float(np.max(np.abs(g_a - g_b) / denom))
