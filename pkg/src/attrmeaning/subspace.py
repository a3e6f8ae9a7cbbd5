"""Reconstruction distances between attribute sets and a meaningful subspace.

The meaningful subspace is a matrix S (n_instances x J) of human-labelled
{-1, +1} attributes.  A discovered attribute column z is scored by how well
the columns of S reconstruct it:

* unconstrained:  min_r ||S r - z||^2, solved by rank-revealing least squares;
* convex:         the same objective with r restricted to the probability
  simplex (r_i >= 0, sum r_i = 1), solved by projected gradient descent.

Distances over a whole discovered matrix are the per-column residuals
averaged.  Lower means the discovered attributes lie closer to (the hull of)
the labelled ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .attributes import as_attribute_matrix, as_attribute_vector

__all__ = [
    "SolverConfig",
    "SimplexFit",
    "ReconstructionResult",
    "reconstruct_ls",
    "distance_plain",
    "project_simplex",
    "reconstruct_cvx",
    "distance_cvx",
    "brute_force_cvx_oracle",
    "rank_methods",
]

# residual at or below this is treated as an exact-zero optimum: the relative
# objective-change test cannot trigger on a geometric decay to 0
_ZERO_OBJECTIVE = 1e-12

# slack for the per-iteration monotone-descent check (debug builds only)
_DESCENT_SLACK = 1e-10


@dataclass(frozen=True)
class SolverConfig:
    """Settings for the projected-gradient simplex solver.

    max_iterations : hard cap on gradient steps.
    objective_tolerance : relative objective-change threshold for convergence.
    step_rule : how the step size is chosen; only "lipschitz" (constant
        1 / lambda_max of A^T A) is implemented.
    """

    max_iterations: int = 10_000
    objective_tolerance: float = 1e-8
    step_rule: str = "lipschitz"

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not (0.0 < self.objective_tolerance < 1.0):
            raise ValueError(
                f"objective_tolerance must be in (0, 1), got {self.objective_tolerance}"
            )
        if self.step_rule != "lipschitz":
            raise ValueError(f"unknown step_rule: {self.step_rule!r}")


@dataclass(frozen=True)
class SimplexFit:
    """One convex reconstruction: coefficients on the simplex plus residual."""

    coefficients: np.ndarray  # (J,) nonnegative, sums to 1
    residual: float  # ||A r - z||^2 at the returned coefficients
    converged: bool
    iterations: int


@dataclass(frozen=True)
class ReconstructionResult:
    """Distance of a discovered attribute matrix from a meaningful subspace.

    coefficients : (J, K) reconstruction weights, one column per discovered
        attribute.
    per_attribute_residuals : (K,) squared residual of each column.
    mean_distance : average of the per-attribute residuals.
    normalized_distance : mean_distance divided by the instance count.
    mode : "plain" for unconstrained least squares, "cvx" for the
        simplex-constrained solve.
    converged : per-column solver convergence flags ("cvx" mode only).
    """

    coefficients: np.ndarray
    per_attribute_residuals: np.ndarray
    mean_distance: float
    normalized_distance: float
    mode: str
    converged: tuple[bool, ...] | None = field(default=None)


def _lstsq_rcond(n: int, j: int) -> float:
    # singular values below max(N, J) * eps * sigma_max are treated as zero
    return max(n, j) * np.finfo(np.float64).eps


def reconstruct_ls(A, z) -> tuple[np.ndarray, float]:
    """Unconstrained least-squares reconstruction of one attribute column.

    Solves min_r ||A r - z||_2^2 with the minimum-norm solution when A is
    rank deficient (duplicate or dependent labelled attributes are common).

    Parameters
    ----------
    A : (N, J) {-1, +1} matrix of labelled attributes.
    z : (N,) {-1, +1} attribute column to reconstruct.

    Returns
    -------
    r : (J,) reconstruction coefficients.
    residual : float, ||A r - z||_2^2.
    """
    A = as_attribute_matrix(A)
    z = as_attribute_vector(z)
    if A.shape[0] != z.shape[0]:
        raise ValueError(
            f"row count mismatch: subspace has {A.shape[0]} rows, "
            f"attribute has {z.shape[0]}"
        )
    Af = A.astype(np.float64)
    zf = z.astype(np.float64)
    r, _, _, _ = np.linalg.lstsq(Af, zf, rcond=_lstsq_rcond(*A.shape))
    resid = float(np.sum((Af @ r - zf) ** 2))
    if not np.isfinite(resid):
        raise FloatingPointError("least-squares residual is not finite")
    return r, resid


def _as_pair(S, D):
    S = as_attribute_matrix(S)
    D = as_attribute_matrix(D)
    if S.shape[0] != D.shape[0]:
        raise ValueError(
            f"row count mismatch: subspace has {S.shape[0]} rows, "
            f"discovered set has {D.shape[0]}"
        )
    return S, D


def distance_plain(S, D) -> ReconstructionResult:
    """Mean unconstrained reconstruction distance of D's columns from S.

    delta = (1/K) * sum_k min_r ||S r - D[:, k]||^2, realized column by
    column via :func:`reconstruct_ls`.
    """
    S, D = _as_pair(S, D)
    n, j = S.shape
    k = D.shape[1]
    R = np.empty((j, k), dtype=np.float64)
    resid = np.empty(k, dtype=np.float64)
    for col in range(k):
        R[:, col], resid[col] = reconstruct_ls(S, D[:, col])
    mean = float(resid.mean())
    return ReconstructionResult(
        coefficients=R,
        per_attribute_residuals=resid,
        mean_distance=mean,
        normalized_distance=mean / n,
        mode="plain",
    )


def project_simplex(v) -> np.ndarray:
    """Euclidean projection of a vector onto the probability simplex.

    Sort-and-threshold algorithm: with u the entries of v in descending
    order, find the largest rho such that u_rho + (1 - sum_{i<=rho} u_i) /
    rho > 0, shift by that amount and clip at zero.  O(J log J).

    The output is nonnegative and sums to 1 (up to float accumulation).
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"input must be 1-d, got ndim={v.ndim}")
    if v.shape[0] < 1:
        raise ValueError("input must be non-empty")
    if not np.isfinite(v).all():
        raise ValueError("input contains non-finite entries")
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    ranks = np.arange(1, v.shape[0] + 1, dtype=np.float64)
    rho = np.nonzero(u + (1.0 - css) / ranks > 0.0)[0][-1]
    theta = (1.0 - css[rho]) / (rho + 1.0)
    return np.maximum(v + theta, 0.0)


def _power_iteration_lmax(M: np.ndarray) -> float:
    # largest eigenvalue of a PSD matrix; deterministic seeded start so the
    # step size (and hence the whole solve) is reproducible
    j = M.shape[0]
    rng = np.random.default_rng(1729)
    v = rng.standard_normal(j)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(2000):
        w = M @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            break
        v = w / norm
        lam_new = float(v @ (M @ v))
        if abs(lam_new - lam) <= 1e-13 * max(1.0, abs(lam_new)):
            lam = lam_new
            break
        lam = lam_new
    if lam <= 0.0:
        # PSD trace bounds the spectral radius from above
        lam = float(np.trace(M))
    return lam


def _pgd_simplex(AtA, Atz, Af, zf, config: SolverConfig, lmax: float) -> SimplexFit:
    j = AtA.shape[0]
    r = np.full(j, 1.0 / j)
    obj = float(np.sum((Af @ r - zf) ** 2))
    step = 1.0 / lmax
    converged = False
    iterations = 0
    for it in range(config.max_iterations):
        grad = AtA @ r - Atz
        r_new = project_simplex(r - step * grad)
        obj_new = float(np.sum((Af @ r_new - zf) ** 2))
        if not np.isfinite(obj_new):
            raise FloatingPointError("projected-gradient objective is not finite")
        assert obj_new <= obj + _DESCENT_SLACK, (
            f"objective increased: {obj} -> {obj_new}"
        )
        rel = abs(obj - obj_new) / max(obj, _ZERO_OBJECTIVE)
        r, obj = r_new, obj_new
        iterations = it + 1
        if rel < config.objective_tolerance or obj <= _ZERO_OBJECTIVE:
            converged = True
            break
    return SimplexFit(
        coefficients=r, residual=obj, converged=converged, iterations=iterations
    )


def reconstruct_cvx(A, z, config: SolverConfig | None = None) -> SimplexFit:
    """Simplex-constrained reconstruction of one attribute column.

    Solves min_r ||A r - z||^2 subject to r_i >= 0 and sum_i r_i = 1 by
    projected gradient descent: uniform start, fixed step 1 / lambda_max of
    A^T A (power iteration), Euclidean simplex projection each step.  Stops
    when the relative objective change drops below
    ``config.objective_tolerance``, when the objective is exactly-zero small,
    or when iterations are exhausted (the result is still returned, with
    ``converged`` False).

    Every iterate is the output of the projection, so the returned
    coefficients satisfy the constraints regardless of convergence.
    """
    A = as_attribute_matrix(A)
    z = as_attribute_vector(z)
    if A.shape[0] != z.shape[0]:
        raise ValueError(
            f"row count mismatch: subspace has {A.shape[0]} rows, "
            f"attribute has {z.shape[0]}"
        )
    config = config or SolverConfig()
    Af = A.astype(np.float64)
    zf = z.astype(np.float64)
    AtA = Af.T @ Af
    lmax = _power_iteration_lmax(AtA)
    return _pgd_simplex(AtA, Af.T @ zf, Af, zf, config, lmax)


def distance_cvx(S, D, config: SolverConfig | None = None) -> ReconstructionResult:
    """Mean convex-hull reconstruction distance of D's columns from S.

    Same aggregation as :func:`distance_plain`, but each column is fit with
    simplex-constrained coefficients, so the distance measures how far each
    discovered attribute sits from the convex hull of the labelled ones.
    """
    S, D = _as_pair(S, D)
    config = config or SolverConfig()
    n, j = S.shape
    k = D.shape[1]
    Sf = S.astype(np.float64)
    StS = Sf.T @ Sf
    lmax = _power_iteration_lmax(StS)
    R = np.empty((j, k), dtype=np.float64)
    resid = np.empty(k, dtype=np.float64)
    flags = []
    for col in range(k):
        zf = D[:, col].astype(np.float64)
        fit = _pgd_simplex(StS, Sf.T @ zf, Sf, zf, config, lmax)
        R[:, col] = fit.coefficients
        resid[col] = fit.residual
        flags.append(fit.converged)
    mean = float(resid.mean())
    return ReconstructionResult(
        coefficients=R,
        per_attribute_residuals=resid,
        mean_distance=mean,
        normalized_distance=mean / n,
        mode="cvx",
        converged=tuple(flags),
    )


def _simplex_grid(j: int, divisions: int) -> np.ndarray:
    # all compositions of `divisions` into j nonnegative parts, scaled to sum 1
    points = []
    for cuts in combinations(range(divisions + j - 1), j - 1):
        prev = -1
        parts = []
        for c in cuts:
            parts.append(c - prev - 1)
            prev = c
        parts.append(divisions + j - 2 - prev)
        points.append(parts)
    return np.asarray(points, dtype=np.float64) / divisions


def brute_force_cvx_oracle(A, z, grid_step: float = 0.01) -> float:
    """Grid-search reference objective for the simplex-constrained solve.

    Enumerates every point of the regular simplex grid with spacing
    ``grid_step`` (rounded to the nearest 1/m) and returns the minimum of
    ||A r - z||^2 over them.  Exponential in J, so only J <= 4 is allowed;
    this exists to validate the iterative solver on small problems, not for
    production use.
    """
    A = as_attribute_matrix(A)
    z = as_attribute_vector(z)
    if A.shape[0] != z.shape[0]:
        raise ValueError(
            f"row count mismatch: subspace has {A.shape[0]} rows, "
            f"attribute has {z.shape[0]}"
        )
    if A.shape[1] > 4:
        raise ValueError(
            f"brute-force search is limited to J <= 4 columns, got {A.shape[1]}"
        )
    if not (0.0 < grid_step <= 0.1):
        raise ValueError(f"grid_step must be in (0, 0.1], got {grid_step}")
    divisions = int(round(1.0 / grid_step))
    grid = _simplex_grid(A.shape[1], divisions)  # (P, J)
    Af = A.astype(np.float64)
    zf = z.astype(np.float64)
    resid = np.sum((grid @ Af.T - zf) ** 2, axis=1)
    return float(resid.min())


def rank_methods(entries, S, config: SolverConfig | None = None):
    """Order named attribute sets by convex reconstruction distance.

    Parameters
    ----------
    entries : sequence of (name, attribute_matrix) pairs.
    S : meaningful subspace shared by all entries.

    Returns
    -------
    list of (name, mean_distance), ascending by distance with name as the
    deterministic tie-break.
    """
    entries = list(entries)
    if not entries:
        raise ValueError("at least one named attribute set is required")
    scored = []
    for name, D in entries:
        result = distance_cvx(S, D, config)
        scored.append((str(name), result.mean_distance))
    scored.sort(key=lambda pair: (pair[1], pair[0]))
    return scored
