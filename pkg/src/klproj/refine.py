"""Gradient ascent on retained divergence, without orthogonality constraints.

The retained divergence f(A) = kld_projected(A, p1, p2) is differentiable in
the projection matrix A wherever both projected covariances stay positive
definite, and is invariant under row-space-preserving changes A -> T A, so
ascent explores subspaces even though it moves through matrices.  The
closed-form constructions are excellent starting points; ascent either
certifies them (no improvement) or squeezes out the remainder.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_solve

from .errors import NotPositiveDefinite, NumericalError, RankDeficient
from .gaussian import GaussianParams, _check_projection, _check_same_dim, _cholesky, kld_projected


@dataclass(frozen=True)
class AscentOptions:
    """Adam hyperparameters and stopping rules.

    Stopping is plateau based: after ``patience`` iterations, the run
    converges once the objective gain over the last ``patience`` steps drops
    below ``rel_tol`` relative to the objective scale.  ``seed`` only feeds
    random_initial_matrix when a caller starts from scratch.
    """

    learning_rate: float = 1e-2
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    max_iters: int = 5000
    rel_tol: float = 1e-9
    patience: int = 50
    seed: int = 0


@dataclass(frozen=True)
class AscentTrace:
    """Objective path of one ascent run.

    ``iterates`` holds (iteration, objective) pairs where each objective is
    exactly kld_projected at that iterate; ``final_matrix`` is the
    best-objective iterate encountered (so the final objective never falls
    below the initial one).  ``reason`` is "plateau", "max_iters", or
    "singular_boundary" when a step could not be shrunk back into the
    positive definite region.
    """

    iterates: list = field(repr=False)
    final_matrix: np.ndarray = field(repr=False)
    converged: bool = False
    iterations_run: int = 0
    reason: str = "max_iters"


def kld_gradient(a, p1: GaussianParams, p2: GaussianParams) -> np.ndarray:
    """Gradient of kld_projected with respect to the projection matrix.

    With M_k = A S_k A^T, delta = m2 - m1, and w = M2^-1 A delta:

        grad = M2^-1 A S2 - M1^-1 A S1 + M2^-1 A S1
               - M2^-1 M1 M2^-1 A S2 + w delta^T - w w^T A S2.

    The derivation mirrors the three terms of the divergence (log-determinant
    ratio, trace, Mahalanobis); central finite differences reproduce it to
    first order and serve as the ground truth in the test suite.
    """
    d = _check_same_dim(p1, p2)
    a = _check_projection(a, d)
    as1 = a @ p1.covariance
    as2 = a @ p2.covariance
    m1 = as1 @ a.T
    m2 = as2 @ a.T
    l1 = _cholesky((m1 + m1.T) / 2.0, "first projected covariance")
    l2 = _cholesky((m2 + m2.T) / 2.0, "second projected covariance")
    delta = p2.mean - p1.mean
    w = cho_solve((l2, True), a @ delta)
    x2 = cho_solve((l2, True), as2)
    grad = (
        x2
        - cho_solve((l1, True), as1)
        + cho_solve((l2, True), as1)
        - cho_solve((l2, True), m1 @ x2)
        + np.outer(w, delta)
        - np.outer(w, as2.T @ w)
    )
    return grad


def finite_difference_gradient(a, p1: GaussianParams, p2: GaussianParams, h: float = 1e-5) -> np.ndarray:
    """Central-difference gradient of kld_projected, entry by entry."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    grad = np.zeros_like(a)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            bump = np.zeros_like(a)
            bump[i, j] = h
            grad[i, j] = (
                kld_projected(a + bump, p1, p2) - kld_projected(a - bump, p1, p2)
            ) / (2.0 * h)
    return grad


def random_initial_matrix(r: int, d: int, seed: int) -> np.ndarray:
    """Standard normal r x d matrix with rows rescaled to unit norm."""
    rng = np.random.Generator(np.random.Philox(seed))
    a = rng.standard_normal((r, d))
    return a / np.linalg.norm(a, axis=1, keepdims=True)


def gradient_ascent(
    a0,
    p1: GaussianParams,
    p2: GaussianParams,
    options: AscentOptions | None = None,
) -> AscentTrace:
    """Maximize retained divergence from a0 with Adam.

    A proposed update that pushes a projected covariance out of the positive
    definite cone (or the objective out of the finite range) is halved up to
    20 times; if no scale of it is admissible the run stops with
    converged=False and reason "singular_boundary".  The returned
    final_matrix is the best iterate seen, so refinement never loses ground
    against its starting point.
    """
    opts = options or AscentOptions()
    a = np.array(np.atleast_2d(np.asarray(a0, dtype=float)))
    f = kld_projected(a, p1, p2)
    best_f, best_a = f, a.copy()
    values = [f]
    iterates = [(0, f)]
    m = np.zeros_like(a)
    v = np.zeros_like(a)
    converged = False
    reason = "max_iters"
    t_done = 0
    for t in range(1, opts.max_iters + 1):
        g = kld_gradient(a, p1, p2)
        m = opts.beta1 * m + (1.0 - opts.beta1) * g
        v = opts.beta2 * v + (1.0 - opts.beta2) * g * g
        m_hat = m / (1.0 - opts.beta1**t)
        v_hat = v / (1.0 - opts.beta2**t)
        step = opts.learning_rate * m_hat / (np.sqrt(v_hat) + opts.eps)

        f_new = None
        for _ in range(21):
            try:
                candidate = kld_projected(a + step, p1, p2)
            except (NotPositiveDefinite, RankDeficient, NumericalError):
                candidate = None
            if candidate is not None and np.isfinite(candidate):
                f_new = candidate
                break
            step = step / 2.0
        if f_new is None:
            reason = "singular_boundary"
            t_done = t
            break

        a = a + step
        f = f_new
        values.append(f)
        iterates.append((t, f))
        if f > best_f:
            best_f, best_a = f, a.copy()
        t_done = t
        if t >= opts.patience:
            anchor = values[t - opts.patience]
            if f - anchor <= opts.rel_tol * max(1.0, abs(anchor)):
                converged = True
                reason = "plateau"
                break
    return AscentTrace(
        iterates=iterates,
        final_matrix=best_a,
        converged=converged,
        iterations_run=t_done,
        reason=reason,
    )
