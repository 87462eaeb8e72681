"""Closed-form discriminative linear projections for Gaussian classes.

Two complementary constructions reduce d dimensions to r while retaining as
much Kullback-Leibler divergence between two Gaussian classes as possible:

* ``mean_first_projection`` (reported under the method tag ``alg1``) spends
  its first row on the Fisher-style discriminant direction S2^-1 (m2 - m1)
  and fills the rest with generalized eigenvectors of the covariance pencil
  (S2, S1) ranked by their variance-ratio score.  Best when the mean
  separation dominates.

* ``whitened_component_projection`` (method tag ``alg2``) whitens by class 1,
  eigendecomposes the whitened class-2 covariance, and keeps the r
  directions with the largest one-dimensional divergences.  The retained
  divergence is exactly the sum of the selected per-direction scores, and
  with r = d the sum recovers the full divergence.  Best when covariance
  differences dominate.

A simple ratio of the mean and covariance parts of the divergence
(``select_regime``) decides which construction to trust at a given r, and
``fit_auto`` acts on that rule.  Baselines (``lda_direction``,
``lol_projection``), the multiclass reduction ``multiclass_lda``, and the
divergence-order diagnostic ``equal_mean_order_check`` round out the module.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve

from . import linalg
from .errors import (
    DimensionMismatch,
    EqualMeans,
    IdenticalDistributions,
    NumericalError,
    RankDeficientMeans,
    UnequalMeans,
)
from .gaussian import (
    GaussianParams,
    _cholesky,
    component_kld,
    g_score,
    kld_projected,
    kld_split,
)

# Class means closer than MEANS_RTOL * max(1, |m1|, |m2|) count as equal for
# the constructions that treat the mean direction specially.
MEANS_RTOL = 1e-12

# Looser equality used by the order-invariance diagnostic, which only makes
# sense when the means genuinely coincide.
EQUAL_MEANS_CHECK_RTOL = 1e-10

FRAME_ORIGINAL = "original"
FRAME_WHITENED = "whitened-by-class1"


@dataclass(frozen=True)
class ProjectionResult:
    """A fitted r x d projection and its bookkeeping.

    ``matrix`` rows are the projection directions expressed in ``frame``;
    for the whitened frame, ``matrix_original`` carries the equivalent
    original-frame rows (orthonormalized).  ``achieved_kld`` is the
    divergence retained by the projection, and ``component_scores`` the
    per-direction scores a construction ranked by, when it has any.
    """

    matrix: np.ndarray
    frame: str
    method: str
    achieved_kld: float
    component_scores: tuple | None = None
    matrix_original: np.ndarray | None = None
    warnings: tuple = ()

    @property
    def r(self) -> int:
        return self.matrix.shape[0]

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def in_original_frame(self) -> np.ndarray:
        """Projection rows expressed in the original coordinates."""
        if self.frame == FRAME_ORIGINAL:
            return self.matrix
        return self.matrix_original


@dataclass(frozen=True)
class RegimeReport:
    """Mean/covariance divergence split and the construction it favors.

    ``recommendation`` is "alg1" when d_mu >= d_sigma / (r - 1), "alg2" when
    it falls short, and "compare_both" at r = 1 where the rule is
    uninformative (threshold +inf).
    """

    d_mu: float
    d_sigma: float
    r: int
    threshold: float
    recommendation: str


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------


def _check_r(r: int, d: int) -> int:
    r = int(r)
    if not 1 <= r <= d:
        raise DimensionMismatch(f"target dimension r={r} must satisfy 1 <= r <= {d}")
    return r


def _means_equal(p1: GaussianParams, p2: GaussianParams, rtol: float = MEANS_RTOL) -> bool:
    scale = max(1.0, np.linalg.norm(p1.mean), np.linalg.norm(p2.mean))
    return np.linalg.norm(p2.mean - p1.mean) <= rtol * scale


def _ranked(scores: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Indices sorted by score descending; ties prefer larger |lam - 1|, then lower index."""
    idx = np.arange(lam.size)
    return np.lexsort((idx, -np.abs(lam - 1.0), -scores))


def _greedy_fill(rows: list[np.ndarray], candidates: np.ndarray, order: np.ndarray,
                 scores: np.ndarray, r: int) -> tuple[list[np.ndarray], list[float]]:
    """Append candidate columns (in ranked order) keeping the stack full rank."""
    picked_scores: list[float] = []
    for j in order:
        if len(rows) == r:
            break
        trial = np.vstack(rows + [candidates[:, j]]) if rows else candidates[:, j][None, :]
        if linalg.numerical_rank(trial) == len(rows) + 1:
            rows.append(candidates[:, j])
            picked_scores.append(float(scores[j]))
    if len(rows) < r:
        raise NumericalError(f"could not assemble {r} independent projection rows")
    return rows, picked_scores


def _basis_with_first_row(v: np.ndarray) -> np.ndarray:
    """Orthogonal d x d matrix whose first row is the unit vector v (Householder)."""
    d = v.shape[0]
    u = v - np.eye(d)[0]
    nu = np.linalg.norm(u)
    if nu < 1e-12:
        return np.eye(d)
    return np.eye(d) - 2.0 * np.outer(u, u) / nu**2


# ---------------------------------------------------------------------------
# two-class constructions
# ---------------------------------------------------------------------------


def lda_direction(p1: GaussianParams, p2: GaussianParams) -> ProjectionResult:
    """Fisher discriminant row: ((S1 + S2)/2)^-1 (m2 - m1), unit normalized.

    With equal covariances this single direction retains the full divergence;
    in general it is the classical linear baseline.  Requires distinct means.
    """
    if p1.dim != p2.dim:
        raise DimensionMismatch(f"class dimensions differ: {p1.dim} vs {p2.dim}")
    if _means_equal(p1, p2):
        raise EqualMeans("class means coincide; the discriminant direction is undefined")
    pooled = (p1.covariance + p2.covariance) / 2.0
    l = _cholesky(pooled, "pooled covariance")
    w = cho_solve((l, True), p2.mean - p1.mean)
    row = (w / np.linalg.norm(w))[None, :]
    return ProjectionResult(
        matrix=row,
        frame=FRAME_ORIGINAL,
        method="lda",
        achieved_kld=kld_projected(row, p1, p2),
    )


def mean_first_projection(p1: GaussianParams, p2: GaussianParams, r: int) -> ProjectionResult:
    """Discriminant direction first, then top covariance-contrast directions.

    Row 1 is S2^-1 (m2 - m1); rows 2..r are generalized eigenvectors of the
    pencil (S2, S1) ranked by g_score of their eigenvalue.  The stack is QR
    orthonormalized; a candidate that is numerically dependent on the rows
    already chosen is skipped in favor of the next-ranked one.  When the
    means coincide the discriminant row is dropped (with a warning) and all
    r rows come from the pencil.  Reported under the method tag "alg1".
    """
    if p1.dim != p2.dim:
        raise DimensionMismatch(f"class dimensions differ: {p1.dim} vs {p2.dim}")
    r = _check_r(r, p1.dim)
    pencil = linalg.generalized_eig(p2.covariance, p1.covariance)
    scores = g_score(pencil.eigenvalues)
    order = _ranked(scores, pencil.eigenvalues)

    warnings: tuple = ()
    rows: list[np.ndarray] = []
    if _means_equal(p1, p2):
        warnings = (
            "class means coincide; the discriminant row is undefined and was "
            "replaced by the next covariance-contrast direction",
        )
    else:
        l2 = _cholesky(p2.covariance, "second covariance")
        rows.append(cho_solve((l2, True), p2.mean - p1.mean))
    rows, picked = _greedy_fill(rows, pencil.eigenvectors, order, scores, r)
    matrix = linalg.orthonormalize_rows(np.vstack(rows))
    return ProjectionResult(
        matrix=matrix,
        frame=FRAME_ORIGINAL,
        method="alg1",
        achieved_kld=kld_projected(matrix, p1, p2),
        component_scores=tuple(picked),
        warnings=warnings,
    )


def whitened_component_projection(p1: GaussianParams, p2: GaussianParams, r: int) -> ProjectionResult:
    """Top-r one-dimensional divergences in the class-1 whitened frame.

    With S = S1^-1/2, the whitened pair is N(0, I) vs N(S (m2 - m1),
    S S2 S).  Eigendirections u_i of the whitened covariance decouple the
    divergence into independent one-dimensional pieces scored by
    component_kld(u_i . mean, lambda_i); the projection keeps the r largest.
    ``matrix`` holds the (orthonormal) whitened-frame rows u_i and
    ``matrix_original`` the equivalent original-frame rows u_i^T S,
    orthonormalized.  ``achieved_kld`` is the sum of the selected scores,
    which at r = d equals the full divergence.  Reported under the method
    tag "alg2".

    When the whitened covariance is the identity (Frobenius distance below
    1e-8 * d) only the mean direction matters: the first row is the whitened
    mean direction, completed by any orthonormal complement, retaining
    |S (m2 - m1)|^2 / 2.  If that mean offset is below 1e-12 as well, the
    classes are numerically identical and no projection is meaningful.
    """
    if p1.dim != p2.dim:
        raise DimensionMismatch(f"class dimensions differ: {p1.dim} vs {p2.dim}")
    d = p1.dim
    r = _check_r(r, d)
    s = linalg.spd_inv_sqrt(p1.covariance)
    mu_t = s @ (p2.mean - p1.mean)
    sig_t = s @ p2.covariance @ s
    sig_t = (sig_t + sig_t.T) / 2.0

    if np.linalg.norm(sig_t - np.eye(d)) < 1e-8 * d:
        offset = float(np.linalg.norm(mu_t))
        if offset < 1e-12:
            raise IdenticalDistributions(
                "classes are numerically indistinguishable after whitening"
            )
        basis = _basis_with_first_row(mu_t / offset)
        matrix = basis[:r]
        picked = (0.5 * offset**2,) + (0.0,) * (r - 1)
        achieved = 0.5 * offset**2
    else:
        eig = linalg.sym_eig(sig_t)
        m = eig.eigenvectors.T @ mu_t
        scores = component_kld(m, eig.eigenvalues)
        sel = _ranked(scores, eig.eigenvalues)[:r]
        matrix = eig.eigenvectors[:, sel].T
        picked = tuple(float(v) for v in scores[sel])
        achieved = float(np.sum(scores[sel]))
    return ProjectionResult(
        matrix=matrix,
        frame=FRAME_WHITENED,
        method="alg2",
        achieved_kld=achieved,
        component_scores=picked,
        matrix_original=linalg.orthonormalize_rows(matrix @ s),
    )


# ---------------------------------------------------------------------------
# regime rule
# ---------------------------------------------------------------------------


def regime_recommendation(d_mu: float, d_sigma: float, r: int) -> tuple[str, float]:
    """Apply the mean-vs-covariance rule; returns (recommendation, threshold).

    The mean-first construction devotes one of its r rows to the mean
    direction, so it pays off when d_mu outweighs the d_sigma the remaining
    r - 1 rows must cover: recommend "alg1" iff d_mu >= d_sigma / (r - 1).
    At r = 1 the threshold is +inf and the honest answer is to run both
    constructions and keep the better ("compare_both").
    """
    if r < 1:
        raise DimensionMismatch(f"target dimension r={r} must be >= 1")
    if r == 1:
        return "compare_both", math.inf
    threshold = d_sigma / (r - 1)
    return ("alg1" if d_mu >= threshold else "alg2"), threshold


def select_regime(p1: GaussianParams, p2: GaussianParams, r: int) -> RegimeReport:
    """Split the divergence and recommend a construction for this r."""
    split = kld_split(p1, p2)
    recommendation, threshold = regime_recommendation(split.d_mu, split.d_sigma, int(r))
    return RegimeReport(
        d_mu=split.d_mu,
        d_sigma=split.d_sigma,
        r=int(r),
        threshold=threshold,
        recommendation=recommendation,
    )


def fit_auto(p1: GaussianParams, p2: GaussianParams, r: int, mode: str = "rule") -> ProjectionResult:
    """Fit a projection, choosing the construction automatically.

    mode "rule" follows select_regime (running both constructions when it
    says "compare_both"); mode "compare" always runs both and returns the
    larger retained divergence.  Ties go to the mean-first construction.
    """
    if mode not in ("rule", "compare"):
        raise ValueError(f"mode must be 'rule' or 'compare', got {mode!r}")
    if mode == "rule":
        report = select_regime(p1, p2, r)
        if report.recommendation == "alg1":
            return mean_first_projection(p1, p2, r)
        if report.recommendation == "alg2":
            return whitened_component_projection(p1, p2, r)
    first = mean_first_projection(p1, p2, r)
    second = whitened_component_projection(p1, p2, r)
    return first if first.achieved_kld >= second.achieved_kld else second


# ---------------------------------------------------------------------------
# multiclass and baselines
# ---------------------------------------------------------------------------


def multiclass_lda(params: list[GaussianParams], r: int | None = None) -> ProjectionResult:
    """Between-means reduction for K classes sharing a covariance.

    With S_mu the scatter of the class means about their average and S the
    common covariance (the average of the supplied covariances), the rows
    are the generalized eigendirections of (S_mu, S) with nonzero
    eigenvalue.  For classes that truly share S, the K-1 such directions
    preserve every pairwise divergence exactly.  ``achieved_kld`` totals the
    projected divergence over ordered class pairs; ``component_scores``
    carries the between/within eigenvalues.

    Collinear class means leave fewer than the requested number of
    directions: the achievable subspace is returned with a warning, and
    coinciding means (no directions at all) raise RankDeficientMeans.
    """
    if len(params) < 2:
        raise DimensionMismatch(f"need at least 2 classes, got {len(params)}")
    d = params[0].dim
    for p in params[1:]:
        if p.dim != d:
            raise DimensionMismatch("classes live in different dimensions")
    k = len(params)
    r = _check_r(k - 1 if r is None else r, d)

    sigma = np.mean([p.covariance for p in params], axis=0)
    means = np.stack([p.mean for p in params])
    centered = means - means.mean(axis=0)
    s_mu = centered.T @ centered

    s = linalg.spd_inv_sqrt(sigma)
    eig = linalg.sym_eig(s @ s_mu @ s)
    lam = eig.eigenvalues
    available = int(np.count_nonzero(lam > linalg.RANK_RTOL * max(lam[0], 0.0)))
    if available == 0:
        raise RankDeficientMeans("all class means coincide; no between-means direction exists")

    warnings: tuple = ()
    if available < r:
        warnings = (
            f"class means span only {available} directions; returning "
            f"{available} rows instead of {r}",
        )
        r = available
    matrix = linalg.orthonormalize_rows((s @ eig.eigenvectors[:, :r]).T)
    achieved = sum(
        kld_projected(matrix, params[i], params[j])
        for i in range(k)
        for j in range(k)
        if i != j
    )
    return ProjectionResult(
        matrix=matrix,
        frame=FRAME_ORIGINAL,
        method="multiclass_lda",
        achieved_kld=float(achieved),
        component_scores=tuple(float(v) for v in lam[:r]),
        warnings=warnings,
    )


def lol_projection(
    p1: GaussianParams,
    p2: GaussianParams,
    r: int,
    pooled_cov: np.ndarray | None = None,
) -> ProjectionResult:
    """Mean difference plus top principal directions of the pooled covariance.

    The classical low-rank baseline: row 1 is m2 - m1 and rows 2..r are the
    leading eigenvectors of the pooled covariance (the average of the class
    covariances unless one is supplied), orthonormalized.  Principal
    directions do not target discrimination, so this often retains far less
    divergence than the divergence-aware constructions.  Equal means drop
    the first row with a warning.
    """
    if p1.dim != p2.dim:
        raise DimensionMismatch(f"class dimensions differ: {p1.dim} vs {p2.dim}")
    r = _check_r(r, p1.dim)
    pooled = (
        (p1.covariance + p2.covariance) / 2.0
        if pooled_cov is None
        else np.asarray(pooled_cov, dtype=float)
    )
    eig = linalg.sym_eig(pooled)
    order = np.arange(eig.eigenvalues.size)

    warnings: tuple = ()
    rows: list[np.ndarray] = []
    if _means_equal(p1, p2):
        warnings = (
            "class means coincide; using principal directions of the pooled covariance only",
        )
    else:
        rows.append(p2.mean - p1.mean)
    rows, _ = _greedy_fill(rows, eig.eigenvectors, order, eig.eigenvalues, r)
    matrix = linalg.orthonormalize_rows(np.vstack(rows))
    return ProjectionResult(
        matrix=matrix,
        frame=FRAME_ORIGINAL,
        method="lol",
        achieved_kld=kld_projected(matrix, p1, p2),
        warnings=warnings,
    )


# ---------------------------------------------------------------------------
# divergence-order diagnostic
# ---------------------------------------------------------------------------


def equal_mean_order_check(
    p1: GaussianParams, p2: GaussianParams, r: int
) -> tuple[np.ndarray, np.ndarray, float]:
    """Compare the optimal subspaces for the two divergence orders.

    For equal-mean classes the optimal r-dimensional subspace for
    D(q1 || q2) picks the top-r generalized eigendirections of (S2, S1) by
    g_score, and for D(q2 || q1) those of (S1, S2).  The pencils share
    eigenvectors with reciprocal eigenvalues, so whenever the spectrum sits
    entirely on one side of 1 (e.g. S2 = S1 + positive semidefinite) the two
    orders select the same subspace; spectra straddling 1 can genuinely
    disagree.  Returns (subspace_12, subspace_21, max principal angle), the
    subspaces as orthonormal rows.
    """
    if p1.dim != p2.dim:
        raise DimensionMismatch(f"class dimensions differ: {p1.dim} vs {p2.dim}")
    r = _check_r(r, p1.dim)
    if not _means_equal(p1, p2, rtol=EQUAL_MEANS_CHECK_RTOL):
        raise UnequalMeans("order comparison is defined for coinciding class means")

    def top_subspace(b: np.ndarray, c: np.ndarray) -> np.ndarray:
        pencil = linalg.generalized_eig(b, c)
        sel = _ranked(g_score(pencil.eigenvalues), pencil.eigenvalues)[:r]
        return linalg.orthonormalize_rows(pencil.eigenvectors[:, sel].T)

    sub12 = top_subspace(p2.covariance, p1.covariance)
    sub21 = top_subspace(p1.covariance, p2.covariance)
    angle = float(np.max(linalg.principal_angles(sub12, sub21)))
    return sub12, sub21, angle
