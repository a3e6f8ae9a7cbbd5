"""Attribute discovery baselines: feature lifting, PCA, and binary coders.

Three ways to turn real feature vectors into {-1, +1} attribute codes:

* LSH: data-independent random hyperplanes;
* spectral hashing: PCA directions partitioned by analytic sinusoid modes;
* max-margin coder: LSH-initialized codes refined by alternating hinge-loss
  classifier fits and greedy bit flips against category labels.

``lift_features`` provides the sampled explicit feature map for the
histogram intersection kernel so that linear hyperplanes in the lifted
space act like intersection-kernel classifiers in the original one.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .attributes import as_feature_matrix, as_label_vector

__all__ = [
    "LiftConfig",
    "LiftClampWarning",
    "lift_features",
    "PcaModel",
    "fit_pca",
    "apply_pca",
    "LshModel",
    "train_lsh",
    "ShModel",
    "train_sh",
    "MmcHyperparams",
    "MmcModel",
    "train_mmc",
    "encode",
]


class LiftClampWarning(UserWarning):
    """Negative feature entries were clamped to zero before lifting."""


@dataclass(frozen=True)
class LiftConfig:
    """Sampled feature-map settings: harmonics per dimension and sample period."""

    order: int = 1
    period: float = 0.65

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        if not (self.period > 0.0):
            raise ValueError(f"period must be positive, got {self.period}")


def _intersection_spectrum(omega: float) -> float:
    # spectrum of the intersection kernel's log-domain signature
    return (2.0 / np.pi) / (1.0 + 4.0 * omega**2)


def lift_features(F, config: LiftConfig | None = None) -> np.ndarray:
    """Lift nonnegative features so dot products approximate intersection.

    Each input dimension x expands to 2 * order + 1 coordinates

        [ sqrt(x L k(0)),
          sqrt(2 x L k(jL)) cos(jL log x),
          sqrt(2 x L k(jL)) sin(jL log x) ]   for j = 1..order

    with k the intersection-kernel spectrum and L the sample period, laid
    out dimension-major.  The lifted dot product of two rows approximates
    sum_d min(x_d, y_d).  Zero entries map to zero blocks; negative entries
    are clamped to zero first (a :class:`LiftClampWarning` reports how many).

    Parameters
    ----------
    F : (N, D) feature matrix, nominally nonnegative (histogram-like).
    config : lift settings; defaults to order 1, period 0.65.

    Returns
    -------
    (N, D * (2 * order + 1)) float64 matrix.
    """
    F = as_feature_matrix(F)
    config = config or LiftConfig()
    negatives = int(np.count_nonzero(F < 0.0))
    if negatives:
        warnings.warn(
            f"clamped {negatives} negative feature entries to zero before lifting",
            LiftClampWarning,
            stacklevel=2,
        )
        F = np.maximum(F, 0.0)

    n, d = F.shape
    L = config.period
    width = 2 * config.order + 1
    out = np.zeros((n, d * width), dtype=np.float64)

    pos = F > 0.0
    logF = np.zeros_like(F)
    logF[pos] = np.log(F[pos])

    out[:, 0::width] = np.sqrt(F * L * _intersection_spectrum(0.0))
    for j in range(1, config.order + 1):
        amp = np.zeros_like(F)
        amp[pos] = np.sqrt(2.0 * F[pos] * L * _intersection_spectrum(j * L))
        phase = j * L * logF
        cos_block = amp * np.cos(phase)
        sin_block = amp * np.sin(phase)
        cos_block[~pos] = 0.0
        sin_block[~pos] = 0.0
        out[:, 2 * j - 1 :: width] = cos_block
        out[:, 2 * j :: width] = sin_block
    return out


@dataclass(frozen=True)
class PcaModel:
    """Centered orthonormal projection: mean (D,), basis (D, d), variances (d,)."""

    mean: np.ndarray
    basis: np.ndarray
    explained_variance: np.ndarray


def _fit_pca_directions(F: np.ndarray, d: int) -> PcaModel:
    n = F.shape[0]
    mean = F.mean(axis=0)
    X = F - mean
    _, s, Vt = np.linalg.svd(X, full_matrices=False)
    Vt = Vt[:d]
    # fix the SVD sign ambiguity so repeated fits agree bit for bit
    anchors = np.argmax(np.abs(Vt), axis=1)
    signs = np.sign(Vt[np.arange(d), anchors])
    signs[signs == 0] = 1.0
    Vt = Vt * signs[:, None]
    variance = (s[:d] ** 2) / (n - 1)
    return PcaModel(mean=mean, basis=Vt.T.copy(), explained_variance=variance)


def fit_pca(F, keep_fraction: float) -> PcaModel:
    """Fit a PCA projection keeping ceil(keep_fraction * D) directions.

    Requires at least two rows, 0 < keep_fraction <= 1, and enough samples
    to support the requested direction count (d <= min(N, D)).
    """
    F = as_feature_matrix(F)
    if F.shape[0] < 2:
        raise ValueError(f"PCA needs at least 2 rows, got {F.shape[0]}")
    if not (0.0 < keep_fraction <= 1.0):
        raise ValueError(f"keep_fraction must be in (0, 1], got {keep_fraction}")
    d = int(np.ceil(keep_fraction * F.shape[1]))
    if d > min(F.shape):
        raise ValueError(
            f"cannot keep {d} directions from data of shape {F.shape}"
        )
    return _fit_pca_directions(F, d)


def apply_pca(model: PcaModel, F) -> np.ndarray:
    """Project features onto a fitted PCA basis: (F - mean) @ basis."""
    F = as_feature_matrix(F)
    if F.shape[1] != model.mean.shape[0]:
        raise ValueError(
            f"feature width {F.shape[1]} does not match the fitted width "
            f"{model.mean.shape[0]}"
        )
    return (F - model.mean) @ model.basis


@dataclass(frozen=True)
class LshModel:
    """Random-hyperplane coder: unit-norm rows of `hyperplanes` (K, D)."""

    hyperplanes: np.ndarray
    dims: int
    bits: int
    seed: int


def train_lsh(dims: int, bits: int, seed: int) -> LshModel:
    """Draw `bits` random unit-norm hyperplanes through the origin.

    Rows are i.i.d. spherical Gaussian directions from a generator seeded
    with `seed`; codes are the response signs, so the coder is data
    independent and reproducible.
    """
    if dims < 1:
        raise ValueError(f"dims must be >= 1, got {dims}")
    if bits < 1:
        raise ValueError(f"bits must be >= 1, got {bits}")
    rng = np.random.default_rng(seed)
    W = rng.standard_normal((bits, dims))
    W /= np.linalg.norm(W, axis=1, keepdims=True)
    return LshModel(hyperplanes=W, dims=dims, bits=bits, seed=seed)


@dataclass(frozen=True)
class ShModel:
    """Spectral-hashing coder.

    pca : centered projection onto min(D, bits) directions.
    ranges : (d, 2) per-direction [min, max] of the projected training data.
    modes : (bits, 2) int array of (direction, harmonic) pairs, smoothest
        first (ascending squared frequency).
    eigenvalues : analytic eigenvalue proxy exp(-(eps^2/2) (k pi / range)^2)
        with eps = 1, one per mode, in mode order.
    """

    pca: PcaModel
    ranges: np.ndarray
    modes: np.ndarray
    eigenvalues: np.ndarray
    dims: int
    bits: int


def train_sh(F, bits: int) -> ShModel:
    """Fit a spectral-hashing coder on training features.

    PCA reduces to min(D, bits) directions; each kept direction contributes
    sinusoid modes at harmonics k = 1..bits over its projected range [a, b].
    Modes are ranked by squared frequency (k pi / (b - a))^2 ascending, so a
    long-range (high variance) direction fills the smoothest slots first,
    and the `bits` smoothest modes become the code bits.  Directions with a
    degenerate (zero-width) range are excluded.
    """
    F = as_feature_matrix(F)
    if bits < 1:
        raise ValueError(f"bits must be >= 1, got {bits}")
    if F.shape[0] < 2:
        raise ValueError(f"training needs at least 2 rows, got {F.shape[0]}")
    d = min(F.shape[1], bits)
    if d > min(F.shape):
        raise ValueError(f"cannot keep {d} directions from data of shape {F.shape}")
    pca = _fit_pca_directions(F, d)
    P = (F - pca.mean) @ pca.basis
    lo = P.min(axis=0)
    hi = P.max(axis=0)

    candidates = []  # (omega^2, direction, harmonic)
    for direction in range(d):
        span = hi[direction] - lo[direction]
        if span <= 0.0:
            continue
        for k in range(1, bits + 1):
            omega_sq = (k * np.pi / span) ** 2
            candidates.append((omega_sq, direction, k))
    if not candidates:
        raise ValueError("every projected direction is degenerate (constant data)")
    candidates.sort()
    chosen = candidates[:bits]
    if len(chosen) < bits:
        raise ValueError(
            f"only {len(chosen)} usable modes for {bits} requested bits"
        )
    modes = np.asarray([(direction, k) for _, direction, k in chosen], dtype=np.int64)
    eigenvalues = np.asarray([np.exp(-0.5 * w2) for w2, _, _ in chosen])
    return ShModel(
        pca=pca,
        ranges=np.column_stack([lo, hi]),
        modes=modes,
        eigenvalues=eigenvalues,
        dims=F.shape[1],
        bits=bits,
    )


@dataclass(frozen=True)
class MmcHyperparams:
    """Max-margin coder settings: hinge regularization, outer epochs, step size."""

    regularization: float = 1e-4
    epochs: int = 20
    learning_rate: float = 0.1

    def __post_init__(self):
        if not (self.regularization > 0.0):
            raise ValueError(f"regularization must be positive, got {self.regularization}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if not (self.learning_rate > 0.0):
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")


@dataclass(frozen=True)
class MmcModel:
    """Max-margin coder: affine hyperplanes (bits, D + 1), last column bias."""

    hyperplanes: np.ndarray
    classes: np.ndarray
    dims: int
    bits: int
    seed: int
    hyperparams: MmcHyperparams = field(default_factory=MmcHyperparams)


_HINGE_STEPS = 300


def _fit_hinge(X: np.ndarray, y: np.ndarray, lam: float, lr: float):
    # full-batch subgradient descent on mean hinge loss + lam * ||w||^2,
    # learning rate lr / sqrt(t); bias unregularized; deterministic (no
    # shuffling).  Columns are standardized internally so the step size is
    # meaningful regardless of feature scale; the returned (w, b) act on the
    # raw inputs.
    n, d = X.shape
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    sd[sd == 0.0] = 1.0
    Xs = (X - mu) / sd
    w = np.zeros(d)
    b = 0.0
    for t in range(1, _HINGE_STEPS + 1):
        margins = y * (Xs @ w + b)
        viol = margins < 1.0
        gw = 2.0 * lam * w
        if viol.any():
            gw -= (Xs[viol] * y[viol, None]).sum(axis=0) / n
        gb = -float(y[viol].sum()) / n
        step = lr / np.sqrt(t)
        w -= step * gw
        b -= step * gb
    w_raw = w / sd
    return w_raw, b - float(w_raw @ mu)


def _category_hinge_rows(Y: np.ndarray, scores: np.ndarray) -> np.ndarray:
    return np.maximum(0.0, 1.0 - Y * scores).sum(axis=1)


def train_mmc(
    F,
    y,
    bits: int,
    hyperparams: MmcHyperparams | None = None,
    seed: int = 0,
) -> MmcModel:
    """Train the max-margin coder on labelled features.

    Codes are initialized from random hyperplanes (:func:`train_lsh` with
    the same seed), then refined for `epochs` rounds of block-coordinate
    updates:

    (a) fit one-vs-rest hinge classifiers on the current codes;
    (b) refit each bit's affine hyperplane on the features to predict the
        current bit assignments;
    (c) greedily flip any training bit whose flip strictly lowers the total
        one-vs-rest hinge loss, in fixed row-major order.

    The flip phase never increases the category hinge loss, and the whole
    procedure is deterministic for a fixed seed.  The returned model encodes
    by hyperplane response sign.
    """
    F = as_feature_matrix(F)
    y = as_label_vector(y, n=F.shape[0])
    if bits < 1:
        raise ValueError(f"bits must be >= 1, got {bits}")
    classes = np.unique(y)
    if classes.shape[0] < 2:
        raise ValueError(f"need at least 2 classes, got {classes.shape[0]}")
    if F.shape[0] < 2 * classes.shape[0]:
        raise ValueError(
            f"need at least {2 * classes.shape[0]} instances for "
            f"{classes.shape[0]} classes, got {F.shape[0]}"
        )
    hp = hyperparams or MmcHyperparams()
    n, d = F.shape
    k = bits
    c = classes.shape[0]

    init = train_lsh(d, k, seed)
    B = np.where(F @ init.hyperplanes.T >= 0.0, 1.0, -1.0)  # (n, k) working codes
    Y = np.where(y[:, None] == classes[None, :], 1.0, -1.0)  # (n, c) one-vs-rest

    H = np.zeros((k, d + 1))
    for _ in range(hp.epochs):
        Wc = np.empty((c, k))
        bc = np.empty(c)
        for ci in range(c):
            Wc[ci], bc[ci] = _fit_hinge(B, Y[:, ci], hp.regularization, hp.learning_rate)
        for ki in range(k):
            w, b0 = _fit_hinge(F, B[:, ki], hp.regularization, hp.learning_rate)
            H[ki, :d] = w
            H[ki, d] = b0

        scores = B @ Wc.T + bc  # (n, c)
        loss_rows = _category_hinge_rows(Y, scores)
        total_before = loss_rows.sum()
        for i in range(n):
            for ki in range(k):
                delta = -2.0 * B[i, ki] * Wc[:, ki]
                flipped = np.maximum(0.0, 1.0 - Y[i] * (scores[i] + delta)).sum()
                if flipped < loss_rows[i] - 1e-12:
                    B[i, ki] = -B[i, ki]
                    scores[i] += delta
                    loss_rows[i] = flipped
        assert loss_rows.sum() <= total_before + 1e-9, "flip phase raised the loss"

    return MmcModel(
        hyperplanes=H, classes=classes, dims=d, bits=k, seed=seed, hyperparams=hp
    )


def encode(model, F) -> np.ndarray:
    """Encode features into {-1, +1} codes with a fitted coder.

    Dispatches on the model type; responses of exactly zero map to +1,
    matching :func:`attrmeaning.attributes.binarize`.
    """
    F = as_feature_matrix(F)
    if isinstance(model, LshModel):
        if F.shape[1] != model.dims:
            raise ValueError(
                f"feature width {F.shape[1]} does not match model dims {model.dims}"
            )
        resp = F @ model.hyperplanes.T
    elif isinstance(model, ShModel):
        if F.shape[1] != model.dims:
            raise ValueError(
                f"feature width {F.shape[1]} does not match model dims {model.dims}"
            )
        P = (F - model.pca.mean) @ model.pca.basis
        resp = np.empty((F.shape[0], model.bits))
        for col, (direction, k) in enumerate(model.modes):
            lo, hi = model.ranges[direction]
            t = (P[:, direction] - lo) / (hi - lo)
            resp[:, col] = np.sin(np.pi / 2.0 + k * np.pi * t)
    elif isinstance(model, MmcModel):
        if F.shape[1] != model.dims:
            raise ValueError(
                f"feature width {F.shape[1]} does not match model dims {model.dims}"
            )
        resp = F @ model.hyperplanes[:, :-1].T + model.hyperplanes[:, -1]
    else:
        raise TypeError(f"unknown coder model type: {type(model).__name__}")
    return np.where(resp >= 0.0, 1, -1).astype(np.int8)
