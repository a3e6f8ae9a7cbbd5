"""Three ways to turn real-valued features into binary attributes.

lsh  - random hyperplanes through the origin; no training at all
sh   - spectral hashing: PCA, then pick the smoothest sinusoid modes and
       threshold them; prefers splitting the data along its long axes
mmc  - max-margin coder: starts from lsh codes, then alternates between
       training linear classifiers on the codes and flipping bits that
       lower the hinge loss

Features are lifted first with an explicit feature map approximating the
histogram intersection kernel, then reduced with PCA, mirroring how
bag-of-words histograms are usually prepared.
"""

import numpy as np

from attrmeaning import (
    apply_pca,
    encode,
    fit_pca,
    lift_features,
    train_lsh,
    train_mmc,
    train_sh,
)


def balance(B):
    # fraction of +1 per bit; 0.5 is perfectly balanced
    return (B == 1).mean(axis=0)


rng = np.random.default_rng(42)

# Histogram-like features: non-negative, rows roughly sum to one.
F = rng.dirichlet(np.ones(8), size=300)
print("raw features:", F.shape)

# --- preprocessing: lift + pca -------------------------------------------

L = lift_features(F)                       # 8 dims -> 24 (three per input dim)
pca = fit_pca(L, keep_fraction=0.6)
X = apply_pca(pca, L)
print("lifted:", L.shape, " after pca:", X.shape)
print("explained variance (top 5):", np.round(pca.explained_variance[:5], 4))

# --- lsh: works on anything, balanced on centered data --------------------

model = train_lsh(X.shape[1], bits=8, seed=3)
B = encode(model, X)
print()
print("lsh codes:", B.shape, "dtype", B.dtype)
print("lsh bit balance:", np.round(balance(B), 2))

# Same seed, same hyperplanes -- the coder is a pure function of (dims, bits, seed).
again = encode(train_lsh(X.shape[1], bits=8, seed=3), X)
print("deterministic:", bool((B == again).all()))

# --- sh: the first bit cuts the longest axis -------------------------------

# Anisotropic rectangle: x spans 10 units, y spans 1.  The smoothest
# partition of this set is a single cut across the long side.
R = np.column_stack([rng.uniform(0, 10, 2000), rng.uniform(0, 1, 2000)])
sh = train_sh(R, bits=4)
Bsh = encode(sh, R)
print()
print("sh eigenvalues (ascending smoothness cost):", np.round(sh.eigenvalues, 4))
print("sh bit balance:", np.round(balance(Bsh), 2))

# bit 0 vs the long coordinate: one sign change along x
order = np.argsort(R[:, 0])
flips = int((np.diff(Bsh[order, 0]) != 0).sum())
print("sign changes of bit 0 along the long axis:", flips)

# --- mmc: codes you can classify with ---------------------------------------

# Two well-separated blobs; a good code should keep them linearly separable.
per = 80
A = rng.normal(loc=(-2.0, -2.0), scale=0.4, size=(per, 2))
Bb = rng.normal(loc=(2.0, 2.0), scale=0.4, size=(per, 2))
Fb = np.vstack([A, Bb])
y = np.repeat([0, 1], per)

mmc = train_mmc(Fb, y, bits=2, seed=11)
codes = encode(mmc, Fb)

# one linear readout on the codes
G = np.column_stack([codes.astype(float), np.ones(len(codes))])
w, *_ = np.linalg.lstsq(G, np.where(y == 1, 1.0, -1.0), rcond=None)
acc = ((G @ w >= 0) == (y == 1)).mean()
print()
print("mmc codes on 2-blob data:", codes.shape)
print("linear readout accuracy on codes: %.3f" % acc)
print("distinct codes per class:",
      [len({tuple(r) for r in codes[y == c]}) for c in (0, 1)])
