"""How far is a discovered attribute set from the human-labelled one?

An attribute is a column of signs over a fixed instance set: +1 where the
property holds, -1 where it does not.  Given a bank of human-labelled
attributes S (the meaningful subspace), we score any discovered attribute z
by how well a combination of S's columns reconstructs it.  Two flavours:

  * plain     -- least squares over all real coefficient vectors
  * cvx       -- coefficients restricted to the probability simplex,
                 i.e. z must be approximated from inside the convex hull of S

The cvx distance is the stricter test: it asks whether z looks like a
blend of known concepts, not just a linear shadow of them.
"""

import numpy as np

from attrmeaning import (
    SolverConfig,
    brute_force_cvx_oracle,
    distance_cvx,
    distance_plain,
    random_attribute_set,
    reconstruct_cvx,
    reconstruct_ls,
)

rng = np.random.default_rng(7)

n = 60          # instances
j = 6           # labelled (meaningful) attributes
S = random_attribute_set(n, j, seed=101)

# --- a member of S reconstructs itself exactly --------------------------

z = S[:, 2]
_, resid = reconstruct_ls(S, z)
print("member column, plain residual:", resid)

fit = reconstruct_cvx(S, z)
print("member column, cvx residual:  ", fit.residual)
print("cvx coefficients:", np.round(fit.coefficients, 4), "(mass on column 2)")

# --- a random attribute does not -----------------------------------------

z = random_attribute_set(n, 1, seed=999)[:, 0]
_, plain = reconstruct_ls(S, z)
cvx = reconstruct_cvx(S, z).residual
print()
print("random column, plain residual: %.4f" % plain)
print("random column, cvx residual:   %.4f" % cvx)
print("plain <= cvx always (smaller feasible set):", plain <= cvx + 1e-9)

# --- whole-set distances --------------------------------------------------

D = random_attribute_set(n, 10, seed=2024)   # pretend these were discovered
rep_plain = distance_plain(S, D)
rep_cvx = distance_cvx(S, D)
print()
print("set of 10 random attributes vs 6 labelled ones")
print("  mean plain distance:", round(rep_plain.mean_distance, 4))
print("  mean cvx distance:  ", round(rep_cvx.mean_distance, 4))
print("  normalized (per instance):", round(rep_cvx.normalized_distance, 6))
print("  all solves converged:", all(rep_cvx.converged))

# A set that actually lives in the hull of S scores near zero.  Mix columns
# of S with simplex weights and binarize the blend.
W = rng.dirichlet(np.ones(j), size=10).T          # j x 10, columns sum to 1
blended = np.where(S.astype(float) @ W >= 0, 1, -1).astype(np.int8)
rep_blend = distance_cvx(S, blended)
print()
print("attributes blended from S, mean cvx distance:", round(rep_blend.mean_distance, 4))

# --- sanity against an exhaustive oracle ----------------------------------
# For tiny J the simplex can be swept on a grid; the projected-gradient
# solver should land on the same optimum.

S_small = random_attribute_set(12, 3, seed=5)
z = random_attribute_set(12, 1, seed=6)[:, 0]
solver = reconstruct_cvx(S_small, z, SolverConfig()).residual
oracle = brute_force_cvx_oracle(S_small, z, grid_step=0.01)
print()
print("solver %.6f vs grid oracle %.6f (|diff| = %.2e)"
      % (solver, oracle, abs(solver - oracle)))
