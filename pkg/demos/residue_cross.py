"""A p-point set with only (p+3)/2 directions, seen through its projections
and its Fourier transform.

The set is {(0, x), (x, 0) : x a nonzero square} plus the origin.
"""

# %%
import numpy as np

from redeilab import fourier as fr
from redeilab import geometry as geo
from redeilab.field import prime_ctx

p = 13
S = geo.ls_set(prime_ctx(p))
rep = geo.direction_report(S)
print(f"|S| = {len(S)}, |D| = {rep.n_directions} = (p+3)/2 = {(p + 3) // 2}")
print(rep.census())

# %% projection polynomials slope by slope
for m, info in rep.slopes.items():
    print(f"{geo.slope_label(m):>3}  deg {info.degree!s:>4}  lc {info.lc:2d}  {info.kind}")

# %% |p * 1hat| per direction: 0, sqrt(p), or about p/2
spec = fr.spectrum(S)
for m, d in spec.directions.items():
    print(f"{geo.slope_label(m):>3}  {d.poly_class:9s}  {np.round(d.p_mags[:4], 3)}")
print("Plancherel residual", spec.plancherel_residual, "M =", spec.M)

# %% the counting argument: which gaps could Plancherel alone allow?
for q in (13, 41, 43, 101):
    print(q, fr.feasible_gaps(q))

# %% a random p-set for contrast
rng = np.random.default_rng(3)
R = geo.random_point_set(prime_ctx(p), rng)
print("random set:", len(geo.direction_set(R)), "directions", fr.spectrum(R).class_counts())
