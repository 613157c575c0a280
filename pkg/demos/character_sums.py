"""Legendre sums over translates of half-size sets.

For C of size (p-1)/2 the shift sums T_g = sum_c ((c - g)/p) are small for
random C, but the residues themselves put all their weight on g = 0.
"""

# %%
import numpy as np

from redeilab import charsum as cs
from redeilab.field import prime_ctx

rng = np.random.default_rng(7)
ctx = prime_ctx(1009)

# %% residues versus a random half-subset
for name, C in (("residues", cs.quadratic_residues(ctx)), ("random", cs.random_half_subset(ctx, rng))):
    prof = cs.shift_profile(ctx, C)
    print(f"{name:9s} max |T| {prof.max_abs:4d} at g={prof.argmax:4d}, "
          f"(p-1)/4 = {(ctx.p - 1) / 4}, sqrt(p) = {ctx.p ** 0.5:.1f}")

# %% joint square status of a and a + gamma
for p in (11, 13):
    for cls in ("QR", "QNR"):
        t = cs.paley_table(prime_ctx(p), cls)
        print(p, cls, t.counts, "printed form:", cs.paley_printed_form(p, cls) == t.counts)

# %% sign patterns of three shifts stay within m (sqrt p + 1)/2 of p/8
rep = cs.weil_sign_patterns(prime_ctx(499), (0, 1, 5))
for v, n in sorted(rep.counts.items()):
    print(v, n, f"{n - 499 / 8:+.1f}")
print("bound", round(rep.bound - 499 / 8, 2))

# %% eight residue translates: where the arithmetic starts to close
print("proviso first holds at", cs.eight_translate_threshold())
for p in (11, 26927, 7408853):
    r = cs.structured_instance(prime_ctx(p))
    print(f"p={p}: min |A_i & Q| = {r.lhs} <= {float(r.rhs):.1f}")
print("concentration inequality first holds at", cs.concentration_threshold())
