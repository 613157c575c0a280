"""Polynomials of degree (p-1)/2 whose values add up to exactly p.

Walks through the classification at small primes: the two families, their
affine orbits, and what the root/excess bookkeeping looks like.
"""

# %%
from redeilab.classify import classify, family_membership
from redeilab.field import prime_ctx
from redeilab.poly import make_family, range_profile, range_sum

ctx = prime_ctx(11)
h = ctx.half

# %% the two families at p = 11
for variant in ("i", "ii"):
    for sign in (1, -1):
        P = make_family(ctx, variant, sign)
        prof = range_profile(P)
        print(f"{variant:>2} {sign:+d}  values {list(map(int, P.values))}  sum {range_sum(P)}")
        print(f"        roots {prof.roots}  excess {prof.excess}")

# %% everything with the property, up to x -> ax + b
for p in (5, 7, 11, 13):
    res = classify(prime_ctx(p))
    fams = sorted(o.family for o in res.orbits)
    print(f"p={p:2d}: {len(res.orbits)} orbits {fams}, {res.candidates_scanned} candidates, "
          f"{res.ms:.0f} ms")

# %% the brute-force oracle agrees (about 7 s at p = 13)
naive = classify(prime_ctx(13), "naive")
fast = classify(prime_ctx(13), "rootsets")
print("same polynomials:", naive.members() == fast.members(), len(naive.members()))

# %% a member of an orbit, found again from a disguised form
P = make_family(ctx, "ii", -1, a=4).scale(2)  # 2 is a non-residue mod 11
print("range sum", range_sum(P), "-> family", family_membership(P.scale(pow(2, -1, 11))))
