# %% [markdown]
# Prime fields, square roots and isotropic directions.
#
# Everything in pindist is done modulo a prime p >= 3. A direction (dx, dy)
# is isotropic when dx^2 + dy^2 = 0, which can only happen off the axes when
# -1 is a square, i.e. when p = 1 mod 4.

# %%
from pindist import PrimeModulus, is_isotropic_direction, legendre_symbol, sqrt_minus_one, sqrt_mod

m = PrimeModulus(13)
print("p =", m.p, " 5^-1 =", m.inv(5), " check:", m.reduce(5 * m.inv(5)))

# %%
for a in range(1, 7):
    print(a, legendre_symbol(a, m), sqrt_mod(a, m))

# %%
for p in (5, 7, 13, 17, 19):
    i = sqrt_minus_one(p)
    iso = i is not None and is_isotropic_direction(1, i, p)
    print(f"p={p:3d}  p%4={p % 4}  sqrt(-1)={i}  (1, i) isotropic: {iso}")
