# %% [markdown]
# The isosceles count N and the averaging pin.
#
# N counts triples (u, v, w) with |u - v| = |u - w|; it equals the sum over
# pins of squared histogram counts. Cauchy-Schwarz then gives a pin u with
# |Delta_u(E)| >= |E|^3 / N, found here as the pin of least energy.

# %%
from pindist import PointSet2, guaranteed_pin, isosceles_count, isosceles_count_bruteforce, pinned_distance_set

p = 29
E = PointSet2.cartesian([0, 3, 4, 9, 17], p)
N = isosceles_count(E)
print("N =", N, " brute force =", isosceles_count_bruteforce(E))

# %%
u, bound = guaranteed_pin(E)
got = len(pinned_distance_set(E, u))
print(f"pin {u}: |Delta_u| = {got} >= |E|^3/N = {bound} ({float(bound):.3f})")

# %% [markdown]
# On an isotropic line every distance vanishes, so N hits its maximum |E|^3.

# %%
from pindist import distance_set, isotropic_line_points

L = isotropic_line_points(13, range(6))
print(L.points, " N =", isosceles_count(L), "=", len(L) ** 3, " Delta =", distance_set(L))
