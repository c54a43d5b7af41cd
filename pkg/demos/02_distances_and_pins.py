# %% [markdown]
# Distance sets and pinned distance sets of A x A.
#
# The algebraic distance is (u1-v1)^2 + (u2-v2)^2 mod p. For each pin u we
# histogram the distances to every point of E; the largest pinned set is
# compared with min(p, |A|^1.5).

# %%
from pindist import PointSet2, best_pin, distance_histogram, distance_set, pin_statistics

p = 101
A = range(12)
E = PointSet2.cartesian(A, p)
print(E, " |Delta(E)| =", len(distance_set(E)))

# %%
energy, distinct = pin_statistics(E)
print("pinned set sizes: min", distinct.min(), "max", distinct.max(), "mean", round(float(distinct.mean()), 2))
u, size = best_pin(E)
print("best pin", u, "size", size, " target min(p, |A|^1.5) =", min(p, 12 ** 1.5))

# %%
h = distance_histogram(E, u)
top = sorted(h.counts.items(), key=lambda dc: (-dc[1], dc[0]))[:5]
print("most popular distances from", u, ":", top, " total", h.total())
