# %% [markdown]
# From isosceles triples to point-plane incidences.
#
# For a Cartesian set A x A, each triple with v1 != w1 maps to a point
# (2u1, v2 - w2, v2^2 - w2^2) and a plane with normal (v1 - w1, -2u2, 1) and
# constant v1^2 - w1^2. Incidences then count exactly the isosceles triples
# outside the degenerate part.

# %%
from pindist import (
    PointSet2,
    build_instance,
    count_incidences_bucketed,
    count_incidences_naive,
    degenerate_case_count,
    isosceles_count,
    max_collinear,
    restricted_isosceles_count,
    rudnev_ratio,
)

A, p = [1, 2, 6, 9], 31
inst = build_instance(A, p)
n = len(A)
print("|P| =", len(inst.points), " |Pi| =", len(inst.planes), " |A|^2(|A|-1) =", n * n * (n - 1))

# %%
I = count_incidences_bucketed(inst)
print("incidences: bucketed", I, " naive", count_incidences_naive(inst))
r, d = restricted_isosceles_count(A, p), degenerate_case_count(A, p)
print("restricted", r, "+ degenerate", d, "=", r + d, " N(A x A) =", isosceles_count(PointSet2.cartesian(A, p)))

# %%
k = max_collinear(inst.points, p)
print("max collinear k =", k, "(<= 2|A| =", 2 * n, ")  ratio =", rudnev_ratio(inst, I, k))
