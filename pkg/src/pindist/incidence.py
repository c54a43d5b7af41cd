"""Point-plane incidences in F_p^3 built from a set A of residues.

For E = A x A the isosceles equation ||u - v|| = ||u - w|| expands to

    2 u1 (v1 - w1) + 2 u2 (v2 - w2) = (v1^2 - w1^2) + (v2^2 - w2^2).

When v1 != w1 and v2 != w2 each solution is an incidence between the point
(2 u1, v2 - w2, v2^2 - w2^2) and the plane with normal (v1 - w1, -2 u2, 1)
and constant v1^2 - w1^2 (the plane indexed by the swapped pair (w1, v1),
which moves the v2^2 - w2^2 term to the correct side). The solutions with
v1 = w1 or v2 = w2 are counted separately by ``degenerate_case_count``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from pathlib import Path
from typing import Iterable, List, Optional, Set, TextIO, Tuple, Union

import numpy as np

from ._parallel import chunk_bounds, ordered_starmap
from .errors import CapExceeded, InvariantViolation
from .field import ModulusLike, PrimeModulus, as_modulus, inv_array
from .geometry import DENSE_P_MAX, PointSet2, isosceles_count

Point3 = Tuple[int, int, int]

INSTANCE_CAP = 10 ** 7
NAIVE_CAP = 10 ** 9
COLLINEAR_PAIR_CAP = 10 ** 8
RESTRICTED_CAP = 10 ** 10


@dataclass(frozen=True, order=True)
class Plane:
    """The plane n1*x + n2*y + z = c."""

    n1: int
    n2: int
    c: int

    def contains(self, x: Point3, m: ModulusLike) -> bool:
        p = as_modulus(m).p
        return (self.n1 * x[0] + self.n2 * x[1] + x[2] - self.c) % p == 0


def _residues(A: Iterable[int], m: PrimeModulus) -> np.ndarray:
    return np.array(sorted({int(a) % m.p for a in A}), dtype=np.int64)


def _check_size(a: np.ndarray, cap: int) -> None:
    n = len(a)
    if n < 2:
        raise ValueError(f"need |A| >= 2, got {n}")
    if n ** 3 > cap:
        raise CapExceeded(f"|A|^3 = {n ** 3} exceeds instance cap {cap}")


def _ordered_pairs(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    v, w = np.meshgrid(a, a, indexing="ij")
    keep = v != w
    return v[keep], w[keep]


def _point_array(a: np.ndarray, p: int) -> np.ndarray:
    v, w = _ordered_pairs(a)
    y = (v - w) % p
    z = (v * v - w * w) % p
    x = 2 * a % p
    pts = np.empty((len(a), len(y), 3), dtype=np.int64)
    pts[:, :, 0] = x[:, None]
    pts[:, :, 1] = y[None, :]
    pts[:, :, 2] = z[None, :]
    return pts.reshape(-1, 3)


def _plane_array(a: np.ndarray, p: int) -> np.ndarray:
    v, w = _ordered_pairs(a)
    n1 = (v - w) % p
    c = (v * v - w * w) % p
    n2 = (-2 * a) % p
    planes = np.empty((len(a), len(n1), 3), dtype=np.int64)
    planes[:, :, 0] = n1[None, :]
    planes[:, :, 1] = n2[:, None]
    planes[:, :, 2] = c[None, :]
    return planes.reshape(-1, 3)


def _distinct_rows(arr: np.ndarray, what: str) -> np.ndarray:
    out = np.unique(arr, axis=0)
    if len(out) != len(arr):
        raise InvariantViolation(f"{what}: {len(arr) - len(out)} coincident elements")
    return out


def build_point_set(A: Iterable[int], m: ModulusLike, cap: int = INSTANCE_CAP) -> Set[Point3]:
    m = as_modulus(m)
    a = _residues(A, m)
    _check_size(a, cap)
    return {tuple(int(t) for t in row) for row in _distinct_rows(_point_array(a, m.p), "points")}


def build_plane_set(A: Iterable[int], m: ModulusLike, cap: int = INSTANCE_CAP) -> Set[Plane]:
    m = as_modulus(m)
    a = _residues(A, m)
    _check_size(a, cap)
    return {Plane(*(int(t) for t in row)) for row in _distinct_rows(_plane_array(a, m.p), "planes")}


@dataclass(frozen=True)
class IncidenceInstance:
    """Points and planes as sorted ``(n, 3)`` int64 arrays."""

    points: np.ndarray
    planes: np.ndarray
    modulus: PrimeModulus
    source: Tuple[int, ...] = ()

    @classmethod
    def from_sets(cls, points: Iterable[Point3], planes: Iterable, m: ModulusLike,
                  source: Iterable[int] = ()) -> "IncidenceInstance":
        m = as_modulus(m)
        P = np.array([[int(t) % m.p for t in x] for x in points], dtype=np.int64).reshape(-1, 3)
        rows = [(pl.n1, pl.n2, pl.c) if isinstance(pl, Plane) else pl for pl in planes]
        Pi = np.array([[int(t) % m.p for t in r] for r in rows], dtype=np.int64).reshape(-1, 3)
        return cls(np.unique(P, axis=0), np.unique(Pi, axis=0), m, tuple(sorted(source)))

    @property
    def p(self) -> int:
        return self.modulus.p

    def point_set(self) -> Set[Point3]:
        return {tuple(int(t) for t in row) for row in self.points}

    def plane_set(self) -> Set[Plane]:
        return {Plane(*(int(t) for t in row)) for row in self.planes}


def build_instance(A: Iterable[int], m: ModulusLike, cap: int = INSTANCE_CAP) -> IncidenceInstance:
    m = as_modulus(m)
    a = _residues(A, m)
    _check_size(a, cap)
    P = _distinct_rows(_point_array(a, m.p), "points")
    Pi = _distinct_rows(_plane_array(a, m.p), "planes")
    expected = len(a) ** 2 * (len(a) - 1)
    if not len(P) == len(Pi) == expected:
        raise InvariantViolation(f"|P| = {len(P)}, |Pi| = {len(Pi)}, expected {expected}")
    return IncidenceInstance(P, Pi, m, tuple(int(t) for t in a))


def count_incidences_naive(inst: IncidenceInstance, cap: int = NAIVE_CAP) -> int:
    """Test every (point, plane) pair."""
    if len(inst.points) * len(inst.planes) > cap:
        raise CapExceeded(f"|P|*|Pi| = {len(inst.points) * len(inst.planes)} exceeds naive cap {cap}")
    p = inst.p
    x, y, z = (np.ascontiguousarray(inst.points[:, i]) for i in range(3))
    total = 0
    for n1, n2, c in inst.planes.tolist():
        lhs = (n1 * x % p + n2 * y % p + z - c) % p
        total += int(np.count_nonzero(lhs == 0))
    return total


def _value_counts(vals: np.ndarray, p: int):
    if p <= DENSE_P_MAX:
        h = np.bincount(vals, minlength=p)
        return lambda cs: int(h[cs].sum())
    keys, counts = np.unique(vals, return_counts=True)

    def lookup(cs: np.ndarray) -> int:
        idx = np.searchsorted(keys, cs)
        idx[idx == len(keys)] = 0
        hit = keys[idx] == cs
        return int(counts[idx][hit].sum()) if len(keys) else 0

    return lookup


def count_incidences_bucketed(inst: IncidenceInstance, threads: Optional[int] = None) -> int:
    """Group planes by normal; histogram n . x over P once per group."""
    p = inst.p
    if len(inst.planes) == 0 or len(inst.points) == 0:
        return 0
    normals, group = np.unique(inst.planes[:, :2], axis=0, return_inverse=True)
    group = group.ravel()
    order = np.argsort(group, kind="stable")
    starts = np.searchsorted(group[order], np.arange(len(normals) + 1))
    consts = inst.planes[order, 2]
    x, y, z = (np.ascontiguousarray(inst.points[:, i]) for i in range(3))

    def run(lo: int, hi: int) -> int:
        total = 0
        for g in range(lo, hi):
            n1, n2 = int(normals[g, 0]), int(normals[g, 1])
            vals = (n1 * x % p + n2 * y % p + z) % p
            total += _value_counts(vals, p)(consts[starts[g]:starts[g + 1]])
        return total

    return sum(ordered_starmap(run, chunk_bounds(len(normals), 16), threads))


def canonical_line(a: Point3, b: Point3, m: ModulusLike) -> Tuple[Point3, Point3]:
    """Hashable key (direction, base) for the line through distinct a and b.

    The direction is scaled so its first nonzero coordinate is 1; the base
    is the unique point of the line whose coordinate at that pivot is 0.
    """
    m = as_modulus(m)
    p = m.p
    d = [(bi - ai) % p for ai, bi in zip(a, b)]
    piv = next((i for i, t in enumerate(d) if t), None)
    if piv is None:
        raise ValueError("points coincide")
    s = m.inv(d[piv])
    d = [t * s % p for t in d]
    base = [(ai - a[piv] * di) % p for ai, di in zip(a, d)]
    return tuple(d), tuple(base)


def _normalized_directions(diff: np.ndarray, p: int, inv_table: Optional[np.ndarray]) -> np.ndarray:
    nz = diff != 0
    piv = np.argmax(nz, axis=1)
    lead = diff[np.arange(len(diff)), piv]
    s = inv_table[lead] if inv_table is not None else inv_array(lead, p)
    return diff * s[:, None] % p


def max_collinear(P, m: ModulusLike, cap: int = COLLINEAR_PAIR_CAP,
                  threads: Optional[int] = None) -> int:
    """Largest number of points of P on one line of F_p^3.

    For each point i the later points are grouped by normalised direction
    from i; a line is seen in full from its first point, so the maximum
    group size plus one over all i is the answer.
    """
    m = as_modulus(m)
    p = m.p
    pts = np.unique(np.asarray(list(P) if not isinstance(P, np.ndarray) else P,
                               dtype=np.int64).reshape(-1, 3) % p, axis=0)
    n = len(pts)
    if n < 2:
        return n
    if n * (n - 1) // 2 > cap:
        raise CapExceeded(f"{n * (n - 1) // 2} point pairs exceed collinearity cap {cap}")
    inv_table = None
    if p <= DENSE_P_MAX:
        inv_table = np.zeros(p, dtype=np.int64)
        inv_table[1:] = inv_array(np.arange(1, p), p)
    packed = p <= DENSE_P_MAX

    def run(lo: int, hi: int) -> int:
        best = 2
        for i in range(lo, min(hi, n - 1)):
            d = _normalized_directions((pts[i + 1:] - pts[i]) % p, p, inv_table)
            if packed:
                _, c = np.unique((d[:, 0] * p + d[:, 1]) * p + d[:, 2], return_counts=True)
            else:
                _, c = np.unique(d, axis=0, return_counts=True)
            best = max(best, int(c.max()) + 1)
        return best

    return max(ordered_starmap(run, chunk_bounds(n, 64), threads))


def _cartesian_cap(a: np.ndarray, cap: int) -> None:
    if len(a) ** 4 > cap:
        raise CapExceeded(f"|A|^4 = {len(a) ** 4} exceeds cap {cap}")


def _line_energy(a: np.ndarray, p: int) -> int:
    """#{(u, v, w) in A^3 : (u - v)^2 = (u - w)^2}."""
    sq = ((a[:, None] - a[None, :]) % p) ** 2 % p
    total = 0
    for row in sq:
        _, c = np.unique(row, return_counts=True)
        total += int((c * c).sum())
    return total


def degenerate_case_count(A: Iterable[int], m: ModulusLike, cap: int = RESTRICTED_CAP) -> int:
    """Isosceles triples of A x A with v1 = w1 or v2 = w2.

    With v1 = w1 the equation collapses to (u2 - v2)^2 = (u2 - w2)^2 while
    u1 and v1 are free, giving |A|^2 * S solutions (S the one-dimensional
    count); the two cases overlap exactly in v = w, which is |A|^4 triples.
    """
    m = as_modulus(m)
    a = _residues(A, m)
    _cartesian_cap(a, cap)
    n = len(a)
    if n == 0:
        return 0
    return 2 * n * n * _line_energy(a, m.p) - n ** 4


def restricted_isosceles_count(A: Iterable[int], m: ModulusLike, cap: int = RESTRICTED_CAP,
                               threads: Optional[int] = None) -> int:
    """Isosceles triples of A x A with v1 != w1 and v2 != w2."""
    m = as_modulus(m)
    a = _residues(A, m)
    _cartesian_cap(a, cap)
    if len(a) == 0:
        return 0
    N = isosceles_count(PointSet2.cartesian(a.tolist(), m), threads)
    return N - degenerate_case_count(a.tolist(), m, cap)


def rudnev_ratio(inst: IncidenceInstance, incidences: Optional[int] = None,
                 k: Optional[int] = None) -> Fraction:
    """incidences / (floor(|P|^{3/2}) + k |P|) as an exact fraction."""
    n = len(inst.points)
    if n == 0:
        return Fraction(0)
    if n > inst.p ** 2:
        warnings.warn(f"|P| = {n} exceeds p^2 = {inst.p ** 2}", RuntimeWarning, stacklevel=2)
    if incidences is None:
        incidences = count_incidences_bucketed(inst)
    if k is None:
        k = max_collinear(inst.points, inst.modulus)
    return Fraction(incidences, isqrt(n ** 3) + k * n)


def _write_rows(rows: np.ndarray, p: int, fh: TextIO) -> None:
    fh.write(f"p={p}\n")
    for r in rows.tolist():
        fh.write(f"{r[0]} {r[1]} {r[2]}\n")


def _read_rows(fh: TextIO) -> Tuple[PrimeModulus, List[List[int]]]:
    lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith("p="):
        raise ValueError("missing 'p=<p>' header")
    m = PrimeModulus(int(lines[0][2:]))
    rows = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"expected three integers, got {ln!r}")
        rows.append([int(t) for t in parts])
    return m, rows


def export_instance(inst: IncidenceInstance, prefix: Union[str, Path]) -> Tuple[Path, Path]:
    """Write ``<prefix>.points`` (x y z) and ``<prefix>.planes`` (n1 n2 c)."""
    prefix = Path(prefix)
    pts_path = prefix.with_name(prefix.name + ".points")
    pl_path = prefix.with_name(prefix.name + ".planes")
    with open(pts_path, "w") as fh:
        _write_rows(inst.points, inst.p, fh)
    with open(pl_path, "w") as fh:
        _write_rows(inst.planes, inst.p, fh)
    return pts_path, pl_path


def import_instance(prefix: Union[str, Path]) -> IncidenceInstance:
    prefix = Path(prefix)
    with open(prefix.with_name(prefix.name + ".points")) as fh:
        m, pts = _read_rows(fh)
    with open(prefix.with_name(prefix.name + ".planes")) as fh:
        m2, planes = _read_rows(fh)
    if m2 != m:
        raise ValueError(f"modulus mismatch: {m.p} vs {m2.p}")
    return IncidenceInstance.from_sets(pts, planes, m)
