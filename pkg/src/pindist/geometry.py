"""Algebraic distances, pinned distance sets and isosceles counts in F_p^2."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Set, Tuple

import numpy as np

from ._parallel import chunk_bounds, ordered_starmap
from .errors import CapExceeded
from .field import ModulusLike, PrimeModulus, as_modulus, sqrt_minus_one

Point2 = Tuple[int, int]

DENSE_P_MAX = 1 << 20
_CHUNK_CELLS = 1 << 19
BRUTEFORCE_CAP = 200


class PointSet2:
    """A finite set of points in F_p^2, deduplicated and sorted lexicographically.

    ``xy`` is an ``(n, 2)`` int64 array; row order is the (x, y) order used
    for every tie-break in this module.
    """

    def __init__(self, points: Iterable[Iterable[int]], modulus: ModulusLike):
        self.modulus = as_modulus(modulus)
        p = self.modulus.p
        arr = np.array([[int(a) % p, int(b) % p] for a, b in points], dtype=np.int64)
        if arr.size == 0:
            arr = np.zeros((0, 2), dtype=np.int64)
        else:
            arr = np.unique(arr, axis=0)
        self.xy = arr
        self.xy.setflags(write=False)
        self._cols = (np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1]))

    @classmethod
    def cartesian(cls, A: Iterable[int], modulus: ModulusLike) -> "PointSet2":
        m = as_modulus(modulus)
        vals = sorted({int(a) % m.p for a in A})
        return cls(((a, b) for a in vals for b in vals), m)

    @property
    def p(self) -> int:
        return self.modulus.p

    @property
    def points(self) -> List[Point2]:
        return [(int(a), int(b)) for a, b in self.xy]

    def __len__(self) -> int:
        return len(self.xy)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, u) -> bool:
        u = np.asarray(u, dtype=np.int64) % self.p
        return bool(np.any(np.all(self.xy == u, axis=1)))

    def __repr__(self) -> str:
        return f"PointSet2(n={len(self)}, p={self.p})"


@dataclass(frozen=True)
class DistanceHistogram:
    """``counts[x]`` is the number of points of E at distance x from ``pin``."""

    pin: Point2
    counts: Dict[int, int] = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.counts.values())

    def energy(self) -> int:
        return sum(c * c for c in self.counts.values())

    def support(self) -> Set[int]:
        return set(self.counts)


@dataclass(frozen=True, order=True)
class Line2:
    """The line ``a*x + b*y = c`` with the first nonzero of (a, b) equal to 1."""

    a: int
    b: int
    c: int

    @classmethod
    def normalized(cls, a: int, b: int, c: int, m: ModulusLike) -> "Line2":
        m = as_modulus(m)
        a, b, c = a % m.p, b % m.p, c % m.p
        if a == 0 and b == 0:
            raise ValueError("degenerate line: (a, b) = (0, 0)")
        s = m.inv(a if a else b)
        return cls(a * s % m.p, b * s % m.p, c * s % m.p)

    def contains(self, u: Point2, m: ModulusLike) -> bool:
        p = as_modulus(m).p
        return (self.a * u[0] + self.b * u[1] - self.c) % p == 0

    def direction(self, m: ModulusLike) -> Point2:
        """Direction vector with its first nonzero coordinate equal to 1."""
        m = as_modulus(m)
        dx, dy = (-self.b) % m.p, self.a
        s = m.inv(dx if dx else dy)
        return (dx * s % m.p, dy * s % m.p)


def _nonempty(E: PointSet2) -> None:
    if len(E) == 0:
        raise ValueError("point set is empty")


def algebraic_distance(u: Point2, v: Point2, m: ModulusLike) -> int:
    p = as_modulus(m).p
    dx = (u[0] - v[0]) % p
    dy = (u[1] - v[1]) % p
    return (dx * dx + dy * dy) % p


def _distance_rows(E: PointSet2, pins: np.ndarray) -> np.ndarray:
    """Distances from each pin (rows) to every point of E (columns)."""
    p = E.p
    dx = (pins[:, 0:1] - E.xy[None, :, 0]) % p
    dy = (pins[:, 1:2] - E.xy[None, :, 1]) % p
    return (dx * dx % p + dy * dy % p) % p


def _rows_per_chunk(E: PointSet2) -> int:
    width = max(len(E), 2 * E.p if E.p <= DENSE_P_MAX else 1)
    return max(1, _CHUNK_CELLS // max(1, width))


@lru_cache(maxsize=8)
def _square_table(p: int) -> np.ndarray:
    """``t[d + p] = d^2 mod p`` for -p < d < p."""
    d = np.arange(-(p - 1), p, dtype=np.int64)
    t = np.zeros(2 * p, dtype=np.int64)
    t[d + p] = d * d % p
    t.setflags(write=False)
    return t


def _pin_stats_chunk(E: PointSet2, lo: int, hi: int) -> Tuple[np.ndarray, np.ndarray]:
    """(sum_x r_u(x)^2, |Delta_u|) for pins E[lo:hi]."""
    rows = hi - lo
    p = E.p
    if p <= DENSE_P_MAX:
        # unreduced distances lie in [0, 2p - 2]; fold the histogram instead of reducing
        sq = _square_table(p)
        x, y = E._cols
        d = sq[x[lo:hi, None] - x[None, :] + p]
        dy = sq[y[lo:hi, None] - y[None, :] + p]
        dy += (np.arange(rows, dtype=np.int64) * (2 * p))[:, None]
        d += dy
        h = np.bincount(d.ravel(), minlength=rows * 2 * p).reshape(rows, 2 * p)
        h = h[:, :p] + h[:, p:]
        return (h * h).sum(axis=1), np.count_nonzero(h, axis=1)
    D = _distance_rows(E, E.xy[lo:hi])
    energy = np.empty(rows, dtype=np.int64)
    distinct = np.empty(rows, dtype=np.int64)
    for i in range(rows):
        _, c = np.unique(D[i], return_counts=True)
        energy[i] = int((c * c).sum())
        distinct[i] = len(c)
    return energy, distinct


def pin_statistics(E: PointSet2, threads: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Per-pin histogram energy and pinned distance count, in E's row order."""
    _nonempty(E)
    bounds = chunk_bounds(len(E), _rows_per_chunk(E))
    parts = ordered_starmap(lambda lo, hi: _pin_stats_chunk(E, lo, hi), bounds, threads)
    return np.concatenate([a for a, _ in parts]), np.concatenate([b for _, b in parts])


def distance_set(E: PointSet2, include_diagonal: bool = True, threads: Optional[int] = None) -> Set[int]:
    """All values ||u - v|| for u, v in E.

    With ``include_diagonal=False`` only pairs u != v contribute, so 0 is
    present only when E contains an isotropic pair.
    """
    _nonempty(E)
    n = len(E)

    def chunk(lo: int, hi: int) -> np.ndarray:
        D = _distance_rows(E, E.xy[lo:hi])
        if not include_diagonal:
            keep = np.ones(D.shape, dtype=bool)
            keep[np.arange(hi - lo), np.arange(lo, hi)] = False
            return np.unique(D[keep])
        return np.unique(D)

    parts = ordered_starmap(chunk, chunk_bounds(n, _rows_per_chunk(E)), threads)
    return {int(x) for x in np.unique(np.concatenate(parts))}


def pinned_distance_set(E: PointSet2, u: Point2) -> Set[int]:
    _nonempty(E)
    D = _distance_rows(E, np.array([u], dtype=np.int64) % E.p)
    return {int(x) for x in np.unique(D)}


def distance_histogram(E: PointSet2, u: Point2) -> DistanceHistogram:
    _nonempty(E)
    pin = (int(u[0]) % E.p, int(u[1]) % E.p)
    D = _distance_rows(E, np.array([pin], dtype=np.int64))
    vals, counts = np.unique(D, return_counts=True)
    return DistanceHistogram(pin, {int(x): int(c) for x, c in zip(vals, counts)})


def isosceles_count(E: PointSet2, threads: Optional[int] = None) -> int:
    """Ordered triples (u, v, w) in E^3 with ||u - v|| = ||u - w||.

    Evaluated as sum over pins u of sum_x r_u(x)^2, which is O(|E|^2).
    """
    energy, _ = pin_statistics(E, threads)
    return int(sum(int(e) for e in energy))


def isosceles_count_bruteforce(E: PointSet2, cap: int = BRUTEFORCE_CAP) -> int:
    """Reference count by enumerating all |E|^3 ordered triples."""
    _nonempty(E)
    if len(E) > cap:
        raise CapExceeded(f"|E| = {len(E)} exceeds brute-force cap {cap}")
    pts = E.points
    m = E.modulus
    dist = [[algebraic_distance(u, v, m) for v in pts] for u in pts]
    total = 0
    for row in dist:
        for dv in row:
            for dw in row:
                if dv == dw:
                    total += 1
    return total


def guaranteed_pin(E: PointSet2, threads: Optional[int] = None) -> Tuple[Point2, Fraction]:
    """The pin minimising sum_x r_u(x)^2 and the bound |E|^3 / N.

    By Cauchy-Schwarz this pin has at least |E|^3 / N pinned distances.
    Ties go to the lexicographically smallest point.
    """
    energy, _ = pin_statistics(E, threads)
    i = int(np.argmin(energy))
    n = len(E)
    N = int(sum(int(e) for e in energy))
    return E.points[i], Fraction(n ** 3, N)


def best_pin(E: PointSet2, threads: Optional[int] = None) -> Tuple[Point2, int]:
    _, distinct = pin_statistics(E, threads)
    i = int(np.argmax(distinct))
    return E.points[i], int(distinct[i])


def bisector_line(v: Point2, w: Point2, m: ModulusLike) -> Line2:
    """The locus {u : ||u - v|| = ||u - w||} for v != w."""
    m = as_modulus(m)
    p = m.p
    v = (v[0] % p, v[1] % p)
    w = (w[0] % p, w[1] % p)
    if v == w:
        raise ValueError("bisector of a point with itself is the whole plane")
    a = 2 * (w[0] - v[0])
    b = 2 * (w[1] - v[1])
    c = (w[0] ** 2 + w[1] ** 2) - (v[0] ** 2 + v[1] ** 2)
    return Line2.normalized(a, b, c, m)


def isotropic_lines_through_origin(m: ModulusLike) -> List[Line2]:
    """Lines through 0 with direction (1, i), i^2 = -1; empty when p = 3 mod 4."""
    m = as_modulus(m)
    i = sqrt_minus_one(m)
    if i is None:
        return []
    # direction (1, r) is the line r*x - y = 0
    return [Line2.normalized(r, -1, 0, m) for r in (i, m.p - i)]


def isotropic_line_points(m: ModulusLike, ts: Iterable[int], root: Optional[int] = None,
                          offset: Point2 = (0, 0)) -> PointSet2:
    """Points offset + (t, i*t) on an isotropic line; requires p = 1 mod 4."""
    m = as_modulus(m)
    i = sqrt_minus_one(m) if root is None else root % m.p
    if i is None or (i * i + 1) % m.p:
        raise ValueError(f"no isotropic direction over F_{m.p}")
    return PointSet2(((offset[0] + t, offset[1] + i * t) for t in ts), m)
