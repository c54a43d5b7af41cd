"""Shared reference oracles.

Everything here is deliberately naive pure Python so that it stays
independent of the numpy kernels it checks.
"""

import itertools

import pytest

SMALL_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73,
                79, 83, 89, 97, 101]


def dist(u, v, p):
    return ((u[0] - v[0]) ** 2 + (u[1] - v[1]) ** 2) % p


def brute_isosceles(points, p):
    pts = list(points)
    return sum(1 for u in pts for v in pts for w in pts if dist(u, v, p) == dist(u, w, p))


def brute_split(A, p):
    """(restricted, degenerate) by enumerating all 6-tuples over A."""
    restricted = degenerate = 0
    for u1, u2, v1, v2, w1, w2 in itertools.product(A, repeat=6):
        if dist((u1, u2), (v1, v2), p) == dist((u1, u2), (w1, w2), p):
            if v1 != w1 and v2 != w2:
                restricted += 1
            else:
                degenerate += 1
    return restricted, degenerate


def brute_pinned(points, u, p):
    return {dist(u, v, p) for v in points}


def brute_collinear(points, p):
    """Max points on a line, by testing every pair's line against every point."""
    pts = list(points)
    if len(pts) < 2:
        return len(pts)
    best = 2
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            d = [(bb - aa) % p for aa, bb in zip(a, b)]
            on = 0
            for c in pts:
                e = [(cc - aa) % p for aa, cc in zip(a, c)]
                # e parallel to d  <=>  every 2x2 minor vanishes
                if all((e[r] * d[s] - e[s] * d[r]) % p == 0 for r in range(3) for s in range(r + 1, 3)):
                    on += 1
            best = max(best, on)
    return best


def squares_by_enumeration(p):
    roots = {}
    for r in range(p):
        roots.setdefault(r * r % p, set()).add(r)
    return roots


_ACCEPTANCE = []


@pytest.fixture
def acceptance_log():
    def record(name, ok, detail=""):
        _ACCEPTANCE.append((name, ok, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
