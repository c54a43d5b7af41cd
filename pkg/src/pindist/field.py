"""Exact arithmetic in the prime field F_p.

Elements are plain Python ints kept in canonical form ``0 <= a < p``.
Array helpers operate on ``int64`` numpy arrays; the modulus is capped
below 2**31 so a product of two canonical residues never leaves 62 bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Optional, Tuple, Union

import numpy as np

P_MAX = 1 << 31


def is_prime(n: int) -> bool:
    """Deterministic trial division; adequate for n < 2**31."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    if n % 3 == 0:
        return n == 3
    f = 5
    r = isqrt(n)
    while f <= r:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


@dataclass(frozen=True, order=True)
class PrimeModulus:
    """An odd prime 3 <= p < 2**31."""

    p: int

    def __post_init__(self) -> None:
        p = self.p
        if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
            raise TypeError(f"modulus must be an integer, got {p!r}")
        p = int(p)
        object.__setattr__(self, "p", p)
        if p == 2:
            raise ValueError("p = 2 is not supported: the distance form needs odd characteristic")
        if not 3 <= p < P_MAX:
            raise ValueError(f"modulus {p} outside [3, 2**31)")
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")

    def __int__(self) -> int:
        return self.p

    def reduce(self, a: int) -> int:
        return int(a) % self.p

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.p)


ModulusLike = Union[PrimeModulus, int]


def as_modulus(m: ModulusLike) -> PrimeModulus:
    return m if isinstance(m, PrimeModulus) else PrimeModulus(int(m))


def legendre_symbol(a: int, m: ModulusLike) -> int:
    """Euler's criterion: 0 for a = 0, 1 for nonzero squares, -1 otherwise."""
    p = as_modulus(m).p
    s = pow(int(a) % p, (p - 1) // 2, p)
    return -1 if s == p - 1 else s


def sqrt_mod(a: int, m: ModulusLike) -> Optional[Tuple[int, int]]:
    """Both square roots of ``a`` as ``(r, p - r)`` with ``r <= p - r``.

    Returns ``(0, 0)`` for ``a = 0`` and ``None`` for a non-residue.
    Tonelli-Shanks with the non-residue found by scanning 2, 3, ...,
    so the result is fully deterministic.
    """
    p = as_modulus(m).p
    a = int(a) % p
    if a == 0:
        return (0, 0)
    if legendre_symbol(a, p) != 1:
        return None

    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while legendre_symbol(z, p) != -1:
            z += 1
        c = pow(z, q, p)
        r = pow(a, (q + 1) // 2, p)
        t = pow(a, q, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (s - i - 1), p)
            r = r * b % p
            c = b * b % p
            t = t * c % p
            s = i
    r = min(r, p - r)
    return (r, p - r)


def sqrt_minus_one(m: ModulusLike) -> Optional[int]:
    """The smaller root of x**2 = -1, or None when p = 3 mod 4."""
    p = as_modulus(m).p
    roots = sqrt_mod(p - 1, p)
    return None if roots is None else roots[0]


def is_isotropic_direction(dx: int, dy: int, m: ModulusLike) -> bool:
    p = as_modulus(m).p
    dx, dy = int(dx) % p, int(dy) % p
    if dx == 0 and dy == 0:
        raise ValueError("the zero vector is not a direction")
    return (dx * dx + dy * dy) % p == 0


def pow_array(a: np.ndarray, e: int, p: int) -> np.ndarray:
    """Elementwise ``a**e mod p`` by square-and-multiply on int64."""
    base = np.asarray(a, dtype=np.int64) % p
    out = np.ones_like(base)
    while e:
        if e & 1:
            out = out * base % p
        base = base * base % p
        e >>= 1
    return out


def inv_array(a: np.ndarray, p: int) -> np.ndarray:
    """Elementwise inverse mod p; zero entries map to zero."""
    return pow_array(a, p - 2, p)
