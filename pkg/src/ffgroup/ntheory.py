"""Small integer routines: trial-division factoring and friends."""

from __future__ import annotations

from math import isqrt


def factor_integer(m: int) -> dict[int, int]:
    """Prime factorization of ``m >= 1`` by trial division, as ``{prime: exponent}``."""
    if m < 1:
        raise ValueError(f"cannot factor {m}")
    out: dict[int, int] = {}
    for r in (2, 3):
        while m % r == 0:
            out[r] = out.get(r, 0) + 1
            m //= r
    r = 5
    while r * r <= m:
        for cand in (r, r + 2):
            while m % cand == 0:
                out[cand] = out.get(cand, 0) + 1
                m //= cand
        r += 6
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    return all(m % r for r in range(3, isqrt(m) + 1, 2))


def euler_phi(m: int) -> int:
    result = m
    for r in factor_integer(m):
        result = result // r * (r - 1)
    return result


def divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q = p**k``, or None if q is not a prime power."""
    if q < 2:
        return None
    fac = factor_integer(q)
    if len(fac) != 1:
        return None
    ((p, k),) = fac.items()
    return p, k


def order_by_stripping(multiple: int, is_identity_power) -> int:
    """Least m dividing ``multiple`` with ``is_identity_power(m)`` true.

    ``multiple`` must already be a multiple of the true order; each prime is
    stripped while the reduced exponent still yields the identity.
    """
    m = multiple
    for r in factor_integer(multiple):
        while m % r == 0 and is_identity_power(m // r):
            m //= r
    return m
