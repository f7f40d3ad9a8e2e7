"""Small integer helpers (thin wrappers over sympy's number theory)."""

from __future__ import annotations

from math import gcd

from sympy import factorint, isprime, nextprime

__all__ = ["factorize", "is_prime", "next_prime", "units_mod", "prime_divisors", "prime_power"]


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorisation as sorted ``(p, e)`` pairs; empty for 1."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    return sorted((int(p), int(e)) for p, e in factorint(n).items())


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def is_prime(n: int) -> bool:
    return bool(isprime(n))


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than ``n``."""
    return int(nextprime(n))


def units_mod(m: int) -> list[int]:
    return [u for u in range(1, m) if gcd(u, m) == 1] if m > 1 else []


def prime_power(q: int) -> tuple[int, int] | None:
    """``(p, e)`` if ``q = p**e`` with ``e >= 1``, else ``None``."""
    if q < 2:
        return None
    f = factorize(q)
    return f[0] if len(f) == 1 else None
