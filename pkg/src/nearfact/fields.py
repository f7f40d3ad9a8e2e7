"""The two small finite-field families the seed constructions need.

``PrimeSquareField`` is F_{p^2} as ``a + b x`` modulo the lexicographically
least monic irreducible quadratic.  ``BinaryField`` is F_{2^m} with elements
as bitmasks modulo a primitive polynomial of least weight (ties broken by
least integer value of the bitmask).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

__all__ = ["PrimeSquareField", "BinaryField", "least_primitive_binary"]


@dataclass(frozen=True)
class PrimeSquareField:
    p: int

    @cached_property
    def modulus(self) -> tuple[int, int]:
        """``(c1, c0)`` of ``x^2 + c1 x + c0``; lexicographically least irreducible."""
        p = self.p
        for c1 in range(p):
            for c0 in range(p):
                if all((r * r + c1 * r + c0) % p for r in range(p)):
                    return c1, c0
        raise AssertionError("no irreducible quadratic")  # pragma: no cover

    def mul(self, u: tuple[int, int], v: tuple[int, int]) -> tuple[int, int]:
        p = self.p
        c1, c0 = self.modulus
        a, b = u
        c, d = v
        hi = b * d  # coefficient of x^2, replaced by -c1 x - c0
        return ((a * c - hi * c0) % p, (a * d + b * c - hi * c1) % p)

    def elements(self):
        return [(a, b) for a in range(self.p) for b in range(self.p)]

    def nonzero_squares(self) -> set[tuple[int, int]]:
        return {self.mul(z, z) for z in self.elements() if z != (0, 0)}


def _gf2_mulx(a: int, poly: int, m: int) -> int:
    a <<= 1
    if a >> m & 1:
        a ^= poly
    return a


def _is_primitive(poly: int, m: int) -> bool:
    order = (1 << m) - 1
    a = 1
    for k in range(1, order + 1):
        a = _gf2_mulx(a, poly, m)
        if a == 1:
            return k == order
    return False


def least_primitive_binary(m: int) -> int:
    """Primitive polynomial of degree ``m`` over F_2 as a bitmask."""
    cands = [poly for poly in range(1 << m, 1 << (m + 1)) if poly & 1]
    cands.sort(key=lambda q: (bin(q).count("1"), q))
    for poly in cands:
        if _is_primitive(poly, m):
            return poly
    raise AssertionError(f"no primitive polynomial of degree {m}")  # pragma: no cover


@dataclass(frozen=True)
class BinaryField:
    m: int

    @cached_property
    def poly(self) -> int:
        return least_primitive_binary(self.m)

    @cached_property
    def powers(self) -> list[int]:
        """``alpha^i`` for ``i = 0 .. 2^m - 2`` with ``alpha = x``."""
        out, a = [], 1
        for _ in range((1 << self.m) - 1):
            out.append(a)
            a = _gf2_mulx(a, self.poly, self.m)
        return out

    def mul(self, a: int, b: int) -> int:
        out = 0
        while b:
            if b & 1:
                out ^= a
            b >>= 1
            a = _gf2_mulx(a, self.poly, self.m)
        return out

    def trace(self, a: int) -> int:
        acc, z = 0, a
        for _ in range(self.m):
            acc ^= z
            z = self.mul(z, z)
        assert acc in (0, 1)
        return acc
