"""Computing the unique λ-mate of a subset.

``S + T = λ (G - e)`` is equivalent to ``M(S) M(T) = λ (J - I)``.  Reading
off the first column, ``y_i = [ -g_i ∈ T ] / λ`` solves
``M(S) y = (0, 1, ..., 1)``.  We solve that system modulo the smallest prime
``p > n``; a unique solution with a single nonzero value ``μ`` gives
``λ = μ^{-1} mod p`` and the candidate ``T``, which is then checked exactly.
When ``M(S)`` is singular mod ``p`` the system is solved over the rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from .group_ring import check_nf, matrix_M
from .groups import Group
from .numtheory import next_prime

__all__ = ["MateResult", "mate", "mate_bruteforce", "solve_mod_p", "BruteForceTooLarge"]


@dataclass(frozen=True)
class MateResult:
    T: tuple[int, ...] | None
    lam: int | None
    prime: int
    fallback: bool = False

    @property
    def found(self) -> bool:
        return self.T is not None

    def __bool__(self) -> bool:
        return self.found


@lru_cache(maxsize=None)
def _prime_for(n: int) -> int:
    return next_prime(n)


def solve_mod_p(A: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Unique solution of ``A x = b (mod p)``, or ``None`` if ``A`` is singular mod p."""
    n = A.shape[0]
    aug = np.concatenate([A % p, (b % p)[:, None]], axis=1).astype(np.int64)
    for col in range(n):
        nz = np.flatnonzero(aug[col:, col])
        if nz.size == 0:
            return None
        piv = col + int(nz[0])
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        inv = pow(int(aug[col, col]), -1, p)
        aug[col] = (aug[col] * inv) % p
        f = aug[:, col].copy()
        f[col] = 0
        aug -= np.outer(f, aug[col])
        aug %= p
    return aug[:, n]


def _exact_solution(A: np.ndarray, b: np.ndarray) -> list[Fraction] | None:
    n = A.shape[0]
    M = DomainMatrix([[QQ(int(x)) for x in row] for row in A], (n, n), QQ)
    rhs = DomainMatrix([[QQ(int(x))] for x in b], (n, 1), QQ)
    try:
        sol = M.lu_solve(rhs)
    except DMNonInvertibleMatrixError:
        return None
    return [Fraction(int(v.numerator), int(v.denominator)) for v in sol.to_list_flat()]


def _validate_size(group: Group, S: tuple[int, ...]) -> None:
    if not 1 <= len(S) <= group.order - 1:
        raise ValueError(f"mate needs 1 <= |S| <= n-1, got |S| = {len(S)} in {group.name}")


def mate(group: Group, S: Iterable[int]) -> MateResult:
    """The unique ``(T, λ)`` with ``S + T = λ (G - e)``, if any."""
    S = tuple(sorted(set(int(x) for x in S)))
    _validate_size(group, S)
    n = group.order
    p = _prime_for(n)
    A = matrix_M(group, S)
    b = np.ones(n, dtype=np.int64)
    b[0] = 0
    y = solve_mod_p(A, b, p)
    neg = group.neg_table
    if y is not None:
        nz = np.flatnonzero(y)
        if nz.size == 0 or np.any(y[nz] != y[nz[0]]):
            return MateResult(None, None, p)
        lam = pow(int(y[nz[0]]), -1, p)
        T = tuple(sorted(int(neg[i]) for i in nz))
        if check_nf(group, S, T) == lam:
            return MateResult(T, lam, p)
        return MateResult(None, None, p)

    # singular mod p: the rational system decides (an NF forces M(S) invertible
    # over Q since J - I is)
    ex = _exact_solution(A, b)
    if ex is None:
        return MateResult(None, None, p, fallback=True)
    nzs = [i for i, v in enumerate(ex) if v != 0]
    if not nzs:
        return MateResult(None, None, p, fallback=True)
    val = ex[nzs[0]]
    if any(ex[i] != val for i in nzs) or val.numerator != 1 or val.denominator < 1:
        return MateResult(None, None, p, fallback=True)
    lam = val.denominator
    T = tuple(sorted(int(neg[i]) for i in nzs))
    if check_nf(group, S, T) == lam:
        return MateResult(T, lam, p, fallback=True)
    return MateResult(None, None, p, fallback=True)


class BruteForceTooLarge(ValueError):
    pass


def mate_bruteforce(group: Group, S: Iterable[int], max_order: int = 20) -> MateResult:
    """Reference oracle: try every T whose size is allowed by ``st = λ(n-1)``."""
    S = tuple(sorted(set(int(x) for x in S)))
    _validate_size(group, S)
    n = group.order
    if n > max_order:
        raise BruteForceTooLarge(f"brute-force mate limited to n <= {max_order}")
    s = len(S)
    add_S = group.add_table[list(S)]  # (s, n)
    hits = []
    for t in range(1, n):
        if (s * t) % (n - 1):
            continue
        lam = s * t // (n - 1)
        combos = np.array(list(itertools.combinations(range(n), t)), dtype=np.int64)
        sums = add_S[:, combos]  # (s, C, t)
        rows = np.arange(len(combos))[None, :, None] * n
        counts = np.bincount((sums + rows).ravel(), minlength=len(combos) * n).reshape(-1, n)
        ok = (counts[:, 0] == 0) & np.all(counts[:, 1:] == lam, axis=1)
        for i in np.flatnonzero(ok):
            T = tuple(int(x) for x in combos[i])
            assert check_nf(group, S, T) == lam
            hits.append((T, lam))
    if not hits:
        return MateResult(None, None, 0)
    if len(hits) > 1:
        raise AssertionError(f"mate not unique for {S}: {hits}")
    return MateResult(hits[0][0], hits[0][1], 0)
