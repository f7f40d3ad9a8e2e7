"""Integer group-ring arithmetic and the NF / DS / PDS verification equations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .groups import Group, is_symmetric

__all__ = [
    "GroupRingElement",
    "NearFactorization",
    "NotANearFactorization",
    "convolve",
    "involution",
    "indicator",
    "check_nf",
    "check_ds",
    "check_pds",
    "matrix_M",
    "sumset_counts",
]


@dataclass(frozen=True)
class GroupRingElement:
    group: Group
    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != self.group.order:
            raise ValueError(f"expected {self.group.order} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_set(cls, group: Group, elems: Iterable[int]) -> GroupRingElement:
        return indicator(group, elems)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coeffs) if c)

    def __add__(self, other: GroupRingElement) -> GroupRingElement:
        _same(self, other)
        return GroupRingElement(self.group, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: GroupRingElement) -> GroupRingElement:
        return convolve(self, other)

    def scale(self, k: int) -> GroupRingElement:
        return GroupRingElement(self.group, tuple(k * c for c in self.coeffs))


def _same(a: GroupRingElement, b: GroupRingElement) -> None:
    if a.group != b.group:
        raise ValueError(f"mixed groups: {a.group.name} and {b.group.name}")


def indicator(group: Group, elems: Iterable[int]) -> GroupRingElement:
    c = [0] * group.order
    for g in elems:
        c[group._check(g)] += 1
    return GroupRingElement(group, tuple(c))


def convolve(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    """``d_g = sum_h a_{g-h} b_h``, exact, over the supports only."""
    _same(a, b)
    add = a.group.add_table
    out = [0] * a.group.order
    sb = [(h, b.coeffs[h]) for h in b.support()]
    for g in a.support():
        ag = a.coeffs[g]
        row = add[g]
        for h, bh in sb:
            out[row[h]] += ag * bh
    return GroupRingElement(a.group, tuple(out))


def involution(a: GroupRingElement) -> GroupRingElement:
    neg = a.group.neg_table
    return GroupRingElement(a.group, tuple(a.coeffs[int(neg[g])] for g in range(a.group.order)))


def sumset_counts(group: Group, S: Sequence[int], T: Sequence[int]) -> np.ndarray:
    """Multiplicity of each element as ``s + t`` (fast numpy convolution)."""
    S = np.asarray(S, dtype=np.int64)
    T = np.asarray(T, dtype=np.int64)
    if S.size == 0 or T.size == 0:
        return np.zeros(group.order, dtype=np.int64)
    return np.bincount(group.add_table[np.ix_(S, T)].ravel(), minlength=group.order)


def _as_set(group: Group, elems: Iterable[int]) -> tuple[int, ...]:
    out = tuple(sorted(group._check(g) for g in elems))
    if len(set(out)) != len(out):
        raise ValueError("repeated element in subset")
    return out


def check_nf(group: Group, S: Iterable[int], T: Iterable[int]) -> int | None:
    """λ if ``S + T`` covers every non-identity element exactly λ ≥ 1 times
    and never the identity, else ``None``."""
    S, T = _as_set(group, S), _as_set(group, T)
    if not S or not T or group.order < 2:
        return None
    counts = sumset_counts(group, S, T)
    lam = int(counts[1])
    if counts[0] != 0 or lam < 1 or not np.all(counts[1:] == lam):
        return None
    return lam


def check_ds(group: Group, D: Iterable[int]) -> tuple[int, int, int] | None:
    """``(v, k, λ)`` if ``D D^(-1) = k e + λ (G - e)``."""
    D = _as_set(group, D)
    if not D:
        return None
    counts = np.bincount(group.sub_table[np.ix_(D, D)].ravel(), minlength=group.order)
    v, k = group.order, len(D)
    if v == 1:
        return None
    lam = int(counts[1])
    if counts[0] != k or not np.all(counts[1:] == lam):
        return None
    return v, k, lam


def check_pds(group: Group, D: Iterable[int]) -> tuple[int, int, int, int] | None:
    """``(v, k, λ, μ)`` if ``D D^(-1) = (k-μ) e + (λ-μ) D + μ G`` and ``e ∉ D``.

    When ``D`` is also a difference set (λ = μ) the pair is returned with
    λ = μ; sets where every nonidentity element outside or inside ``D`` is
    absent (``D`` or its complement empty) give ``None``.
    """
    D = _as_set(group, D)
    v, k = group.order, len(D)
    if not D or 0 in D or k == v - 1:
        return None
    counts = np.bincount(group.sub_table[np.ix_(D, D)].ravel(), minlength=group.order)
    if counts[0] != k:
        return None
    inside = np.zeros(v, dtype=bool)
    inside[list(D)] = True
    outside = ~inside
    outside[0] = False
    lam_vals = np.unique(counts[inside])
    mu_vals = np.unique(counts[outside])
    if len(lam_vals) != 1 or len(mu_vals) != 1:
        return None
    return v, k, int(lam_vals[0]), int(mu_vals[0])


def matrix_M(group: Group, B: Iterable[int]) -> np.ndarray:
    """``M[i, j] = 1`` iff ``g_j - g_i`` lies in ``B``."""
    mask = np.zeros(group.order, dtype=np.int64)
    mask[list(_as_set(group, B))] = 1
    return mask[group.sub_table.T]


class NotANearFactorization(ValueError):
    pass


@dataclass(frozen=True)
class NearFactorization:
    """A verified λ-fold near-factorization ``S + T = λ (G - e)``."""

    group: Group
    S: tuple[int, ...]
    T: tuple[int, ...]
    lam: int = 0

    def __post_init__(self):
        S = _as_set(self.group, self.S)
        T = _as_set(self.group, self.T)
        lam = check_nf(self.group, S, T)
        if lam is None:
            raise NotANearFactorization(
                f"{self.group.format_set(S)} x {self.group.format_set(T)} is not a near-factorization of {self.group.name}"
            )
        if self.lam and self.lam != lam:
            raise NotANearFactorization(f"claimed lambda={self.lam} but the pair has lambda={lam}")
        assert len(S) * len(T) == lam * (self.group.order - 1)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "lam", lam)

    @property
    def n(self) -> int:
        return self.group.order

    @property
    def s(self) -> int:
        return len(self.S)

    @property
    def t(self) -> int:
        return len(self.T)

    @property
    def params(self) -> tuple[int, int, int]:
        return self.s, self.t, self.lam

    @property
    def symmetric(self) -> bool:
        return is_symmetric(self.group, self.S) and is_symmetric(self.group, self.T)

    def dual(self) -> NearFactorization:
        """``(-T, -S)``, an NF with the roles of s and t swapped."""
        neg = self.group.neg_table
        return NearFactorization(
            self.group, tuple(int(neg[x]) for x in self.T), tuple(int(neg[x]) for x in self.S), self.lam
        )

    def translate(self, g: int) -> NearFactorization:
        """``(S + g, T - g)``."""
        add, neg = self.group.add_table, self.group.neg_table
        return NearFactorization(
            self.group,
            tuple(int(add[x, g]) for x in self.S),
            tuple(int(add[x, neg[g]]) for x in self.T),
            self.lam,
        )

    def map(self, perm: Sequence[int]) -> NearFactorization:
        return NearFactorization(
            self.group, tuple(perm[x] for x in self.S), tuple(perm[x] for x in self.T), self.lam
        )

    def describe(self) -> str:
        return (
            f"NF({self.s},{self.t}) of {self.group.name} with lambda = {self.lam}\n"
            f"  S = {self.group.format_set(self.S)}\n  T = {self.group.format_set(self.T)}"
        )
