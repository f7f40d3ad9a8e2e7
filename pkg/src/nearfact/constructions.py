"""Explicit near-factorization constructions and the seed designs they use."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .fields import BinaryField, PrimeSquareField
from .group_ring import NearFactorization, check_ds, check_pds
from .groups import Group, cyclic, direct_product, is_symmetric, isomorphism, negate_set
from .numtheory import is_prime, prime_power

__all__ = [
    "ConstructionError",
    "SeedDesign",
    "trivial_nf",
    "debruijn_nf",
    "ds_to_nf",
    "nf_to_ds",
    "pds_to_nf",
    "nf_to_pds",
    "is_halfset",
    "product_halfset",
    "symmetrize_by_translation",
    "iterated_halfset",
    "transport",
    "paley_ds",
    "paley_pds",
    "twin_prime_ds",
    "singer_ds",
    "builtin_catalog",
]


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class SeedDesign:
    """A verified difference set or partial difference set."""

    kind: str  # "DS" or "PDS"
    group: Group
    D: tuple[int, ...]
    params: tuple[int, ...] = ()
    source: str = "catalog"

    def __post_init__(self):
        D = tuple(sorted(self.D))
        if self.kind == "DS":
            got = check_ds(self.group, D)
        elif self.kind == "PDS":
            got = check_pds(self.group, D)
        else:
            raise ConstructionError(f"unknown design kind {self.kind!r}")
        if got is None:
            raise ConstructionError(f"{self.group.format_set(D)} is not a {self.kind} in {self.group.name}")
        if self.params and tuple(self.params) != got:
            raise ConstructionError(f"claimed parameters {tuple(self.params)} but verified {got}")
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "params", got)

    @property
    def symmetric(self) -> bool:
        return is_symmetric(self.group, self.D)

    def describe(self) -> str:
        return f"{self.params}-{self.kind} in {self.group.name}: {self.group.format_set(self.D)}"


# -- basic families -------------------------------------------------------------


def trivial_nf(group: Group, g: int = 0) -> NearFactorization:
    if group.order < 2:
        raise ConstructionError("the trivial group has no near-factorization")
    ng = group.negate(g)
    return NearFactorization(group, (g,), tuple(x for x in group.elements if x != ng))


def debruijn_nf(n: int, s: int, t: int) -> NearFactorization:
    """λ = 1 NF of Z_n with ``S = {0..s-1}`` and ``T = {1, s+1, ..., (t-1)s+1}``."""
    if s < 1 or t < 1 or s * t != n - 1:
        raise ConstructionError(f"de Bruijn needs s*t = n-1, got s={s}, t={t}, n={n}")
    G = cyclic(n)
    return NearFactorization(G, tuple(range(s)), tuple((j * s + 1) % n for j in range(t)), 1)


def ds_to_nf(seed: SeedDesign) -> NearFactorization:
    """``(D, G - (-D))`` with λ = k - λ_DS."""
    if seed.kind != "DS":
        raise ConstructionError("ds_to_nf needs a difference set")
    v, k, lam_ds = seed.params
    G = seed.group
    minus = set(negate_set(G, seed.D))
    return NearFactorization(G, seed.D, tuple(x for x in G.elements if x not in minus), k - lam_ds)


def nf_to_ds(nf: NearFactorization) -> SeedDesign:
    if nf.n != nf.s + nf.t:
        raise ConstructionError(f"need n = s + t, got n={nf.n}, s={nf.s}, t={nf.t}")
    return SeedDesign("DS", nf.group, nf.S, (nf.n, nf.s, nf.s - nf.lam), source="nf")


def pds_to_nf(seed: SeedDesign) -> NearFactorization:
    """``(D, G - (-D) - e)`` with λ = k - μ; requires μ = λ_PDS + 1."""
    if seed.kind != "PDS":
        raise ConstructionError("pds_to_nf needs a partial difference set")
    v, k, lam_p, mu = seed.params
    if mu != lam_p + 1:
        raise ConstructionError(f"PDS parameters {seed.params} do not have mu = lambda + 1")
    G = seed.group
    drop = set(negate_set(G, seed.D)) | {0}
    return NearFactorization(G, seed.D, tuple(x for x in G.elements if x not in drop), k - mu)


def nf_to_pds(nf: NearFactorization) -> SeedDesign:
    """Translate ``S`` so that ``-(S+g)`` and ``T-g`` partition ``G - e``."""
    if nf.n != nf.s + nf.t + 1:
        raise ConstructionError(f"need n = s + t + 1, got n={nf.n}, s={nf.s}, t={nf.t}")
    G = nf.group
    for g in G.elements:
        moved = nf.translate(g)
        covered = set(negate_set(G, moved.S)) | set(moved.T)
        if len(covered) == nf.n - 1 and 0 not in covered:
            return SeedDesign("PDS", G, moved.S, (nf.n, nf.s, nf.s - nf.lam - 1, nf.s - nf.lam), source="nf")
    raise ConstructionError("no translate gives a partial difference set")  # pragma: no cover


# -- half-set products ----------------------------------------------------------------


def is_halfset(nf: NearFactorization) -> bool:
    return nf.n % 2 == 1 and nf.s == 2 * nf.lam and 2 * nf.t == nf.n - 1


def product_halfset(nf1: NearFactorization, nf2: NearFactorization) -> NearFactorization:
    """Half-set NF of ``G1 x G2``: ``S1 x S2`` and
    ``((G1 - T1) x T2) ∪ (T1 x (G2 - T2))``."""
    for nf in (nf1, nf2):
        if not is_halfset(nf):
            raise ConstructionError(f"not a half-set NF: (s,t,lambda) = {nf.params} in {nf.group.name}")
    G, pair = direct_product(nf1.group, nf2.group)
    T1, T2 = set(nf1.T), set(nf2.T)
    S3 = [pair(a, b) for a in nf1.S for b in nf2.S]
    T3 = [pair(a, b) for a in nf1.group.elements if a not in T1 for b in T2]
    T3 += [pair(a, b) for a in T1 for b in nf2.group.elements if b not in T2]
    return NearFactorization(G, tuple(S3), tuple(T3), 2 * nf1.lam * nf2.lam)


def symmetrize_by_translation(nf: NearFactorization) -> NearFactorization | None:
    for g in nf.group.elements:
        moved = nf.translate(g)
        if is_symmetric(nf.group, moved.S):
            assert moved.symmetric
            return moved
    return None


def iterated_halfset(orders: Sequence[int]) -> NearFactorization:
    """Symmetric half-set NF of ``Z_{n_1} x ... x Z_{n_k}`` with s = 2^k."""
    if not orders:
        raise ConstructionError("need at least one factor")
    for m in orders:
        if m < 3 or m % 2 == 0:
            raise ConstructionError(f"factor orders must be odd and >= 3, got {m}")
    result = None
    for m in orders:
        piece = symmetrize_by_translation(debruijn_nf(m, 2, (m - 1) // 2))
        assert piece is not None
        result = piece if result is None else product_halfset(result, piece)
    return result


def transport(nf: NearFactorization, target: Group) -> NearFactorization:
    """Carry an NF to an isomorphic presentation."""
    phi = isomorphism(nf.group, target)
    return NearFactorization(target, tuple(int(phi[x]) for x in nf.S), tuple(int(phi[x]) for x in nf.T), nf.lam)


# -- seed designs -------------------------------------------------------------------


def _field_group(q: int) -> tuple[Group, list[int]]:
    """Additive group of F_q (q prime or p^2) and its nonzero squares."""
    pp = prime_power(q)
    if pp is None or pp[1] > 2:
        raise ConstructionError(f"q must be a prime or the square of a prime, got {q}")
    p, e = pp
    if e == 1:
        G = cyclic(p)
        return G, sorted({x * x % p for x in range(1, p)})
    F = PrimeSquareField(p)
    G = Group((p, p))
    return G, sorted(G.index(z) for z in F.nonzero_squares())


def paley_ds(q: int) -> SeedDesign:
    if q % 4 != 3:
        raise ConstructionError(f"Paley difference sets need q = 3 mod 4, got {q}")
    G, D = _field_group(q)
    return SeedDesign("DS", G, tuple(D), source="paley")


def paley_pds(q: int) -> SeedDesign:
    if q % 4 != 1:
        raise ConstructionError(f"Paley partial difference sets need q = 1 mod 4, got {q}")
    G, D = _field_group(q)
    return SeedDesign("PDS", G, tuple(D), source="paley")


def _chi(x: int, p: int) -> int:
    x %= p
    if x == 0:
        return 0
    return 1 if pow(x, (p - 1) // 2, p) == 1 else -1


def twin_prime_ds(q: int) -> SeedDesign:
    """Twin-prime DS in ``Z_q x Z_{q+2}``."""
    if not (is_prime(q) and is_prime(q + 2)):
        raise ConstructionError(f"q and q+2 must both be prime, got {q}")
    r = q + 2
    G = Group((q, r))
    D = [G.index((x, y)) for x in range(q) for y in range(r) if y == 0 or _chi(x, q) * _chi(y, r) == 1]
    return SeedDesign("DS", G, tuple(D), source="twin_prime")


def singer_ds(d: int) -> SeedDesign:
    """Logarithms of the nonzero trace-zero elements of F_{2^(d+1)}."""
    if not 2 <= d <= 5:
        raise ConstructionError(f"Singer construction supported for 2 <= d <= 5, got {d}")
    F = BinaryField(d + 1)
    n = (1 << (d + 1)) - 1
    D = [i for i, a in enumerate(F.powers) if F.trace(a) == 0]
    return SeedDesign("DS", cyclic(n), tuple(D), (n, (1 << d) - 1, (1 << (d - 1)) - 1), source="singer")


def builtin_catalog():
    """Records of the shipped catalog (explicit sets from the reference tables)."""
    from .catalog_io import load_builtin

    return load_builtin()


def seed_from_elements(kind: str, group: Group, elems: Iterable, source: str = "catalog") -> SeedDesign:
    return SeedDesign(kind, group, tuple(group.element_from_json(e) for e in elems), source=source)
