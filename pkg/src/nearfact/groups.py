"""Finite abelian groups given as products of cyclic factors.

Elements are plain integers: the mixed-radix index of the coordinate tuple,
with the first listed factor most significant.  For a group written in
canonical form (largest invariant factor first, e.g. ``Z8xZ2``) this is the
"last invariant factor most significant" order, and comparing sorted index
tuples is the lexicographic order on coordinate tuples.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .numtheory import factorize, units_mod

__all__ = [
    "Group",
    "GroupSyntaxError",
    "Automorphism",
    "parse_group",
    "cyclic",
    "direct_product",
    "abelian_groups",
    "isomorphism",
    "automorphism_group",
    "automorphism_generators",
    "canonical_reject",
    "translation_normalize",
    "is_symmetric",
    "negate_set",
    "translate_set",
]

# Cost ceiling for brute-force enumeration of Aut(G) (product of candidate
# image counts over a minimal generating set).
AUT_BUDGET = 10**7


class GroupSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Group:
    """Direct product ``Z_{m_1} x ... x Z_{m_k}`` of cyclic groups.

    ``factors`` is the presentation as written.  It need not be in
    invariant-factor form; :attr:`invariant_factors` gives that.  The empty
    tuple is the trivial group.
    """

    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(m) for m in self.factors))
        for m in self.factors:
            if m < 2:
                raise ValueError(f"cyclic factor must be >= 2, got {m}")

    # -- structure ---------------------------------------------------------

    @cached_property
    def order(self) -> int:
        n = 1
        for m in self.factors:
            n *= m
        return n

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out, acc = [], 1
        for m in reversed(self.factors):
            out.append(acc)
            acc *= m
        return tuple(reversed(out))

    @cached_property
    def invariant_factors(self) -> tuple[int, ...]:
        """Invariant factors ``m_1 | m_2 | ... | m_k``, ascending."""
        return _invariant_factors(self.factors)

    @property
    def name(self) -> str:
        if not self.factors:
            return "Z1"
        return "x".join(f"Z{m}" for m in self.factors)

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Group({self.name})"

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) <= 1

    def is_isomorphic(self, other: Group) -> bool:
        return self.invariant_factors == other.invariant_factors

    def canonical(self) -> Group:
        """The isomorphic group written with invariant factors, largest first."""
        return Group(tuple(reversed(self.invariant_factors)))

    @property
    def elements(self) -> range:
        return range(self.order)

    # -- coordinates ---------------------------------------------------------

    def coords(self, g: int) -> tuple[int, ...]:
        return tuple((g // st) % m for st, m in zip(self.strides, self.factors))

    def index(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.factors):
            raise ValueError(f"{self.name} expects {len(self.factors)} coordinates, got {len(coords)}")
        return sum((int(c) % m) * st for c, m, st in zip(coords, self.factors, self.strides))

    @cached_property
    def coord_array(self) -> np.ndarray:
        """``(n, k)`` array of coordinates of every element."""
        idx = np.arange(self.order)
        cols = [(idx // st) % m for st, m in zip(self.strides, self.factors)]
        if not cols:
            return np.zeros((self.order, 0), dtype=np.int64)
        return np.stack(cols, axis=1).astype(np.int64)

    def index_array(self, coords: np.ndarray) -> np.ndarray:
        mods = np.array(self.factors, dtype=np.int64)
        st = np.array(self.strides, dtype=np.int64)
        return ((coords % mods) * st).sum(axis=-1)

    # -- arithmetic ----------------------------------------------------------

    @cached_property
    def add_table(self) -> np.ndarray:
        c = self.coord_array
        return self.index_array(c[:, None, :] + c[None, :, :])

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self.index_array(-self.coord_array)

    @cached_property
    def sub_table(self) -> np.ndarray:
        """``sub_table[a, b] == a - b``."""
        return self.add_table[:, self.neg_table]

    def _check(self, g: int) -> int:
        g = int(g)
        if not 0 <= g < self.order:
            raise ValueError(f"element {g} not in {self.name}")
        return g

    def add(self, g: int, h: int) -> int:
        return int(self.add_table[self._check(g), self._check(h)])

    def negate(self, g: int) -> int:
        return int(self.neg_table[self._check(g)])

    def sub(self, g: int, h: int) -> int:
        return int(self.sub_table[self._check(g), self._check(h)])

    def multiple(self, k: int, g: int) -> int:
        return self.index([k * c for c in self.coords(g)])

    def element_order(self, g: int) -> int:
        o = 1
        for c, m in zip(self.coords(g), self.factors):
            o = _lcm(o, m // _gcd(c, m))
        return o

    # -- rendering -----------------------------------------------------------

    def format_element(self, g: int) -> str:
        c = self.coords(g)
        if len(c) == 1:
            return str(c[0])
        return "(" + ",".join(map(str, c)) + ")"

    def format_set(self, elems: Iterable[int]) -> str:
        return "{" + ", ".join(self.format_element(g) for g in sorted(elems)) + "}"

    def element_from_json(self, value) -> int:
        if isinstance(value, bool):
            raise ValueError(f"bad element {value!r}")
        if isinstance(value, int):
            if len(self.factors) != 1:
                raise ValueError(f"bare integer {value} is only valid in a cyclic presentation")
            value = [value]
        coords = [int(v) for v in value]
        for c, m in zip(coords, self.factors):
            if not 0 <= c < m:
                raise ValueError(f"coordinate {c} out of range for Z{m}")
        return self.index(coords)

    def parse_element(self, text: str) -> int:
        text = text.strip()
        if text.startswith("("):
            if not text.endswith(")"):
                raise ValueError(f"unbalanced element literal {text!r}")
            return self.element_from_json([int(x) for x in text[1:-1].split(",")])
        return self.element_from_json(int(text))

    def parse_set(self, text: str) -> tuple[int, ...]:
        """Parse ``1,4,11`` (cyclic) or ``(0,1),(2,3)`` set literals."""
        text = text.strip().strip("{}").replace(" ", "")
        if not text:
            return ()
        if "(" in text:
            parts = re.findall(r"\([^()]*\)", text)
            if ",".join(parts) != text:
                raise ValueError(f"malformed set literal {text!r}")
        else:
            parts = text.split(",")
        elems = [self.parse_element(p) for p in parts]
        if len(set(elems)) != len(elems):
            raise ValueError(f"repeated element in {text!r}")
        return tuple(sorted(elems))


def cyclic(n: int) -> Group:
    return Group((n,))


_TERM = re.compile(r"\(?z(\d+)\)?(?:\^(\d+))?", re.IGNORECASE)


def parse_group(spec: str, canonical: bool = False) -> Group:
    """Parse ``Z<n>`` terms joined by ``x`` (``Z8xZ2``, ``z15``, ``Z3^2``).

    The presentation is kept as written; ``canonical=True`` returns the
    invariant-factor form instead.
    """
    text = spec.strip()
    if not text:
        raise GroupSyntaxError("empty group spec")
    factors: list[int] = []
    for term in re.split(r"x(?=\(?z)", text, flags=re.IGNORECASE):
        mt = _TERM.fullmatch(term)
        if mt is None:
            raise GroupSyntaxError(f"cannot parse group term {term!r} in {spec!r}")
        m = int(mt.group(1))
        if m < 2:
            raise GroupSyntaxError(f"cyclic factor must be >= 2 in {spec!r}")
        factors.extend([m] * int(mt.group(2) or 1))
    g = Group(tuple(factors))
    return g.canonical() if canonical else g


def direct_product(g1: Group, g2: Group) -> tuple[Group, callable]:
    """Return ``G1 x G2`` and the pairing map ``(a, b) -> index``."""
    prod = Group(g1.factors + g2.factors)
    n2 = g2.order

    def pair(a: int, b: int) -> int:
        return int(a) * n2 + int(b)

    return prod, pair


def abelian_groups(n: int) -> list[Group]:
    """All abelian groups of order ``n`` up to isomorphism, canonical form."""
    if n == 1:
        return [Group(())]
    per_prime = []
    for p, e in factorize(n):
        per_prime.append([(p, part) for part in _partitions(e)])
    groups = []
    for choice in itertools.product(*per_prime):
        rank = max(len(part) for _, part in choice)
        inv = [1] * rank
        for p, part in choice:
            for i, a in enumerate(sorted(part, reverse=True)):
                inv[i] *= p**a
        groups.append(Group(tuple(m for m in inv if m > 1)))
    groups.sort(key=lambda g: (len(g.factors), [-m for m in g.factors]), reverse=True)
    return groups


def _partitions(e: int, largest: int | None = None) -> list[tuple[int, ...]]:
    if largest is None:
        largest = e
    if e == 0:
        return [()]
    out = []
    for first in range(min(e, largest), 0, -1):
        for rest in _partitions(e - first, first):
            out.append((first,) + rest)
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _lcm(a: int, b: int) -> int:
    return a // _gcd(a, b) * b


def _invariant_factors(factors: Sequence[int]) -> tuple[int, ...]:
    powers: dict[int, list[int]] = {}
    for m in factors:
        for p, e in factorize(m):
            powers.setdefault(p, []).append(p**e)
    if not powers:
        return ()
    rank = max(len(v) for v in powers.values())
    inv = [1] * rank
    for v in powers.values():
        for i, q in enumerate(sorted(v, reverse=True)):
            inv[i] *= q
    return tuple(sorted(m for m in inv if m > 1))


# -- isomorphisms ------------------------------------------------------------


def _primary_map(g: Group) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Primary cyclic components ``(p, p^e)`` and each element's components.

    Components are sorted by ``(p, p^e)`` with ties kept in presentation
    order, so two isomorphic presentations line up position by position.
    """
    comps: list[tuple[int, int, int]] = []  # (p, q, factor position)
    for pos, m in enumerate(g.factors):
        for p, e in factorize(m):
            comps.append((p, p**e, pos))
    order = sorted(range(len(comps)), key=lambda i: (comps[i][0], comps[i][1], i))
    comps = [comps[i] for i in order]
    c = g.coord_array
    cols = [c[:, pos] % q for _, q, pos in comps]
    vals = np.stack(cols, axis=1) if cols else np.zeros((g.order, 0), dtype=np.int64)
    return [(p, q) for p, q, _ in comps], vals


def isomorphism(g: Group, h: Group) -> np.ndarray:
    """An explicit isomorphism ``g -> h`` as an index array."""
    if not g.is_isomorphic(h):
        raise ValueError(f"{g.name} and {h.name} are not isomorphic")
    comps_g, vals_g = _primary_map(g)
    comps_h, vals_h = _primary_map(h)
    assert comps_g == comps_h
    lookup = {tuple(row): i for i, row in enumerate(vals_h.tolist())}
    return np.array([lookup[tuple(row)] for row in vals_g.tolist()], dtype=np.int64)


# -- automorphisms -----------------------------------------------------------


@dataclass(frozen=True)
class Automorphism:
    """A group automorphism stored as the permutation of element indices."""

    perm: tuple[int, ...]
    label: str = field(default="", compare=False)

    def __call__(self, g: int) -> int:
        return self.perm[g]

    def apply(self, elems: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted(self.perm[g] for g in elems))

    def is_automorphism_of(self, g: Group) -> bool:
        p = np.asarray(self.perm)
        if p.shape != (g.order,) or len(set(self.perm)) != g.order or p[0] != 0:
            return False
        add = g.add_table
        return bool(np.array_equal(p[add], add[p[:, None], p[None, :]]))


def _minimal_generators(g: Group) -> list[Automorphism]:
    n = g.order
    out: dict[tuple[int, ...], Automorphism] = {}
    out[tuple(g.neg_table.tolist())] = Automorphism(tuple(g.neg_table.tolist()), "negate")
    coords = g.coord_array
    for i, m in enumerate(g.factors):
        for u in units_mod(m):
            if u == 1:
                continue
            c = coords.copy()
            c[:, i] = (c[:, i] * u) % m
            perm = tuple(g.index_array(c).tolist())
            out.setdefault(perm, Automorphism(perm, f"x{i}*{u}"))
    for i, j in itertools.combinations(range(len(g.factors)), 2):
        if g.factors[i] == g.factors[j]:
            c = coords.copy()
            c[:, [i, j]] = c[:, [j, i]]
            perm = tuple(g.index_array(c).tolist())
            out.setdefault(perm, Automorphism(perm, f"swap{i}{j}"))
    ident = tuple(range(n))
    out.pop(ident, None)
    return list(out.values())


def _aut_candidate_count(c: Group) -> int:
    coords = c.coord_array
    total = 1
    for m in c.factors:
        killed = int(np.all((coords * m) % np.array(c.factors) == 0, axis=1).sum())
        total *= killed
    return total


def _aut_bruteforce(c: Group) -> list[tuple[int, ...]]:
    """All automorphisms of a canonical-form group, by generator images."""
    n, k = c.order, len(c.factors)
    mods = np.array(c.factors, dtype=np.int64)
    coords = c.coord_array
    cands = [
        [x for x in range(n) if np.all((coords[x] * m) % mods == 0)]
        for m in c.factors
    ]
    add = c.add_table
    results: list[tuple[int, ...]] = []

    def span(gens_sub: set[int], h: int) -> set[int]:
        out = set(gens_sub)
        frontier = list(gens_sub)
        while frontier:
            nxt = []
            for a in frontier:
                b = int(add[a, h])
                if b not in out:
                    out.add(b)
                    nxt.append(b)
            frontier = nxt
        return out

    def rec(i: int, images: list[int], sub: set[int], size: int):
        if i == k:
            h = coords[np.array(images)]  # k x k matrix of image coordinates
            img = (coords @ h) % mods
            results.append(tuple(c.index_array(img).tolist()))
            return
        target = size * c.factors[i]
        for x in cands[i]:
            new = span(sub, x)
            if len(new) == target:
                rec(i + 1, images + [x], new, target)

    rec(0, [], {0}, 1)
    return results


def automorphism_group(g: Group, budget: int = AUT_BUDGET) -> list[tuple[int, ...]] | None:
    """Every automorphism of ``g`` as an index permutation, or ``None``.

    ``None`` means the brute-force candidate count exceeds ``budget``.
    """
    return _aut_group_cached(g, budget)


_AUT_CACHE: dict[tuple[Group, int], list[tuple[int, ...]] | None] = {}


def _aut_group_cached(g: Group, budget: int):
    key = (g, budget)
    if key not in _AUT_CACHE:
        c = g.canonical()
        if _aut_candidate_count(c) > budget:
            _AUT_CACHE[key] = None
        else:
            auts = _aut_bruteforce(c)
            if c != g:
                phi = isomorphism(g, c)
                inv = np.empty_like(phi)
                inv[phi] = np.arange(g.order)
                auts = [tuple(inv[np.asarray(a)[phi]].tolist()) for a in auts]
            _AUT_CACHE[key] = sorted(auts)
    return _AUT_CACHE[key]


def _closure(gens: Sequence[tuple[int, ...]], n: int, cap: int | None = None) -> set[tuple[int, ...]]:
    ident = tuple(range(n))
    seen = {ident}
    queue = deque([np.arange(n)])
    arrs = [np.asarray(p) for p in gens]
    while queue:
        cur = queue.popleft()
        for a in arrs:
            nxt = tuple(a[cur].tolist())
            if nxt not in seen:
                seen.add(nxt)
                if cap is not None and len(seen) > cap:
                    return seen
                queue.append(np.asarray(nxt))
    return seen


def automorphism_generators(g: Group, budget: int = AUT_BUDGET) -> list[Automorphism]:
    """Verified automorphisms generating (when affordable) all of Aut(G).

    Always contains negation, the unit multiplications on each cyclic factor
    and swaps of equal factors.  When the full group can be enumerated within
    ``budget`` further elements are added until the set generates it.
    """
    gens = _minimal_generators(g)
    full = automorphism_group(g, budget)
    if full is not None:
        have = _closure([a.perm for a in gens], g.order)
        for perm in full:
            if perm not in have:
                gens.append(Automorphism(perm, f"aut{len(gens)}"))
                have = _closure([a.perm for a in gens], g.order)
                if len(have) == len(full):
                    break
    for a in gens:
        if not a.is_automorphism_of(g):
            raise AssertionError(f"{a.label} is not an automorphism of {g.name}")
    return gens


# -- subsets and canonical forms ------------------------------------------------


def translate_set(g: Group, elems: Iterable[int], by: int) -> tuple[int, ...]:
    row = g.add_table[:, by]
    return tuple(sorted(int(row[x]) for x in elems))


def negate_set(g: Group, elems: Iterable[int]) -> tuple[int, ...]:
    neg = g.neg_table
    return tuple(sorted(int(neg[x]) for x in elems))


def is_symmetric(g: Group, elems: Iterable[int]) -> bool:
    s = set(elems)
    neg = g.neg_table
    return all(int(neg[x]) in s for x in s)


def translation_normalize(g: Group, elems: Iterable[int]) -> tuple[int, ...]:
    """Lex-least translate of the set among those containing the identity."""
    elems = tuple(elems)
    if not elems:
        return ()
    sub = g.sub_table
    return min(tuple(sorted(int(sub[x, a]) for x in elems)) for a in elems)


def canonical_reject(
    g: Group, elems: Iterable[int], transforms: Sequence[Automorphism | Sequence[int]] = ()
) -> bool:
    """True when a transform followed by translation-normalisation gives a
    strictly lex-smaller set.

    Sound for any collection of automorphisms: the lex-least member of an
    equivalence class is never rejected.
    """
    s = tuple(sorted(elems))
    if not s:
        raise ValueError("canonical_reject needs a nonempty set")
    if translation_normalize(g, s) < s:
        return True
    for t in transforms:
        perm = t.perm if isinstance(t, Automorphism) else t
        if translation_normalize(g, [perm[x] for x in s]) < s:
            return True
    return False
