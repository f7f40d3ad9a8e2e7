"""Exhaustive search for near-factorizations with orbit pruning.

Candidates ``S`` of a fixed size are enumerated in lexicographic order among
the sets containing the identity (every translate class has such a member).
A candidate is skipped when a translation, or an automorphism followed by a
translation, maps it to a lexicographically smaller set.  Survivors go to the
mate solver, which discovers λ.

Sorted index tuples are compared through the key ``sum(2**(n-1-x))``: for
sets of equal size the lexicographically smaller tuple has the larger key.
"""

from __future__ import annotations

import itertools
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .group_ring import NearFactorization
from .groups import Group, automorphism_generators, automorphism_group
from .mate import mate

__all__ = [
    "SearchConfig",
    "SearchOutcome",
    "search",
    "certify_nonexistence",
    "pruning_permutations",
    "class_key",
    "decide_row",
    "certify_row",
    "default_workers",
]

log = logging.getLogger(__name__)

# Aut(G) is used whole for pruning up to this size; beyond it a prefix of the
# sorted element list plus the generators is used (still sound).
MAX_PRUNING_PERMS = 256
CHUNK = 100_000


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("NF_WORKERS", "1")))
    except ValueError:
        return 1


@dataclass
class SearchConfig:
    size: int
    lam: int | None = None
    symmetric_only: bool = False
    transforms: str = "auto"  # auto | minimal | translations
    workers: int = 1
    budget: int | None = None
    stop_after: int | None = None
    checkpoint: str | None = None

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.transforms not in ("auto", "minimal", "translations"):
            raise ValueError(f"unknown transform set {self.transforms!r}")


@dataclass
class SearchOutcome:
    group: Group
    config: SearchConfig
    found: list[NearFactorization] = field(default_factory=list)
    exhausted: bool = False
    candidates_examined: int = 0
    survivors: int = 0
    elapsed: float = 0.0

    def with_lambda(self, lam: int) -> list[NearFactorization]:
        return [nf for nf in self.found if nf.lam == lam]

    def to_json(self) -> dict:
        G = self.group
        return {
            "group": G.name,
            "size": self.config.size,
            "lambda": self.config.lam,
            "symmetric_only": self.config.symmetric_only,
            "exhausted": self.exhausted,
            "candidates_examined": self.candidates_examined,
            "survivors": self.survivors,
            "found": [
                {
                    "s": nf.s,
                    "t": nf.t,
                    "lambda": nf.lam,
                    "symmetric": nf.symmetric,
                    "S": [list(G.coords(x)) for x in nf.S],
                    "T": [list(G.coords(x)) for x in nf.T],
                }
                for nf in self.found
            ],
        }


# -- transformation sets -------------------------------------------------------------


def pruning_permutations(G: Group, mode: str = "auto") -> np.ndarray:
    """Non-identity automorphisms used for pruning, as an ``(k, n)`` array."""
    n = G.order
    ident = tuple(range(n))
    if mode == "translations":
        return np.zeros((0, n), dtype=np.int64)
    gens = [a.perm for a in automorphism_generators(G)]
    perms: list[tuple[int, ...]] = list(dict.fromkeys(gens))
    if mode == "auto":
        full = automorphism_group(G)
        if full is not None:
            if len(full) <= MAX_PRUNING_PERMS:
                perms = list(full)
            else:
                extra = [p for p in full if p not in set(perms)]
                perms += extra[: MAX_PRUNING_PERMS - len(perms)]
    perms = [p for p in perms if p != ident]
    if not perms:
        return np.zeros((0, n), dtype=np.int64)
    return np.array(perms, dtype=np.int64)


def _weights(n: int) -> np.ndarray:
    if n <= 63:
        return np.array([1 << (n - 1 - x) for x in range(n)], dtype=np.uint64)
    return np.array([1 << (n - 1 - x) for x in range(n)], dtype=object)


def _keys(W: np.ndarray, sets: np.ndarray) -> np.ndarray:
    return W[sets].sum(axis=1)


def _translation_max_key(G: Group, W: np.ndarray, sets: np.ndarray) -> np.ndarray:
    """Largest key over the translates ``sets - a`` for ``a`` in the set."""
    sub = G.sub_table
    best = None
    for j in range(sets.shape[1]):
        k = _keys(W, sub[sets, sets[:, j : j + 1]])
        best = k if best is None else np.maximum(best, k)
    return best


def prune(G: Group, sets: np.ndarray, perms: np.ndarray, translations: bool = True) -> np.ndarray:
    """Boolean mask of rows that survive canonical rejection."""
    W = _weights(G.order)
    own = _keys(W, sets)
    if translations:
        alive = _translation_max_key(G, W, sets) <= own
    else:
        alive = np.ones(len(sets), dtype=bool)
    idx = np.flatnonzero(alive)
    for perm in perms:
        if idx.size == 0:
            break
        img = perm[sets[idx]]
        if translations:
            k = _translation_max_key(G, W, img)
        else:
            k = _keys(W, img)
        keep = k <= own[idx]
        idx = idx[keep]
    mask = np.zeros(len(sets), dtype=bool)
    mask[idx] = True
    return mask


# -- enumeration ------------------------------------------------------------------------


def _partitions(G: Group, s: int, symmetric: bool) -> list[tuple]:
    n = G.order
    if not symmetric:
        if s == 1:
            return [()]
        return [(a,) for a in range(1, n - s + 2)]
    singles, pairs = _symmetric_items(G)
    parts = []
    for m in range(0, min(s, len(singles)) + 1):
        if (s - m) % 2 or (s - m) // 2 > len(pairs):
            continue
        for chosen in itertools.combinations(singles, m):
            parts.append(chosen)
    return parts


def _symmetric_items(G: Group) -> tuple[list[int], list[tuple[int, int]]]:
    neg = G.neg_table
    singles = [g for g in G.elements if int(neg[g]) == g]
    pairs = [(g, int(neg[g])) for g in G.elements if g < int(neg[g])]
    return singles, pairs


def _partition_size(G: Group, s: int, symmetric: bool, part: tuple) -> int:
    n = G.order
    if not symmetric:
        if s == 1:
            return 1
        return comb(n - 1 - part[0], s - 2)
    _, pairs = _symmetric_items(G)
    return comb(len(pairs), (s - len(part)) // 2)


def _iter_partition(G: Group, s: int, symmetric: bool, part: tuple) -> Iterator[np.ndarray]:
    n = G.order
    if not symmetric:
        if s == 1:
            yield np.zeros((1, 1), dtype=np.int64)
            return
        a = part[0]
        gen = ((0, a) + rest for rest in itertools.combinations(range(a + 1, n), s - 2))
        width = s
    else:
        _, pairs = _symmetric_items(G)
        k = (s - len(part)) // 2
        gen = (
            part + tuple(x for pr in chosen for x in pr)
            for chosen in itertools.combinations(pairs, k)
        )
        width = s
    while True:
        block = list(itertools.islice(gen, CHUNK))
        if not block:
            return
        arr = np.array(block, dtype=np.int64).reshape(-1, width)
        if symmetric:
            arr.sort(axis=1)
        yield arr


def _run_partition(factors: tuple[int, ...], s: int, symmetric: bool, part: tuple, perms: np.ndarray,
                   stop_after: int | None, lam: int | None):
    G = Group(factors)
    found = []
    examined = survivors = 0
    for block in _iter_partition(G, s, symmetric, part):
        examined += len(block)
        mask = prune(G, block, perms, translations=not symmetric)
        for row in block[mask]:
            survivors += 1
            res = mate(G, [int(x) for x in row])
            if res.found and (lam is None or res.lam == lam):
                found.append((tuple(int(x) for x in row), res.T, res.lam))
                if stop_after is not None and len(found) >= stop_after:
                    return found, examined, survivors, False
    return found, examined, survivors, True


# -- equivalence classes ------------------------------------------------------------------


def _orbit_min(G: Group, S: Sequence[int], perms: np.ndarray, translations: bool) -> tuple[int, ...]:
    """Lex-least image of ``S`` under ``perms`` (plus identity) and translations."""
    sets = np.array([list(S)], dtype=np.int64)
    if len(perms):
        sets = np.concatenate([sets, perms[:, list(S)]], axis=0)
    sub = G.sub_table
    cands = []
    if translations:
        for j in range(sets.shape[1]):
            cands.append(np.sort(sub[sets, sets[:, j : j + 1]], axis=1))
    else:
        cands.append(np.sort(sets, axis=1))
    allc = np.concatenate(cands, axis=0)
    order = np.lexsort(allc.T[::-1])
    return tuple(int(x) for x in allc[order[0]])


def _closure_perms(G: Group) -> tuple[np.ndarray, bool]:
    full = automorphism_group(G)
    if full is not None:
        return np.array(full, dtype=np.int64), True
    # orbit of S computed by closing under generators instead
    return np.array([a.perm for a in automorphism_generators(G)], dtype=np.int64), False


def _orbit_min_closure(G: Group, S: Sequence[int], gens: np.ndarray, translations: bool, cap: int = 200_000):
    from .groups import translation_normalize

    start = translation_normalize(G, S) if translations else tuple(sorted(S))
    seen = {start}
    frontier = [start]
    while frontier and len(seen) < cap:
        nxt = []
        for A in frontier:
            for g in gens:
                img = [int(g[x]) for x in A]
                B = translation_normalize(G, img) if translations else tuple(sorted(img))
                if B not in seen:
                    seen.add(B)
                    nxt.append(B)
        frontier = nxt
    return min(seen)


def class_key(G: Group, nf: NearFactorization, symmetric: bool = False) -> tuple:
    """Identifier of the equivalence class of ``nf`` (duality folded in)."""
    perms, full = _closure_perms(G)
    neg = G.neg_table
    options = [nf.S]
    if nf.s == nf.t:
        options.append(tuple(sorted(int(neg[x]) for x in nf.T)))
    keys = []
    for S in options:
        if full:
            keys.append(_orbit_min(G, S, perms, translations=not symmetric))
        else:
            keys.append(_orbit_min_closure(G, S, perms, translations=not symmetric))
    return (nf.s, min(keys))


# -- driver ---------------------------------------------------------------------------


def _load_checkpoint(path: Path, G: Group, cfg: SearchConfig) -> dict | None:
    if not path.exists():
        return None
    data = json.loads(path.read_text())
    if data.get("group") != G.name or data.get("size") != cfg.size or data.get("symmetric") != cfg.symmetric_only:
        raise ValueError(f"checkpoint {path} belongs to a different search")
    return data


def _write_checkpoint(path: Path, G: Group, cfg: SearchConfig, done: int, found, examined: int, survivors: int):
    data = {
        "group": G.name,
        "size": cfg.size,
        "symmetric": cfg.symmetric_only,
        "partition_cursor": done,
        "candidates_examined": examined,
        "survivors": survivors,
        "found": [[list(S), list(T), lam] for S, T, lam in found],
    }
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(data))
    tmp.replace(path)


def search(G: Group, config: SearchConfig | int) -> SearchOutcome:
    """Find every NF class with ``|S| = config.size`` (or stop early)."""
    cfg = config if isinstance(config, SearchConfig) else SearchConfig(size=int(config))
    n, s = G.order, cfg.size
    if n < 2 or not 1 <= s <= n - 1:
        raise ValueError(f"size must lie in [1, n-1] for {G.name}, got {s}")
    t0 = time.perf_counter()
    sym = cfg.symmetric_only
    perms = pruning_permutations(G, "minimal" if cfg.transforms == "minimal" else cfg.transforms)
    parts = _partitions(G, s, sym)
    raw: list[tuple] = []
    examined = survivors = 0
    start = 0
    ckpt = Path(cfg.checkpoint) if cfg.checkpoint else None
    if ckpt is not None:
        state = _load_checkpoint(ckpt, G, cfg)
        if state:
            start = state["partition_cursor"]
            examined, survivors = state["candidates_examined"], state["survivors"]
            raw = [(tuple(S), tuple(T), lam) for S, T, lam in state["found"]]

    exhausted = True
    stopped = False
    todo = list(range(start, len(parts)))
    if cfg.budget is not None:
        # admit whole partitions while they fit the candidate budget
        admitted, total = [], examined
        for i in todo:
            size = _partition_size(G, s, sym, parts[i])
            if total + size > cfg.budget:
                exhausted = False
                break
            admitted.append(i)
            total += size
        todo = admitted

    def absorb(i, result):
        nonlocal examined, survivors, stopped
        f, e, sv, complete = result
        raw.extend(f)
        examined += e
        survivors += sv
        if not complete:
            stopped = True
        if ckpt is not None:
            _write_checkpoint(ckpt, G, cfg, i + 1, raw, examined, survivors)

    args = (G.factors, s, sym)
    if cfg.workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            futs = [(i, ex.submit(_run_partition, *args, parts[i], perms, cfg.stop_after, cfg.lam)) for i in todo]
            for i, fut in futs:
                absorb(i, fut.result())
                if cfg.stop_after is not None and len(raw) >= cfg.stop_after:
                    stopped = True
                    for _, other in futs:
                        other.cancel()
                    break
    else:
        for i in todo:
            remaining = None if cfg.stop_after is None else cfg.stop_after - len(raw)
            absorb(i, _run_partition(*args, parts[i], perms, remaining, cfg.lam))
            if cfg.stop_after is not None and len(raw) >= cfg.stop_after:
                stopped = True
                break

    if stopped:
        exhausted = False
    found = _dedup(G, raw, sym)
    return SearchOutcome(G, cfg, found, exhausted, examined, survivors, time.perf_counter() - t0)


def _dedup(G: Group, raw, symmetric: bool) -> list[NearFactorization]:
    by_key: dict[tuple, NearFactorization] = {}
    for S, T, lam in sorted(raw):
        nf = NearFactorization(G, S, T, lam)
        key = class_key(G, nf, symmetric=symmetric)
        if key not in by_key:
            by_key[key] = nf
    return [by_key[k] for k in sorted(by_key)]


def certify_nonexistence(G: Group, s: int, t: int, lam: int, workers: int = 1, budget: int | None = None,
                         symmetric_only: bool = False) -> SearchOutcome:
    """Exhaustive search for NF(s, t) with the given λ.

    An NF(s, t) exists iff its dual NF(t, s) does, so the smaller side is
    searched.  The outcome certifies nonexistence when it is exhausted with
    nothing found.
    """
    n = G.order
    if s * t != lam * (n - 1):
        raise ValueError(f"st = {s * t} differs from lambda(n-1) = {lam * (n - 1)}")
    size = min(s, t)
    cfg = SearchConfig(size=size, lam=lam, symmetric_only=symmetric_only, workers=workers, budget=budget)
    out = search(G, cfg)
    out.found = [nf for nf in out.found if nf.lam == lam]
    return out


# -- table rows ----------------------------------------------------------------------------


_CERT_CACHE: dict[tuple, SearchOutcome] = {}


def _cached_search(G: Group, size: int, symmetric: bool, workers: int, budget: int | None) -> SearchOutcome:
    key = (G, size, symmetric, budget)
    if key not in _CERT_CACHE:
        _CERT_CACHE[key] = search(G, SearchConfig(size=size, symmetric_only=symmetric, workers=workers, budget=budget))
    return _CERT_CACHE[key]


def decide_row(row, workers: int = 1, budget: int | None = None):
    """Existence and symmetric existence for a Table 1 / Table 2 row."""
    from .constructions import symmetrize_by_translation
    from .tables import RowResult, build_row

    t0 = time.perf_counter()
    G = row.G
    res = RowResult(row, "undecided")
    nf = build_row(row)
    if nf is not None:
        res.how = row.method
    else:
        cfg = SearchConfig(size=min(row.s, row.t), lam=row.lam, workers=workers, budget=budget, stop_after=1)
        out = search(G, cfg)
        res.candidates += out.candidates_examined
        hits = out.with_lambda(row.lam)
        if hits:
            nf = hits[0]
            if (nf.s, nf.t) != (row.s, row.t):
                nf = nf.dual()
            res.how = "search"
        else:
            res.status = "nonexistent" if out.exhausted else "undecided"
            res.seconds = time.perf_counter() - t0
            return res
    res.status, res.nf = "exists", nf
    sym = nf if nf.symmetric else symmetrize_by_translation(nf)
    if sym is not None:
        res.symmetric, res.symmetric_nf = True, sym
    else:
        out = _cached_search(G, min(row.s, row.t), True, workers, budget)
        res.candidates += out.candidates_examined
        hits = out.with_lambda(row.lam)
        if hits:
            res.symmetric, res.symmetric_nf = True, hits[0]
        elif out.exhausted:
            res.symmetric = False
            res.notes.append("symmetric-only search exhausted")
        else:
            res.notes.append("symmetric-only search over budget")
    res.seconds = time.perf_counter() - t0
    return res


def certify_row(row, workers: int = 1, budget: int | None = None):
    from .tables import RowResult

    t0 = time.perf_counter()
    G = row.G
    out = _cached_search(G, min(row.s, row.t), False, workers, budget)
    hits = out.with_lambda(row.lam)
    if hits:
        status = "exists"
    elif out.exhausted:
        status = "nonexistent"
    else:
        status = "undecided"
    res = RowResult(row, status, candidates=out.candidates_examined, seconds=time.perf_counter() - t0)
    if hits:
        res.nf = hits[0]
    res.how = "exhaustive search" if status == "nonexistent" else status
    return res
