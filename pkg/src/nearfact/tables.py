"""Reference rows for the three existence tables and their reproduction.

Table 1: existing NFs with λ >= 2 for abelian groups of order <= 35.
Table 2: symmetric NFs with λ >= 2 for 36 <= n <= 50.
Table 3: feasible parameters (order <= 35) ruled out only by exhaustive search.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .constructions import (
    SeedDesign,
    ds_to_nf,
    iterated_halfset,
    pds_to_nf,
    product_halfset,
    symmetrize_by_translation,
    debruijn_nf,
    transport,
    paley_ds,
    paley_pds,
)
from .catalog_io import load_builtin
from .group_ring import NearFactorization
from .groups import Group, parse_group

__all__ = [
    "TableRow",
    "TABLE1",
    "TABLE2",
    "TABLE3",
    "table3_quadruples",
    "search_found_rows",
    "build_row",
    "RowResult",
    "reproduce_tables",
    "format_rows",
]


@dataclass(frozen=True)
class TableRow:
    n: int
    group: str
    s: int
    t: int
    lam: int
    symmetric: bool | None
    method: str  # "catalog:<id>", "iterated:a,b", "product:<name>", "search"

    @property
    def G(self) -> Group:
        return parse_group(self.group)


def _r(n, g, s, t, lam, sym, method):
    return TableRow(n, g, s, t, lam, sym, method)


TABLE1: list[TableRow] = [
    _r(7, "Z7", 3, 4, 2, False, "catalog:Z7-DS-3"),
    _r(9, "Z3xZ3", 4, 4, 2, True, "iterated:3,3"),
    _r(11, "Z11", 5, 6, 3, False, "catalog:Z11-DS-5"),
    _r(13, "Z13", 4, 9, 3, False, "catalog:Z13-DS-4"),
    _r(13, "Z13", 6, 6, 3, True, "catalog:Z13-PDS-6"),
    _r(15, "Z15", 4, 7, 2, True, "iterated:5,3"),
    _r(15, "Z15", 7, 8, 4, False, "catalog:Z15-DS-7"),
    _r(16, "Z2xZ2xZ2xZ2", 6, 10, 4, True, "catalog:Z2xZ2xZ2xZ2-DS-6"),
    _r(16, "Z4xZ4", 6, 10, 4, True, "catalog:Z4xZ4-DS-6"),
    _r(16, "Z4xZ2xZ2", 6, 10, 4, True, "catalog:Z4xZ2xZ2-DS-6"),
    _r(16, "Z8xZ2", 5, 9, 3, False, "search"),
    _r(16, "Z8xZ2", 6, 10, 4, False, "catalog:Z8xZ2-DS-6"),
    _r(17, "Z17", 8, 8, 4, True, "catalog:Z17-PDS-8"),
    _r(19, "Z19", 9, 10, 5, False, "catalog:Z19-DS-9"),
    _r(21, "Z21", 4, 10, 2, True, "iterated:7,3"),
    _r(21, "Z21", 5, 16, 4, False, "catalog:Z21-DS-5"),
    _r(21, "Z21", 8, 10, 4, False, "product:z3xz7"),
    _r(23, "Z23", 11, 12, 6, False, "catalog:Z23-DS-11"),
    _r(25, "Z5xZ5", 4, 12, 2, True, "iterated:5,5"),
    _r(25, "Z5xZ5", 12, 12, 6, True, "catalog:Z5xZ5-PDS-12"),
    _r(27, "Z3xZ3xZ3", 8, 13, 4, True, "iterated:3,3,3"),
    _r(27, "Z3xZ3xZ3", 13, 14, 7, False, "catalog:Z3xZ3xZ3-DS-13"),
    _r(27, "Z9xZ3", 4, 13, 2, True, "iterated:9,3"),
    _r(28, "Z14xZ2", 9, 12, 4, False, "search"),
    _r(29, "Z29", 14, 14, 7, True, "catalog:Z29-PDS-14"),
    _r(31, "Z31", 6, 20, 4, False, "search"),
    _r(31, "Z31", 6, 25, 5, False, "catalog:Z31-DS-6"),
    _r(31, "Z31", 15, 16, 8, False, "catalog:Z31-DS-15"),
    _r(33, "Z33", 4, 16, 2, True, "iterated:11,3"),
    _r(33, "Z33", 12, 16, 6, False, "product:z3xz11"),
    _r(35, "Z35", 4, 17, 2, True, "iterated:7,5"),
    _r(35, "Z35", 8, 17, 4, False, "product:z7xz5"),
]

TABLE2: list[TableRow] = [
    _r(36, "Z6xZ6", 15, 21, 9, True, "catalog:Z6xZ6-DS-15"),
    _r(37, "Z37", 18, 18, 9, True, "catalog:Z37-PDS-18"),
    _r(39, "Z39", 4, 19, 2, True, "iterated:13,3"),
    _r(39, "Z39", 12, 19, 6, True, "product:z3xz13"),
    _r(41, "Z41", 20, 20, 10, True, "catalog:Z41-PDS-20"),
    _r(45, "Z15xZ3", 4, 22, 2, True, "iterated:15,3"),
    _r(45, "Z15xZ3", 8, 22, 4, True, "iterated:5,3,3"),
    _r(45, "Z45", 4, 22, 2, True, "iterated:9,5"),
    _r(49, "Z7xZ7", 4, 24, 2, True, "iterated:7,7"),
    _r(49, "Z7xZ7", 24, 24, 12, True, "catalog:Z7xZ7-PDS-24"),
]

_ALL16 = ["Z2xZ2xZ2xZ2", "Z4xZ2xZ2", "Z4xZ4", "Z8xZ2", "Z16"]
_T3: list[tuple[int, list[str], list[tuple[int, int, int]]]] = [
    (11, ["Z11"], [(4, 5, 2)]),
    (13, ["Z13"], [(3, 8, 2), (4, 6, 2)]),
    (15, ["Z15"], [(6, 7, 3)]),
    (16, _ALL16, [(3, 10, 2), (5, 6, 2)]),
    (16, [g for g in _ALL16 if g != "Z8xZ2"], [(5, 9, 3)]),
    (17, ["Z17"], [(4, 8, 2), (6, 8, 3)]),
    (19, ["Z19"], [(3, 12, 2), (4, 9, 2), (6, 6, 2), (6, 9, 3), (8, 9, 4)]),
    (21, ["Z21"], [(5, 8, 2), (4, 15, 3), (5, 12, 3), (6, 10, 3)]),
    (22, ["Z22"], [(3, 14, 2), (6, 7, 2), (7, 9, 3), (6, 14, 4), (7, 12, 4)]),
    (23, ["Z23"], [(4, 11, 2), (6, 11, 3), (8, 11, 4), (10, 11, 5)]),
    (25, ["Z5xZ5", "Z25"], [(3, 16, 2), (6, 8, 2), (4, 18, 3), (6, 12, 3), (8, 9, 3), (6, 16, 4), (8, 12, 4), (8, 15, 5), (10, 12, 5)]),
    (25, ["Z25"], [(4, 12, 2)]),
    (26, ["Z26"], [(5, 10, 2), (5, 15, 3), (10, 10, 4)]),
    (27, ["Z3xZ3xZ3", "Z27"], [(4, 13, 2)]),
    (27, ["Z3xZ3xZ3", "Z9xZ3", "Z27"], [(6, 13, 3), (10, 13, 5), (12, 13, 6)]),
    (27, ["Z9xZ3", "Z27"], [(8, 13, 4)]),
    (28, ["Z14xZ2", "Z28"], [(3, 18, 2), (6, 9, 2), (9, 9, 3), (6, 18, 4), (9, 15, 5)]),
    (28, ["Z28"], [(9, 12, 4)]),
    (29, ["Z29"], [(4, 14, 2), (7, 8, 2), (4, 21, 3), (6, 14, 3), (7, 12, 3), (7, 16, 4), (8, 14, 4), (7, 20, 5), (10, 14, 5), (12, 14, 6)]),
    (31, ["Z31"], [(3, 20, 2), (4, 15, 2), (5, 12, 2), (6, 10, 2), (5, 18, 3), (6, 15, 3), (9, 10, 3), (5, 24, 4), (8, 15, 4), (10, 12, 4), (10, 15, 5), (9, 20, 6), (10, 18, 6), (12, 15, 6), (14, 15, 7)]),
    (33, ["Z33"], [(8, 8, 2), (4, 24, 3), (6, 16, 3), (8, 12, 3), (8, 16, 4), (8, 20, 5), (10, 16, 5), (14, 16, 7)]),
    (34, ["Z34"], [(3, 22, 2), (6, 11, 2), (9, 11, 3), (6, 22, 4), (11, 12, 4), (11, 15, 5), (9, 22, 6), (11, 18, 6), (11, 21, 7)]),
    (35, ["Z35"], [(6, 17, 3), (10, 17, 5), (12, 17, 6), (14, 17, 7), (16, 17, 8)]),
]

TABLE3: list[TableRow] = [
    _r(n, g, s, t, lam, None, "search")
    for n, groups, params in _T3
    for g in groups
    for s, t, lam in params
]


def table3_quadruples(max_order: int = 35) -> list[tuple[str, int, int, int]]:
    return sorted((r.group, r.s, r.t, r.lam) for r in TABLE3 if r.n <= max_order)


def search_found_rows(max_order: int = 35) -> list[TableRow]:
    """Table 1 rows off the boundary ``s+t ∈ {n-1, n}``: the ones that needed search
    or a non-difference-set construction."""
    return [r for r in TABLE1 if r.n <= max_order and r.s + r.t not in (r.n - 1, r.n)]


# -- building the object behind a row -------------------------------------------------


_CATALOG: dict[str, object] | None = None


def catalog_objects() -> dict[str, object]:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = {r.id: r.to_object() for r in load_builtin()}
    return _CATALOG


def _halfset_seed(n: int) -> NearFactorization:
    """Half-set seeds used by the named product examples."""
    if n == 3:
        return symmetrize_by_translation(debruijn_nf(3, 2, 1))
    if n == 5:
        return symmetrize_by_translation(debruijn_nf(5, 2, 2))
    if n % 4 == 3:
        return ds_to_nf(paley_ds(n)).dual()
    return pds_to_nf(paley_pds(n))


NAMED_PRODUCTS = {"z3xz5": (3, 5), "z3xz7": (3, 7), "z3xz11": (3, 11), "z7xz5": (7, 5), "z3xz13": (3, 13)}


def named_product(name: str) -> NearFactorization:
    a, b = NAMED_PRODUCTS[name]
    return product_halfset(_halfset_seed(a), _halfset_seed(b))


def _fit(nf: NearFactorization, G: Group, s: int, t: int) -> NearFactorization:
    if (nf.s, nf.t) == (t, s) and s != t:
        nf = nf.dual()
    if nf.group != G:
        nf = transport(nf, G)
    return nf


def build_row(row: TableRow) -> NearFactorization | None:
    """The NF for a row's cited construction (``None`` for search rows)."""
    G = row.G
    kind, _, arg = row.method.partition(":")
    if kind == "catalog":
        obj = catalog_objects()[arg]
        if isinstance(obj, SeedDesign):
            nf = ds_to_nf(obj) if obj.kind == "DS" else pds_to_nf(obj)
        else:
            nf = obj
    elif kind == "iterated":
        nf = iterated_halfset([int(x) for x in arg.split(",")])
    elif kind == "product":
        nf = named_product(arg)
    else:
        return None
    return _fit(nf, G, row.s, row.t)


# -- reproduction --------------------------------------------------------------------------


@dataclass
class RowResult:
    row: TableRow
    status: str  # "exists", "nonexistent", "undecided"
    symmetric: bool | None = None
    nf: NearFactorization | None = None
    symmetric_nf: NearFactorization | None = None
    how: str = ""
    candidates: int = 0
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        r = self.row
        out = {
            "n": r.n,
            "group": r.group,
            "s": r.s,
            "t": r.t,
            "lambda": r.lam,
            "status": self.status,
            "symmetric": self.symmetric,
            "method": self.how,
            "candidates": self.candidates,
            "seconds": round(self.seconds, 3),
        }
        if self.nf is not None:
            G = self.nf.group
            out["S"] = [list(G.coords(x)) for x in self.nf.S]
            out["T"] = [list(G.coords(x)) for x in self.nf.T]
        if self.notes:
            out["notes"] = self.notes
        return out


def _sym_text(v: bool | None) -> str:
    return "yes" if v else ("no" if v is False else "?")


def format_rows(results: Iterable[RowResult], fmt: str = "text", which: int = 1) -> str:
    results = list(results)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "group", "s", "t", "lambda", "symmetric", "method"])
        for r in results:
            w.writerow([r.row.n, r.row.group, r.row.s, r.row.t, r.row.lam, _sym_text(r.symmetric), r.how or r.status])
        return buf.getvalue()
    lines = []
    if which == 3:
        # one line per (n, s, t, lambda) listing every group it applies to
        merged: dict[tuple, list[RowResult]] = {}
        for r in results:
            merged.setdefault((r.row.n, r.row.s, r.row.t, r.row.lam, r.status), []).append(r)
        lines.append(f"{'n':>3}  {'s':>3} {'t':>3} {'lambda':>6}  {'status':<12} groups")
        for (n, s, t, lam, status), rs in merged.items():
            groups = ", ".join(x.row.group for x in rs)
            cands = sum(x.candidates for x in rs)
            lines.append(f"{n:>3}  {s:>3} {t:>3} {lam:>6}  {status:<12} {groups}  ({cands} candidates)")
    else:
        lines.append(f"{'n':>3}  {'group':<14} {'s':>3} {'t':>3} {'lambda':>6}  {'sym':<4} authority")
        for r in results:
            lines.append(
                f"{r.row.n:>3}  {r.row.group:<14} {r.row.s:>3} {r.row.t:>3} {r.row.lam:>6}  "
                f"{_sym_text(r.symmetric):<4} {r.how if r.status == 'exists' else r.status}"
            )
    return "\n".join(lines) + "\n"


def reproduce_tables(
    which: int,
    max_order: int,
    workers: int = 1,
    budget: int | None = 2_000_000,
    progress: Callable[[RowResult], None] | None = None,
) -> list[RowResult]:
    """Reproduce a table up to ``max_order``.

    Table 1 and 2 rows are decided from their reference rows (construction
    first, search for the sporadic rows, symmetric-only search for rows
    without a symmetric example).  Table 3 rows are certified by exhaustion.
    """
    from .search import decide_row, certify_row

    if which == 1:
        rows = [r for r in TABLE1 if r.n <= min(max_order, 35)]
        results = [decide_row(r, workers=workers, budget=budget) for r in rows]
    elif which == 2:
        rows = [r for r in TABLE2 if r.n <= min(max_order, 50)]
        results = [decide_row(r, workers=workers, budget=budget) for r in rows]
    elif which == 3:
        rows = [r for r in TABLE3 if r.n <= min(max_order, 35)]
        results = []
        for r in rows:
            results.append(certify_row(r, workers=workers, budget=budget))
            if progress:
                progress(results[-1])
        return results
    else:
        raise ValueError("which must be 1, 2 or 3")
    if progress:
        for r in results:
            progress(r)
    return results
