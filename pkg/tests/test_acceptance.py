"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (visible in ``pytest -v``
output) and then asserts, so a failing criterion shows both the line and the
first mismatch.
"""

from __future__ import annotations

import itertools
import sys
from collections import Counter

import pytest

from nearfact.constructions import (
    SeedDesign,
    ds_to_nf,
    iterated_halfset,
    pds_to_nf,
    product_halfset,
    symmetrize_by_translation,
)
from nearfact.filters import FAIL, appendix_quadruples, check_all
from nearfact.group_ring import NearFactorization, check_nf
from nearfact.groups import cyclic, parse_group
from nearfact.mate import mate, mate_bruteforce
from nearfact.search import SearchConfig, certify_nonexistence, decide_row, search
from nearfact.tables import TABLE1, TABLE2, TABLE3, build_row, catalog_objects, named_product, search_found_rows

from conftest import groups_up_to
from test_search import _bruteforce_classes, _oracle_class


def _report(capsys, n: int, title: str, problems: list[str]) -> None:
    with capsys.disabled():
        status = "PASS" if not problems else "FAIL"
        detail = "" if not problems else f"  ({len(problems)} problem(s): {problems[0]})"
        sys.stdout.write(f"\n{status} criterion {n}: {title}{detail}\n")
    assert not problems, problems


def _sets(G, spec: str) -> tuple[int, ...]:
    return tuple(sorted(G.parse_set(spec)))


def _expect(problems, label, got, want):
    if got != want:
        problems.append(f"{label}: got {got}, expected {want}")


# 1 -----------------------------------------------------------------------------------------


def test_criterion_1_worked_examples(capsys):
    problems: list[str] = []

    G = cyclic(15)
    S, T = (1, 4, 11, 14), (0, 2, 6, 7, 8, 9, 13)
    _expect(problems, "Z15 verify", check_nf(G, S, T), 2)
    r = mate(G, S)
    _expect(problems, "Z15 mate", (r.T, r.lam), (T, 2))

    nf = ds_to_nf(SeedDesign("DS", cyclic(11), (1, 3, 4, 5, 9)))
    _expect(problems, "Z11 DS->NF", (nf.T, nf.lam), ((0, 1, 3, 4, 5, 9), 3))

    nf = pds_to_nf(SeedDesign("PDS", cyclic(13), (1, 3, 4, 9, 10, 12)))
    _expect(problems, "Z13 PDS->NF", (nf.T, nf.lam), ((2, 5, 6, 7, 8, 11), 3))

    G3, G5 = cyclic(3), cyclic(5)
    nf = product_halfset(NearFactorization(G3, (1, 2), (0,)), NearFactorization(G5, (2, 3), (1, 4)))
    P = nf.group
    _expect(problems, "Z3xZ5 product S", nf.S, _sets(P, "(1,2),(1,3),(2,2),(2,3)"))
    _expect(problems, "Z3xZ5 product T", nf.T, _sets(P, "(1,1),(1,4),(2,1),(2,4),(0,0),(0,2),(0,3)"))
    _expect(problems, "Z3xZ5 product lambda", nf.lam, 2)

    problems += _z3xz7_problems()
    _report(capsys, 1, "worked examples reproduce exactly", problems)


def _z3xz7_problems() -> list[str]:
    problems: list[str] = []
    nf = named_product("z3xz7")
    P = nf.group
    if P.factors != (3, 7):
        return [f"z3xz7 group {P.name}"]
    _expect(problems, "z3xz7 lambda", nf.lam, 4)
    _expect(problems, "z3xz7 S", nf.S, _sets(P, "(1,0),(1,3),(1,5),(1,6),(2,0),(2,3),(2,5),(2,6)"))
    # the printed T lists (4,1) and (4,2), which are not elements of Z3xZ7
    want_T = [(0, 0), (0, 3), (0, 5), (0, 6), (1, 1), (1, 2), (2, 1), (2, 2), (4, 1), (4, 2)]
    got_T = [P.coords(x) for x in nf.T]
    _expect(problems, "z3xz7 T", got_T, want_T)
    return problems


# 2 -----------------------------------------------------------------------------------------


def test_criterion_2_table1(capsys):
    problems: list[str] = []
    sporadic = {("Z8xZ2", 5, 9, 3), ("Z14xZ2", 9, 12, 4), ("Z31", 6, 20, 4)}
    for row in TABLE1:
        res = decide_row(row, budget=None)
        tag = f"{row.group} ({row.s},{row.t},{row.lam})"
        if res.status != "exists":
            problems.append(f"{tag}: {res.status}")
            continue
        nf = res.nf
        if nf.group != row.G or (nf.s, nf.t) != (row.s, row.t) or check_nf(nf.group, nf.S, nf.T) != row.lam:
            problems.append(f"{tag}: returned NF does not verify")
        key = (row.group, row.s, row.t, row.lam)
        want_how = "search" if key in sporadic else row.method
        _expect(problems, f"{tag} method", res.how, want_how)
        _expect(problems, f"{tag} symmetric", res.symmetric, row.symmetric)
        if res.symmetric:
            sym = res.symmetric_nf
            if not sym.symmetric or check_nf(sym.group, sym.S, sym.T) != row.lam:
                problems.append(f"{tag}: symmetric witness does not verify")
    _report(capsys, 2, f"Table 1 reproduction ({len(TABLE1)} rows)", problems)


# 3 -----------------------------------------------------------------------------------------


def test_criterion_3_table3_certification(capsys):
    problems: list[str] = []
    rows = [r for r in TABLE3 if r.n <= 23]
    for row in rows:
        out = certify_nonexistence(row.G, row.s, row.t, row.lam, budget=None)
        if not out.exhausted or out.found:
            problems.append(f"{row.group} ({row.s},{row.t},{row.lam}): exhausted={out.exhausted} found={len(out.found)}")
    _report(capsys, 3, f"Table 3 nonexistence certified for {len(rows)} rows with n <= 23", problems)


# 4 -----------------------------------------------------------------------------------------


def test_criterion_4_appendix_multiset(capsys):
    problems: list[str] = []
    quads = appendix_quadruples(35)
    _expect(problems, "feasible off-boundary quadruples", len(quads), 144)
    found = search_found_rows(35)
    _expect(problems, "search-found rows", len(found), 13)
    remaining = Counter((G.name, s, t, lam) for G, s, t, lam in quads)
    remaining.subtract(Counter((r.group, min(r.s, r.t), max(r.s, r.t), r.lam) for r in found))
    remaining = +remaining
    expected = Counter((r.group, r.s, r.t, r.lam) for r in TABLE3)
    _expect(problems, "remaining count", sum(remaining.values()), 131)
    if remaining != expected:
        problems.append(f"multiset differs: extra {remaining - expected}, missing {expected - remaining}")
    _report(capsys, 4, "144 - 13 = 131 quadruples match Table 3", problems)


# 5 -----------------------------------------------------------------------------------------


def _known_nfs() -> list[NearFactorization]:
    out = [o for o in catalog_objects().values() if isinstance(o, NearFactorization)]
    for o in catalog_objects().values():
        if isinstance(o, SeedDesign):
            out.append(ds_to_nf(o) if o.kind == "DS" else pds_to_nf(o))
    for row in TABLE1 + TABLE2:
        nf = build_row(row)
        if nf is not None:
            out.append(nf)
    for G in groups_up_to(16, 4):
        for s in range(2, min(6, G.order - 1) + 1):
            out += search(G, s).found
    return out


def test_criterion_5_filters(capsys):
    problems: list[str] = []
    nfs = _known_nfs()
    for nf in nfs:
        for s, t in ((nf.s, nf.t), (nf.t, nf.s)):
            rep = check_all(nf.group, s, t, nf.lam)
            if not rep.feasible:
                bad = [k for k, (v, _) in rep.verdicts.items() if v == FAIL]
                problems.append(f"{nf.group.name} ({s},{t},{nf.lam}) rejected by {bad}")

    z15 = build_row(next(r for r in TABLE1 if (r.group, r.s, r.t) == ("Z15", 7, 8)))
    _expect(problems, "Z15 (7,8) lambda", z15.lam, (z15.s + z15.t + 1) // 4)
    _expect(problems, "Z15 (7,8,4) filters", check_all(cyclic(15), 7, 8, 4).feasible, True)

    rep = check_all(parse_group("Z3xZ3"), 2, 4, 1)
    _expect(problems, "(Z3)^2 (2,4,1) congruence", rep.verdicts["congruence"][0], FAIL)
    _report(capsys, 5, f"{len(nfs)} known NFs pass all filters; bound and congruence cases", problems)


# 6 -----------------------------------------------------------------------------------------


def test_criterion_6_oracle_equivalence(capsys):
    problems: list[str] = []
    groups = groups_up_to(12, 2)
    for G in groups:
        for k in range(1, min(4, G.order - 1) + 1):
            for S in itertools.combinations(range(G.order), k):
                a, b = mate(G, S), mate_bruteforce(G, S)
                if (a.T, a.lam) != (b.T, b.lam):
                    problems.append(f"{G.name} S={S}: mate {a.T} vs brute force {b.T}")
            out = search(G, SearchConfig(size=k))
            got = {_oracle_class(G, nf.S, nf.T) for nf in out.found}
            if not out.exhausted or got != _bruteforce_classes(G, k):
                problems.append(f"{G.name} size {k}: pruned search classes differ")
    _report(capsys, 6, f"mate and pruned search match brute force on {len(groups)} groups", problems)


# 7 -----------------------------------------------------------------------------------------


def test_criterion_7_constructions(capsys):
    problems: list[str] = []
    for orders, group, params in [
        ((3, 3), "Z3xZ3", (4, 4, 2)),
        ((5, 3), "Z15", (4, 7, 2)),
        ((3, 3, 3), "Z3xZ3xZ3", (8, 13, 4)),
        ((7, 3), "Z21", (4, 10, 2)),
    ]:
        nf = iterated_halfset(orders)
        G = parse_group(group)
        if not nf.group.is_isomorphic(G):
            problems.append(f"iterated {orders}: group {nf.group.name}")
        _expect(problems, f"iterated {orders}", (nf.s, nf.t, check_nf(nf.group, nf.S, nf.T)), params)
        _expect(problems, f"iterated {orders} symmetric", nf.symmetric, True)

    problems += _z3xz7_problems()

    for row in TABLE2:
        if row.n not in (36, 37, 39, 41, 45, 49) or row.method == "search":
            continue
        tag = f"{row.group} ({row.s},{row.t},{row.lam})"
        nf = build_row(row)
        if nf.group != row.G or (nf.s, nf.t) != (row.s, row.t) or check_nf(nf.group, nf.S, nf.T) != row.lam:
            problems.append(f"{tag}: does not verify")
        if row.symmetric and not (nf.symmetric or symmetrize_by_translation(nf) is not None):
            problems.append(f"{tag}: no symmetric translate")
    _report(capsys, 7, "constructions reproduce their table rows", problems)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
