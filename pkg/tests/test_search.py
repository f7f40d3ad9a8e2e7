from __future__ import annotations

import itertools
import json
from math import comb

import pytest

from nearfact.constructions import symmetrize_by_translation
from nearfact.filters import check_all
from nearfact.group_ring import NearFactorization, check_nf
from nearfact.groups import automorphism_group, cyclic, parse_group
from nearfact.mate import mate_bruteforce
from nearfact.search import SearchConfig, certify_nonexistence, class_key, search

from conftest import groups_up_to, ids


def _oracle_class(G, S, T):
    """Lex-least S over the full class: automorphisms, translations, duality."""
    auts = automorphism_group(G)
    options = [S]
    if len(S) == len(T):
        options.append(tuple(G.negate(x) for x in T))
    best = None
    for A in options:
        for p in auts:
            img = [p[x] for x in A]
            for g in G.elements:
                cand = tuple(sorted(G.add(x, g) for x in img))
                if best is None or cand < best:
                    best = cand
    return best


def _bruteforce_classes(G, s, symmetric=False):
    """All NF classes with |S| = s from every subset, no pruning, brute-force mates."""
    classes = set()
    for S in itertools.combinations(range(G.order), s):
        if symmetric and sorted(G.negate(x) for x in S) != list(S):
            continue
        r = mate_bruteforce(G, S)
        if r:
            classes.add(_oracle_class(G, S, r.T))
    return classes


def _search_classes(G, s, **kw):
    out = search(G, SearchConfig(size=s, **kw))
    assert out.exhausted
    return {_oracle_class(G, nf.S, nf.T) for nf in out.found}, out


SMALL = groups_up_to(12, 3)


@pytest.mark.parametrize("G", SMALL, ids=ids(SMALL))
def test_pruned_search_matches_bruteforce(G):
    for s in range(1, min(4, G.order - 1) + 1):
        got, out = _search_classes(G, s)
        assert got == _bruteforce_classes(G, s), s
        # one representative per class
        assert len(got) == len(out.found)
        assert out.candidates_examined <= comb(G.order, s)


@pytest.mark.parametrize("G", SMALL, ids=ids(SMALL))
def test_minimal_transforms_match(G):
    for s in range(2, min(4, G.order - 1) + 1):
        full, _ = _search_classes(G, s)
        minimal, _ = _search_classes(G, s, transforms="minimal")
        bare, _ = _search_classes(G, s, transforms="translations")
        assert full == minimal == bare


@pytest.mark.parametrize("G", SMALL, ids=ids(SMALL))
def test_symmetric_search_matches_bruteforce(G):
    for s in range(1, min(4, G.order - 1) + 1):
        out = search(G, SearchConfig(size=s, symmetric_only=True))
        assert out.exhausted
        for nf in out.found:
            assert nf.symmetric
        got = {_oracle_class(G, nf.S, nf.T) for nf in out.found}
        want = _bruteforce_classes(G, s, symmetric=True)
        assert got == want


def test_search_z15_size_4():
    G = cyclic(15)
    out = search(G, 4)
    assert out.exhausted
    hits = out.with_lambda(2)
    assert len(hits) >= 1
    target = _oracle_class(G, (1, 4, 11, 14), (0, 2, 6, 7, 8, 9, 13))
    assert target in {_oracle_class(G, nf.S, nf.T) for nf in hits}


def test_search_z8xz2_size_5():
    G = parse_group("Z8xZ2")
    out = search(G, SearchConfig(size=5, lam=3))
    assert out.exhausted and out.with_lambda(3)
    sym = search(G, SearchConfig(size=5, lam=3, symmetric_only=True))
    assert sym.exhausted and not sym.found


def test_search_z11_size_4():
    out = search(cyclic(11), 4)
    assert out.exhausted and not out.found


def test_search_z13_symmetric_paley():
    out = search(cyclic(13), SearchConfig(size=6, symmetric_only=True))
    assert out.exhausted
    G = cyclic(13)
    paley = _oracle_class(G, (1, 3, 4, 9, 10, 12), (2, 5, 6, 7, 8, 11))
    assert paley in {_oracle_class(G, nf.S, nf.T) for nf in out.with_lambda(3)}


def test_found_nfs_verify_and_pass_filters():
    for G in groups_up_to(16, 13):
        for s in (4, 5, 6):
            out = search(G, s)
            for nf in out.found:
                assert check_nf(G, nf.S, nf.T) == nf.lam
                assert check_all(G, nf.s, nf.t, nf.lam).feasible


@pytest.mark.parametrize("n", range(3, 31))
def test_lambda_one_classes_have_symmetric_members(n):
    for G in [cyclic(n)] + [H for H in groups_up_to(n, n) if not H.is_cyclic]:
        for s in range(2, n - 1):
            if (n - 1) % s or s > (n - 1) // s:
                continue
            for nf in search(G, SearchConfig(size=s, lam=1)).found:
                found = False
                for p in automorphism_group(G) or [tuple(G.elements)]:
                    if symmetrize_by_translation(nf.map(p)) is not None:
                        found = True
                        break
                assert found, (G.name, nf.S)


def test_determinism_and_workers():
    G = parse_group("Z4xZ4")
    a = search(G, SearchConfig(size=6))
    b = search(G, SearchConfig(size=6))
    c = search(G, SearchConfig(size=6, workers=2))
    assert a.to_json() == b.to_json() == c.to_json()


def test_budget_and_stop_after():
    G = cyclic(21)
    out = search(G, SearchConfig(size=5, budget=1000))
    assert not out.exhausted and out.candidates_examined <= 1000
    out = search(cyclic(15), SearchConfig(size=4, stop_after=1))
    assert len(out.found) == 1 and not out.exhausted


def test_checkpoint_resume(tmp_path):
    G = cyclic(17)
    full = search(G, SearchConfig(size=4))
    ck = tmp_path / "ck.json"
    part = search(G, SearchConfig(size=4, budget=300, checkpoint=str(ck)))
    assert not part.exhausted
    state = json.loads(ck.read_text())
    assert 0 < state["partition_cursor"] < 15
    resumed = search(G, SearchConfig(size=4, checkpoint=str(ck)))
    assert resumed.exhausted
    assert resumed.candidates_examined == full.candidates_examined
    assert [nf.S for nf in resumed.found] == [nf.S for nf in full.found]
    with pytest.raises(ValueError):
        search(cyclic(19), SearchConfig(size=4, checkpoint=str(ck)))


def test_certify_examples():
    out = certify_nonexistence(cyclic(13), 3, 8, 2)
    assert out.exhausted and not out.found
    out = certify_nonexistence(cyclic(17), 6, 8, 3)
    assert out.exhausted and not out.found
    out = certify_nonexistence(cyclic(15), 4, 7, 2)
    assert out.found
    with pytest.raises(ValueError):
        certify_nonexistence(cyclic(15), 4, 7, 3)


def test_class_key_invariance():
    G = cyclic(15)
    nf = NearFactorization(G, (1, 4, 11, 14), (0, 2, 6, 7, 8, 9, 13))
    k = class_key(G, nf)
    assert class_key(G, nf.translate(5)) == k
    assert class_key(G, nf.map([2 * x % 15 for x in range(15)])) == k


def test_size_validation():
    with pytest.raises(ValueError):
        search(cyclic(7), 7)
    with pytest.raises(ValueError):
        SearchConfig(size=3, workers=0)
