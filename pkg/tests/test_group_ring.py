from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nearfact.group_ring import (
    GroupRingElement,
    NearFactorization,
    NotANearFactorization,
    check_ds,
    check_nf,
    check_pds,
    convolve,
    indicator,
    involution,
    matrix_M,
)
from nearfact.groups import is_symmetric, negate_set, parse_group

from conftest import groups_up_to, ids

Z15 = parse_group("Z15")
S15 = (1, 4, 11, 14)
T15 = (0, 2, 6, 7, 8, 9, 13)


def _coord_convolve(G, a, b):
    """Convolution computed from coordinates, without the group's tables."""
    out = [0] * G.order
    for g, ag in enumerate(a):
        for h, bh in enumerate(b):
            if ag and bh:
                cg, ch = G.coords(g), G.coords(h)
                s = tuple((x + y) % m for x, y, m in zip(cg, ch, G.factors))
                out[G.index(s)] += ag * bh
    return out


@st.composite
def ring_elements(draw, groups=groups_up_to(30), count=2):
    G = draw(st.sampled_from(groups))
    coeffs = st.lists(st.integers(-5, 5), min_size=G.order, max_size=G.order)
    return (G,) + tuple(GroupRingElement(G, draw(coeffs)) for _ in range(count))


# -- convolution -----------------------------------------------------------------------


def test_convolve_example_1():
    d = convolve(indicator(Z15, S15), indicator(Z15, T15))
    assert d.coeffs == (0,) + (2,) * 14


def test_convolve_identity():
    a = GroupRingElement(Z15, range(15))
    assert convolve(a, indicator(Z15, [0])) == a


def test_convolve_z5():
    Z5 = parse_group("Z5")
    assert convolve(indicator(Z5, [2, 3]), indicator(Z5, [1, 4])).coeffs == (0, 1, 1, 1, 1)


def test_convolve_mixed_groups():
    with pytest.raises(ValueError):
        convolve(indicator(Z15, [1]), indicator(parse_group("Z3xZ5"), [1]))


@settings(max_examples=80, deadline=None)
@given(ring_elements(count=3))
def test_convolution_ring_laws(data):
    G, a, b, c = data
    assert convolve(a, b) == convolve(b, a)
    assert convolve(a, b + c) == convolve(a, b) + convolve(a, c)
    assert convolve(a.scale(3), b) == convolve(a, b).scale(3)
    assert convolve(convolve(a, b), c) == convolve(a, convolve(b, c))


@settings(max_examples=60, deadline=None)
@given(ring_elements(groups=groups_up_to(16)))
def test_convolution_matches_coordinate_oracle(data):
    G, a, b = data
    assert list(convolve(a, b).coeffs) == _coord_convolve(G, a.coeffs, b.coeffs)


# -- involution ------------------------------------------------------------------------


def test_involution_example():
    Z11 = parse_group("Z11")
    assert involution(indicator(Z11, [1, 3, 4, 5, 9])).support() == (2, 6, 7, 8, 10)


def test_involution_symmetric_fixed():
    a = indicator(Z15, S15)
    assert involution(a) == a


@settings(max_examples=60, deadline=None)
@given(ring_elements())
def test_involution_laws(data):
    G, a, b = data
    assert involution(involution(a)) == a
    assert involution(convolve(a, b)) == convolve(involution(a), involution(b))


# -- check_nf ----------------------------------------------------------------------------


def test_check_nf_examples():
    assert check_nf(Z15, S15, T15) == 2
    assert check_nf(parse_group("Z13"), [1, 3, 4, 9, 10, 12], [2, 5, 6, 7, 8, 11]) == 3
    assert check_nf(parse_group("Z4"), [0, 1], [0, 1]) is None


def test_check_nf_degenerate():
    assert check_nf(Z15, [], T15) is None
    with pytest.raises(ValueError):
        check_nf(Z15, [1, 1], T15)
    with pytest.raises(ValueError):
        check_nf(Z15, [15], T15)


def _nf_oracle(G, S, T):
    counts = _coord_convolve(G, indicator(G, S).coeffs, indicator(G, T).coeffs)
    if counts[0] != 0 or len(set(counts[1:])) != 1 or counts[1] < 1:
        return None
    return counts[1]


@pytest.mark.parametrize("G", groups_up_to(6), ids=ids(groups_up_to(6)))
def test_check_nf_exhaustive_small(G):
    n = G.order
    subsets = [c for k in range(1, n) for c in itertools.combinations(range(n), k)]
    J_I = np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64)
    for S in subsets:
        MS = matrix_M(G, S)
        for T in subsets:
            lam = check_nf(G, S, T)
            assert lam == _nf_oracle(G, S, T)
            prod = MS @ matrix_M(G, T)
            matrix_lam = prod[0, 1] if np.array_equal(prod, prod[0, 1] * J_I) and prod[0, 1] > 0 else None
            assert lam == matrix_lam


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(groups_up_to(12)), st.data())
def test_matrix_characterization_random(G, data):
    n = G.order
    S = data.draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n - 1))
    T = data.draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n - 1))
    lam = check_nf(G, S, T)
    prod = matrix_M(G, S) @ matrix_M(G, T)
    J_I = np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64)
    if lam is None:
        assert not any(np.array_equal(prod, k * J_I) for k in range(1, n))
    else:
        assert np.array_equal(prod, lam * J_I)


def _known_nfs():
    from nearfact.tables import catalog_objects

    out = [NearFactorization(Z15, S15, T15)]
    out += [o for o in catalog_objects().values() if isinstance(o, NearFactorization)]
    return out


@pytest.mark.parametrize("nf", _known_nfs(), ids=lambda nf: f"{nf.group.name}-{nf.s}-{nf.t}")
def test_duality_and_symmetry(nf):
    G = nf.group
    assert check_nf(G, negate_set(G, nf.T), negate_set(G, nf.S)) == nf.lam
    if is_symmetric(G, nf.S):
        assert is_symmetric(G, nf.T)


def test_matrix_M_examples():
    MS, MT = matrix_M(Z15, S15), matrix_M(Z15, T15)
    assert np.all(MS.sum(axis=1) == 4)
    assert np.array_equal(MS @ MT, 2 * (np.ones((15, 15), dtype=np.int64) - np.eye(15, dtype=np.int64)))
    assert np.array_equal(matrix_M(Z15, [0]), np.eye(15, dtype=MS.dtype))
    x = np.zeros(15, dtype=MS.dtype)
    x[list(S15)] = 1
    assert np.array_equal(MS[0], x)


# -- difference sets ---------------------------------------------------------------------


def test_check_ds_examples():
    assert check_ds(parse_group("Z11"), [1, 3, 4, 5, 9]) == (11, 5, 2)
    assert check_ds(parse_group("Z7"), [0, 1, 3]) == (7, 3, 1)
    assert check_ds(parse_group("Z7"), [0, 1, 2]) is None


def test_check_pds_examples():
    assert check_pds(parse_group("Z13"), [1, 3, 4, 9, 10, 12]) == (13, 6, 2, 3)
    assert check_pds(parse_group("Z13"), [0, 1, 3, 4, 9, 10, 12]) is None
    assert check_pds(parse_group("Z13"), [1, 2, 3]) is None


def _ds_oracle(G, D):
    n = G.order
    diffs = [0] * n
    for a in D:
        for b in D:
            if a != b:
                diffs[G.sub(a, b)] += 1
    if len(set(diffs[1:])) == 1:
        return n, len(D), diffs[1]
    return None


@pytest.mark.parametrize("G", groups_up_to(16, 7), ids=ids(groups_up_to(16, 7)))
def test_ds_complement(G):
    n = G.order
    hits = 0
    for k in range(2, n - 1):
        for D in itertools.combinations(range(n), k):
            if D[0] != 0:
                break
            p = check_ds(G, D)
            assert p == _ds_oracle(G, D)
            if p:
                hits += 1
                v, kk, lam = p
                comp = [g for g in G.elements if g not in D]
                assert check_ds(G, comp) == (v, v - kk, v - 2 * kk + lam)
    # Z16 has no nontrivial difference set
    if n in (7, 11, 13, 15) or (n == 16 and not G.is_cyclic):
        assert hits


def test_near_factorization_object():
    nf = NearFactorization(Z15, S15, T15)
    assert nf.params == (4, 7, 2) and nf.symmetric is True
    assert nf.dual().params == (7, 4, 2)
    assert nf.translate(3).translate(12) == nf
    with pytest.raises(NotANearFactorization):
        NearFactorization(Z15, S15, T15, lam=3)
    with pytest.raises(NotANearFactorization):
        NearFactorization(Z15, S15, (0, 1))
