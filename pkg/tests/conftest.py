from __future__ import annotations

import itertools
from pathlib import Path

import pytest

from nearfact.groups import Group, abelian_groups

GOLDEN = Path(__file__).parent / "golden"


def groups_up_to(n_max: int, n_min: int = 2) -> list[Group]:
    return [G for n in range(n_min, n_max + 1) for G in abelian_groups(n)]


def subsets(n: int, max_size: int, min_size: int = 1):
    for k in range(min_size, max_size + 1):
        yield from itertools.combinations(range(n), k)


def ids(groups) -> list[str]:
    return [G.name for G in groups]


@pytest.fixture
def golden():
    return GOLDEN
