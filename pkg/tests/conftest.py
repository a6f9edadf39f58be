import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from isoclass.cayley import GroupTable, build_from_generators

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def perm_group(*gens):
    """Table of the permutation group generated by ``gens`` (tuples, composed left to right)."""
    compose = lambda p, q: tuple(q[i] for i in p)
    n = len(gens[0])
    table, elems = build_from_generators(compose, [tuple(g) for g in gens], identity=tuple(range(n)))
    return table, elems


def cyclic(n: int) -> GroupTable:
    return GroupTable([[(i + j) % n for j in range(n)] for i in range(n)])


def direct_product(g: GroupTable, h: GroupTable) -> GroupTable:
    a, b = g.order, h.order
    mul = (g.mul[:, None, :, None] * b + h.mul[None, :, None, :]).reshape(a * b, a * b)
    return GroupTable(mul, g.identity * b + h.identity)


@pytest.fixture(scope="session")
def quaternion() -> GroupTable:
    # Q8 inside S8 via its regular representation
    i = (2, 3, 1, 0, 6, 7, 5, 4)
    j = (4, 5, 7, 6, 1, 0, 2, 3)
    return perm_group(i, j)[0]


@pytest.fixture(scope="session")
def dihedral8() -> GroupTable:
    return perm_group((1, 2, 3, 0), (0, 3, 2, 1))[0]


@pytest.fixture(scope="session")
def klein() -> GroupTable:
    return direct_product(cyclic(2), cyclic(2))


__all__ = ["perm_group", "cyclic", "direct_product", "np"]
