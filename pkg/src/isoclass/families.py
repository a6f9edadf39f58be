"""
Normal-form arithmetic for the two families of isobicyclic 2-groups.

``G1(e,f) = <h, g | h^n = g^n = 1, h^g = h^(1+2^f)>`` is metacyclic; an
element is ``g^i h^j``.  ``G2(e;k,l)`` is non-metacyclic; an element is
``a^i b^j``.  In both cases ``n = 2^e`` and exponents live in ``Z/n``.
"""
from __future__ import annotations

import re
from math import gcd
from dataclasses import dataclass, field
from functools import lru_cache, partial
from typing import NamedTuple, Union

import numpy as np

from .cayley import GroupTable, build_from_generators
from .errors import CapacityError, DomainError

MAX_TABLE_E = 8


class NFElement(NamedTuple):
    i: int
    j: int


@dataclass(frozen=True)
class Metacyclic:
    e: int
    f: int

    def __post_init__(self):
        if self.e < 2 or not 2 <= self.f <= self.e:
            raise DomainError(f"G1(e,f) needs e >= 2 and 2 <= f <= e, got {self}")

    @property
    def n(self) -> int:
        return 1 << self.e

    @property
    def m(self) -> int:
        return 1 << (self.e - 1)

    def __str__(self):
        return f"G1({self.e},{self.f})"


@dataclass(frozen=True)
class NonMetacyclic:
    e: int
    k: int = 0
    l: int = 0

    def __post_init__(self):
        if self.e < 2 or self.k not in (0, 1) or self.l not in (0, 1):
            raise DomainError(f"G2(e;k,l) needs e >= 2 and k, l in {{0, 1}}, got {self}")
        if self.e == 2 and (self.k, self.l) != (0, 0):
            raise DomainError("G2(2;k,l) is only defined for k = l = 0")

    @property
    def n(self) -> int:
        return 1 << self.e

    @property
    def m(self) -> int:
        return 1 << (self.e - 1)

    def __str__(self):
        return f"G2({self.e};{self.k},{self.l})"


GroupParams = Union[Metacyclic, NonMetacyclic]

_PARAM_RE = re.compile(r"^\s*G\s*([12])\s*\(\s*(\d+)\s*([,;])\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)\s*$")


def parse_params(text: str) -> GroupParams:
    """Parse ``G1(e,f)`` or ``G2(e;k,l)``."""
    mt = _PARAM_RE.match(text)
    if not mt:
        raise ValueError(f"cannot parse group parameters {text!r}")
    fam, e, sep, x, y = mt.groups()
    if fam == "1":
        if sep != "," or y is not None:
            raise ValueError(f"expected G1(e,f), got {text!r}")
        return Metacyclic(int(e), int(x))
    if sep != ";" or y is None:
        raise ValueError(f"expected G2(e;k,l), got {text!r}")
    return NonMetacyclic(int(e), int(x), int(y))


def format_nf(p: GroupParams, x: NFElement, sep: str = " ") -> str:
    s, t = ("g", "h") if isinstance(p, Metacyclic) else ("a", "b")
    return f"{s}^{x.i}{sep}{t}^{x.j}"


_NF_RE = re.compile(r"^\s*([a-z])\^(-?\d+)\s*\*?\s*([a-z])\^(-?\d+)\s*$")


def parse_nf(p: GroupParams, text: str) -> NFElement:
    mt = _NF_RE.match(text)
    s, t = ("g", "h") if isinstance(p, Metacyclic) else ("a", "b")
    if not mt or mt.group(1) != s or mt.group(3) != t:
        raise ValueError(f"expected '{s}^i {t}^j', got {text!r}")
    return NFElement(int(mt.group(2)) % p.n, int(mt.group(4)) % p.n)


# -- arithmetic -------------------------------------------------------------------


def _swap_past(p: NonMetacyclic, j: int, i: int) -> tuple[int, int, int]:
    """Rewrite ``b^j a^i`` as ``a^x b^y z^t``; returns (x, y, t mod 2)."""
    k, l = p.k, p.l
    if i % 2 == 0 and j % 2 == 0:
        return i, j, 0
    if i % 2 == 1 and j % 2 == 0:
        return i, -j, (l * j // 2) % 2
    if i % 2 == 0:
        return -i, j, (l * i // 2) % 2
    return -i, -j, (k + l * (i + j) // 2) % 2


def nf_multiply(p: GroupParams, x: NFElement, y: NFElement) -> NFElement:
    n = p.n
    if isinstance(p, Metacyclic):
        q = 1 + (1 << p.f)
        return NFElement((x.i + y.i) % n, (x.j * pow(q, y.i, n) + y.j) % n)
    # a^i1 (b^j1 a^i2) b^j2 with z = a^m b^m central
    u, v, t = _swap_past(p, x.j % n, y.i % n)
    zm = t * p.m
    return NFElement((x.i + u + zm) % n, (v + y.j + zm) % n)


def nf_multiply_many(p: GroupParams, xi, xj, yi, yj) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`nf_multiply` over coordinate arrays."""
    n = p.n
    xi, xj, yi, yj = (np.asarray(v, dtype=np.int64) % n for v in (xi, xj, yi, yj))
    if isinstance(p, Metacyclic):
        q = 1 + (1 << p.f)
        qpow = np.array([pow(q, t, n) for t in range(n)], dtype=np.int64)
        return (xi + yi) % n, (xj * qpow[yi] + yj) % n
    i, j = yi, xj
    io, jo = i % 2, j % 2
    # b^j a^i = a^(±i) b^(±j) z^t; i flips sign iff j is odd, j iff i is odd
    u = np.where(jo == 1, -i, i)
    v = np.where(io == 1, -j, j)
    t = np.select(
        [(io == 0) & (jo == 0), (io == 1) & (jo == 0), (io == 0) & (jo == 1)],
        [0, p.l * j // 2, p.l * i // 2],
        default=p.k + p.l * (i + j) // 2,
    ) % 2
    zm = t * p.m
    return (xi + u + zm) % n, (v + yj + zm) % n


def nf_identity() -> NFElement:
    return NFElement(0, 0)


def nf_power(p: GroupParams, x: NFElement, k: int) -> NFElement:
    r = nf_identity()
    for _ in range(k % (p.n * p.n)):
        r = nf_multiply(p, r, x)
    return r


def nf_inverse(p: GroupParams, x: NFElement) -> NFElement:
    y = x
    prev = nf_identity()
    while y != nf_identity():
        prev = y
        y = nf_multiply(p, y, x)
    return prev


def iterated_order(p: GroupParams, x: NFElement) -> int:
    t, y = 1, x
    while y != nf_identity():
        y = nf_multiply(p, y, x)
        t += 1
    return t


class NFOrder(NamedTuple):
    order: int
    mth_power: NFElement | None


def nf_order(p: NonMetacyclic, x: NFElement, check: bool = True) -> NFOrder:
    """Closed-form order of ``a^i b^j``; also returns ``x^m`` when the order is n.

    With ``check`` the result is compared against repeated multiplication.
    """
    if not isinstance(p, NonMetacyclic):
        raise DomainError("closed-form orders exist only for G2(e;k,l); iterate instead")
    n, m = p.n, p.m
    i, j = x.i % n, x.j % n
    if i % 2 == 0 and j % 2 == 0:
        # a^i and b^j commute and generate disjoint cyclic groups
        res = NFOrder(max(n // gcd(i, n), n // gcd(j, n)), None)
    elif i % 2 == 1 and j % 2 == 0:
        res = NFOrder(n, NFElement(m, 0))
    elif i % 2 == 0:
        res = NFOrder(n, NFElement(0, m))
    else:
        # x^2 = z^(k + l(i+j)/2)
        res = NFOrder(2 if (p.k + p.l * (i + j) // 2) % 2 == 0 else 4, None)
    if check:
        it = iterated_order(p, x)
        if it != res.order:
            raise AssertionError(f"closed-form order {res.order} != iterated order {it} for {x}")
        if res.mth_power is not None and nf_power(p, x, m) != res.mth_power:
            raise AssertionError(f"m-th power of {x} is not {res.mth_power}")
    return res


# -- bridge to explicit tables ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FamilyGroup:
    """A family member together with its Cayley table and coordinates."""

    params: GroupParams
    table: GroupTable
    coords: tuple[NFElement, ...]
    index: dict = field(repr=False)
    gens: tuple[int, int]

    @property
    def n(self) -> int:
        return self.params.n

    def element(self, i: int, j: int) -> int:
        return self.index[NFElement(i % self.n, j % self.n)]

    def canonical_pair(self) -> tuple[int, int]:
        """``(a, b)`` for G2, ``(g, g h)`` for G1."""
        if isinstance(self.params, Metacyclic):
            return self.element(1, 0), self.element(1, 1)
        return self.gens

    def name(self) -> str:
        return str(self.params)


def to_cayley(p: GroupParams) -> FamilyGroup:
    if p.e > MAX_TABLE_E:
        raise CapacityError(f"e = {p.e} exceeds the table cap e <= {MAX_TABLE_E}")
    gens = [NFElement(1, 0), NFElement(0, 1)]
    table, elems = build_from_generators(
        partial(nf_multiply, p), gens, identity=nf_identity(),
        label=partial(format_nf, p),
    )
    if table.order != p.n * p.n:
        raise AssertionError(f"{p} closed to order {table.order}, expected {p.n ** 2}")
    coords = tuple(elems)
    index = {c: idx for idx, c in enumerate(coords)}
    return FamilyGroup(p, table, coords, index, (index[gens[0]], index[gens[1]]))


@lru_cache(maxsize=64)
def cached_cayley(p: GroupParams) -> FamilyGroup:
    """Memoised :func:`to_cayley`; tables are immutable so sharing is safe."""
    return to_cayley(p)


# -- predicted structure --------------------------------------------------------------


@dataclass(frozen=True)
class StructureCoordinates:
    frattini: frozenset
    center: frozenset
    derived: frozenset
    derived_gens: tuple[NFElement, NFElement]
    upper_central: tuple[frozenset, ...]
    exponent: int
    nilpotence_class: int

    def agemo(self, i: int) -> frozenset:
        """℧_i(G) = Z_{e-i}."""
        return self.upper_central[self.nilpotence_class - i]


def _nf_closure(p: GroupParams, gens) -> frozenset:
    seen = {nf_identity()}
    frontier = [nf_identity()]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = nf_multiply(p, x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def structure_report(p: NonMetacyclic) -> StructureCoordinates:
    if not isinstance(p, NonMetacyclic):
        raise DomainError("closed-form structure is only given for G2(e;k,l)")
    e, n, m = p.e, p.n, p.m
    everything = [(i, j) for i in range(n) for j in range(n)]
    phi = frozenset(NFElement(i, j) for i, j in everything if i % 2 == 0 and j % 2 == 0)
    z = frozenset({NFElement(0, 0), NFElement(m, 0), NFElement(0, m), NFElement(m, m)})
    dgens = (NFElement((p.k * m + 2) % n, (p.k * m - 2) % n),
             NFElement((p.l * m + 4) % n, (p.l * m) % n))
    derived = _nf_closure(p, dgens)
    upper = []
    for i in range(e + 1):
        step = 1 << (e - i)
        upper.append(frozenset(NFElement(x, y) for x, y in everything
                               if x % step == 0 and y % step == 0))
    return StructureCoordinates(phi, z, derived, dgens, tuple(upper), n, e)
