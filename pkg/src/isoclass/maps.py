"""
Regular embeddings of ``K_{n,n}`` from isobicyclic triples.

Darts are ``(x, colour)`` for x in G, numbered ``2x + colour`` with black = 0.
The rotation turns black darts by left multiplication with ``a`` and white
darts with ``b``; ``L`` swaps colour.  Faces are the orbits of ``R∘L``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .cayley import (GenMap, GroupTable, Homomorphism, ExtensionError, are_isomorphic,
                     build_from_generators, extend_generator_map, find_isobicyclic_pairs,
                     invariant_key, swap_automorphism)
from .errors import DomainError, InvariantViolation, PreconditionError
from .families import Metacyclic, NonMetacyclic, cached_cayley
from .factorise import KLEIN_LABEL, family_candidates

BLACK, WHITE = 0, 1
FAMILY_FILTERS = ("all", "metacyclic", "nonmetacyclic")
MAX_MAP_E = 5


@dataclass(frozen=True, eq=False)
class IsobicyclicTriple:
    group: GroupTable = field(repr=False)
    a: int
    b: int
    swap: Homomorphism = field(repr=False)
    name: str = "G"
    labels: tuple[str, str] = ("a", "b")

    @property
    def n(self) -> int:
        return self.group.element_order(self.a)


def make_triple(g: GroupTable, a: int, b: int, name: str = "G") -> IsobicyclicTriple:
    """Validate ``(g, a, b)`` and attach the swap automorphism."""
    n = math.isqrt(g.order)
    if n * n != g.order or g.element_order(a) != n or g.element_order(b) != n:
        raise PreconditionError("need |a| = |b| = n and |G| = n^2")
    if set(g.cyclic(a)) & set(g.cyclic(b)) != {g.identity}:
        raise PreconditionError("<a> and <b> intersect nontrivially")
    swap = swap_automorphism(g, a, b)
    if swap is None:
        raise PreconditionError("no automorphism swaps a and b")
    if not np.array_equal(swap.images[swap.images], np.arange(g.order)):
        raise InvariantViolation("swap automorphism is not an involution")
    return IsobicyclicTriple(g, int(a), int(b), swap, name, (g.label(a), g.label(b)))


def klein_group() -> GroupTable:
    """``C2 x C2 = <a> x <b>`` with elements labelled in normal form."""
    table, _ = build_from_generators(
        lambda x, y: ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2), [(1, 0), (0, 1)],
        identity=(0, 0), label=lambda x: f"a^{x[0]} b^{x[1]}")
    return table


# -- maps ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class OrientedMap:
    R: np.ndarray = field(repr=False)
    L: np.ndarray = field(repr=False)

    @property
    def darts(self) -> int:
        return int(self.R.size)

    @cached_property
    def V(self) -> int:
        return _orbit_count(self.R)

    @cached_property
    def E(self) -> int:
        return _orbit_count(self.L)

    @cached_property
    def F(self) -> int:
        return _orbit_count(self.R[self.L])

    @property
    def euler(self) -> int:
        return self.V - self.E + self.F

    @property
    def genus(self) -> int:
        chi = self.euler
        if chi % 2 or chi > 2:
            raise InvariantViolation(f"Euler characteristic {chi} is not 2 - 2g")
        return (2 - chi) // 2

    def connected(self) -> bool:
        return _orbit_count_two(self.R, self.L) == 1


def _orbit_labels(perm: np.ndarray) -> np.ndarray:
    lab = np.full(perm.size, -1, dtype=np.int64)
    k = 0
    for s in range(perm.size):
        if lab[s] >= 0:
            continue
        x = s
        while lab[x] < 0:
            lab[x] = k
            x = perm[x]
        k += 1
    return lab


def _orbit_count(perm: np.ndarray) -> int:
    return int(_orbit_labels(perm).max()) + 1 if perm.size else 0


def _orbit_count_two(p: np.ndarray, q: np.ndarray) -> int:
    seen = np.zeros(p.size, dtype=bool)
    count = 0
    for s in range(p.size):
        if seen[s]:
            continue
        count += 1
        stack = [s]
        seen[s] = True
        while stack:
            x = stack.pop()
            for y in (int(p[x]), int(q[x])):
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
    return count


def build_map(t: IsobicyclicTriple) -> OrientedMap:
    g = t.group
    N = g.order
    R = np.empty(2 * N, dtype=np.int64)
    R[0::2] = 2 * g.mul[t.a, :].astype(np.int64) + BLACK
    R[1::2] = 2 * g.mul[t.b, :].astype(np.int64) + WHITE
    L = np.arange(2 * N, dtype=np.int64) ^ 1
    m = OrientedMap(R, L)
    n = t.n
    if m.V != 2 * n or m.E != n * n:
        raise InvariantViolation(f"expected V = {2 * n}, E = {n * n}; got V = {m.V}, E = {m.E}")
    return m


def map_equivalent(t1: IsobicyclicTriple, t2: IsobicyclicTriple) -> bool:
    """An isomorphism of groups sending ``a1 -> a2`` and ``b1 -> b2``."""
    if t1.group.order != t2.group.order:
        return False
    try:
        hom = extend_generator_map(t1.group, t2.group, GenMap((t1.a, t1.b), (t2.a, t2.b)))
    except (ExtensionError, PreconditionError):
        return False
    return hom.is_isomorphism


def cycle_notation(perm: np.ndarray) -> str:
    seen = np.zeros(perm.size, dtype=bool)
    parts = []
    for s in range(perm.size):
        if seen[s]:
            continue
        cyc = []
        x = s
        while not seen[x]:
            seen[x] = True
            cyc.append(str(x))
            x = int(perm[x])
        parts.append("(" + " ".join(cyc) + ")")
    return "".join(parts)


# -- enumeration ----------------------------------------------------------------------


@dataclass
class MapClass:
    triple: IsobicyclicTriple
    group_name: str
    orbit_size: int
    merged_from: list[str] = field(default_factory=list)

    @cached_property
    def map(self) -> OrientedMap:
        return build_map(self.triple)

    def row(self) -> dict:
        m = self.map
        return {"group": self.group_name, "a": self.triple.labels[0], "b": self.triple.labels[1],
                "V": m.V, "E": m.E, "F": m.F, "genus": m.genus}

    def export(self) -> str:
        m = self.map
        t = self.triple
        head = (f"n={t.n} group={self.group_name} a={_nospace(t.labels[0])} b={_nospace(t.labels[1])} "
                f"V={m.V} E={m.E} F={m.F} genus={m.genus}")
        return f"{head}\nR {cycle_notation(m.R)}\nL {cycle_notation(m.L)}\n"


def _nospace(s: str) -> str:
    return s.replace(" ", "")


def _check_n(n: int) -> int:
    e = n.bit_length() - 1
    if n < 2 or n & (n - 1) or e > MAX_MAP_E:
        raise DomainError(f"n must be 2^e with 1 <= e <= {MAX_MAP_E}, got {n}")
    return e


def family_groups(n: int, family_filter: str = "all") -> list[tuple[str, GroupTable]]:
    if family_filter not in FAMILY_FILTERS:
        raise DomainError(f"family filter must be one of {FAMILY_FILTERS}, got {family_filter!r}")
    e = _check_n(n)
    if e == 1:
        # the families start at e = 2; K_{2,2} comes from the Klein group
        return [] if family_filter == "nonmetacyclic" else [(KLEIN_LABEL, klein_group())]
    out = []
    for p in family_candidates(n):
        if family_filter == "metacyclic" and not isinstance(p, Metacyclic):
            continue
        if family_filter == "nonmetacyclic" and not isinstance(p, NonMetacyclic):
            continue
        out.append((str(p), cached_cayley(p).table))
    return out


def pair_orbits(g: GroupTable, pairs: list[tuple[int, int]]) -> list[tuple[tuple[int, int], int]]:
    """Aut(G)-orbits on ordered isobicyclic pairs as (least pair, orbit size).

    Any automorphism maps an isobicyclic pair to another one and is fixed by
    the image of a generating pair, so Aut(G) is read off from the pairs.
    """
    if not pairs:
        return []
    pairs = sorted(pairs)
    a0, b0 = pairs[0]
    auts = []
    for q in pairs:
        try:
            hom = extend_generator_map(g, g, GenMap((a0, b0), q))
        except ExtensionError:
            continue
        if hom.is_isomorphism:
            auts.append(hom.images)
    imgs = np.array(auts, dtype=np.int64)
    index = {p: k for k, p in enumerate(pairs)}
    seen = np.zeros(len(pairs), dtype=bool)
    out = []
    for k, (a, b) in enumerate(pairs):
        if seen[k]:
            continue
        orbit = {(int(x), int(y)) for x, y in zip(imgs[:, a], imgs[:, b])}
        for p in orbit:
            seen[index[p]] = True
        out.append(((a, b), len(orbit)))
    return out


def _group_classes(name: str, g: GroupTable) -> list[MapClass]:
    pairs = find_isobicyclic_pairs(g)
    return [MapClass(make_triple(g, a, b, name), name, size)
            for (a, b), size in pair_orbits(g, pairs)]


def enumerate_maps(n: int, family_filter: str = "all", threads: int = 1) -> list[MapClass]:
    """Map isomorphism classes over the family groups of the given n, merged across isomorphic groups."""
    groups = family_groups(n, family_filter)
    if threads > 1 and len(groups) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_group = list(pool.map(lambda ng: _group_classes(*ng), groups))
    else:
        per_group = [_group_classes(name, g) for name, g in groups]
    keys = [invariant_key(g) for _, g in groups]
    merged: list[MapClass] = []
    for gi, classes in enumerate(per_group):
        # an earlier isomorphic group already carries every class of this one
        partner = next((gj for gj in range(gi) if keys[gj] == keys[gi]
                        and are_isomorphic(groups[gi][1], groups[gj][1])), None)
        for mc in classes:
            if partner is not None:
                hit = next((old for old in merged if old.group_name == groups[partner][0]
                            and map_equivalent(mc.triple, old.triple)), None)
                if hit is not None:
                    hit.merged_from.append(f"{mc.group_name}:{mc.triple.labels[0]},{mc.triple.labels[1]}")
                    continue
            merged.append(mc)
    return merged


def metacyclic_reps(e: int, f: int) -> list[IsobicyclicTriple]:
    """``(G1(e,f), g^r, g^r h)`` for odd ``1 <= r <= 2^(e-f)``."""
    p = Metacyclic(e, f)
    fg = cached_cayley(p)
    out = []
    for r in range(1, (1 << (e - f)) + 1, 2):
        out.append(make_triple(fg.table, fg.element(r, 0), fg.element(r, 1), str(p)))
    return out


def export_maps(classes: list[MapClass]) -> list[str]:
    return [mc.export() for mc in classes]
