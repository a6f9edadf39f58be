"""
Isomorphism calculus for ``G2(e;k,l)`` and structural analysis of isobicyclic triples.

Witnesses ``(i, j, f, h)`` describe the map ``a1 -> a^i b^j``, ``b1 -> a^f b^h``
from ``G2(e;k1,l1)`` to ``G2(e;k,l)``.
"""
from __future__ import annotations

import itertools
import json
import weakref
from dataclasses import asdict, dataclass
from typing import NamedTuple

from .cayley import (GenMap, GroupTable, Subgroup, abelian_invariants, derived_subgroup,
                     extend_generator_map, ExtensionError, is_isobicyclic_pair, is_metacyclic,
                     isomorphism_search)
from .errors import ClassificationError, DomainError, InvariantViolation, PreconditionError
from .families import GroupParams, Metacyclic, NonMetacyclic, cached_cayley


class IsoWitness(NamedTuple):
    i: int
    j: int
    f: int
    h: int

    def satisfies_parity(self) -> bool:
        i, j, f, h = (x % 2 for x in self)
        return (i, h, j, f) in ((1, 1, 0, 0), (0, 0, 1, 1))


def _check_e(e: int):
    if e < 3:
        raise DomainError(f"the G2(e;k,l) isomorphism calculus needs e >= 3, got e = {e}")


def lemma22_check(e: int, src: tuple[int, int], dst: tuple[int, int], w: IsoWitness) -> bool:
    """Closed-form test whether ``w`` induces an isomorphism ``G2(e;src) -> G2(e;dst)``."""
    _check_e(e)
    k1, l1 = src
    k, l = dst
    w = IsoWitness(*w)
    if not w.satisfies_parity() or l1 != l:
        return False
    n = 1 << e
    i, j, f, h = (x % n for x in w)
    # f+h-i-j is even under the parity condition, and n is divisible by 4
    return (k1 - k - l * ((f + h - i - j) // 2)) % 2 == 0


def witness_isomorphism(e: int, src: tuple[int, int], dst: tuple[int, int], w: IsoWitness):
    """Brute-force counterpart of :func:`lemma22_check`: the homomorphism, or None."""
    g1 = cached_cayley(NonMetacyclic(e, *src))
    g2 = cached_cayley(NonMetacyclic(e, *dst))
    images = (g2.element(w.i, w.j), g2.element(w.f, w.h))
    try:
        hom = extend_generator_map(g1.table, g2.table, GenMap(g1.gens, images))
    except ExtensionError:
        return None
    return hom if hom.is_isomorphism else None


def aut_count(e: int, l: int) -> int:
    """``|Aut G2(e;k,l)|``: ``n^4/8`` for l = 0 and ``n^4/16`` for l = 1."""
    _check_e(e)
    if l not in (0, 1):
        raise DomainError(f"l must be 0 or 1, got {l}")
    n4 = 1 << (4 * e)
    return n4 // 8 if l == 0 else n4 // 16


def aut_witnesses(e: int, l: int) -> list[IsoWitness]:
    """All automorphism witnesses: the parity condition, plus ``i+j = f+h (mod 4)`` when l = 1."""
    _check_e(e)
    n = 1 << e
    out = []
    for w in itertools.product(range(n), repeat=4):
        w = IsoWitness(*w)
        if not w.satisfies_parity():
            continue
        if l == 1 and (w.i + w.j - w.f - w.h) % 4:
            continue
        out.append(w)
    return out


# -- triple analysis ----------------------------------------------------------------


@dataclass
class StructureReport:
    e: int
    abelian: bool
    metacyclic: bool
    derived_invariants: list[int]
    c: int | None = None
    d: int | None = None
    u: int | None = None
    v: int | None = None
    s: int | None = None
    t: int | None = None

    def to_dict(self) -> dict:
        full = asdict(self)
        return {k: full[k] for k in ("d", "u", "v", "s", "t", "metacyclic", "derived_invariants")}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


class _GroupFacts(NamedTuple):
    derived: Subgroup
    derived_invariants: list[int]
    metacyclic: bool


_facts: "weakref.WeakKeyDictionary[GroupTable, _GroupFacts]" = weakref.WeakKeyDictionary()


def _group_facts(g: GroupTable) -> _GroupFacts:
    facts = _facts.get(g)
    if facts is None:
        dg = derived_subgroup(g)
        facts = _GroupFacts(dg, abelian_invariants(dg), is_metacyclic(g))
        _facts[g] = facts
    return facts


def _log2(x: int) -> int:
    if x <= 0 or x & (x - 1):
        raise PreconditionError(f"{x} is not a power of 2")
    return x.bit_length() - 1


def _solve_ab(g: GroupTable, a: int, b: int, target: int, step: int) -> int | None:
    """Least r in 0..n-1 with ``a^(r step) b^(-r step) = target``."""
    n = g.element_order(a)
    for r in range(n):
        if g.product(g.power(a, r * step), g.power(b, -r * step)) == target:
            return r
    return None


def analyze_triple(g: GroupTable, a: int, b: int, verify_pair: bool = True) -> StructureReport:
    """Read off ``c = [b,a] = a^(d 2^u) b^(-d 2^u)``, v, s, t and cross-check them."""
    if verify_pair and not is_isobicyclic_pair(g, a, b):
        raise PreconditionError("(a, b) is not an isobicyclic pair")
    n = g.element_order(a)
    e = _log2(n)
    facts = _group_facts(g)
    if g.is_abelian():
        return StructureReport(e, True, True, facts.derived_invariants)

    c = g.commutator(b, a)
    r = _solve_ab(g, a, b, c, 1)
    if r is None or r == 0:
        raise InvariantViolation("[b,a] is not of the form a^r b^-r")
    u = (r & -r).bit_length() - 1
    d = r >> u
    dg = facts.derived
    a_part = dg.intersection(Subgroup(g, tuple(g.cyclic(a))))
    v = e - _log2(a_part.order)

    def fail(msg):
        raise InvariantViolation(f"{msg} (u={u}, v={v}, d={d})")

    if g.element_order(c) != 1 << (e - u):
        fail(f"|c| = {g.element_order(c)}, expected 2^(e-u)")
    if not u < v:
        fail("u < v fails")
    av = g.power(a, 1 << v)
    cyc_c = Subgroup(g, tuple(g.cyclic(c)))
    cyc_av = Subgroup(g, tuple(g.cyclic(av)))
    if cyc_c.intersection(cyc_av).order != 1 or g.generate([c, av]).mask.tolist() != dg.mask.tolist():
        fail("G' is not <c> x <a^(2^v)>")
    for jj in range(e - u + 1):
        step = 1 << (u + jj)
        cj = g.power(c, 1 << jj)
        if not any(g.product(g.power(a, hh * step), g.power(b, -hh * step)) == cj
                   for hh in range(1, n, 2)):
            fail(f"c^(2^{jj}) has no odd-h form a^(h 2^(u+jj)) b^(-h 2^(u+jj))")

    s = t = None
    if not dg.is_cyclic():
        ca = g.conjugate(c, a)
        oc = g.element_order(c)
        hits = [(ss, tt) for ss in range(1, oc, 2) for tt in range(1, max(2, n >> v), 2)
                if g.product(g.power(c, ss), g.power(av, tt)) == ca]
        if not hits:
            fail("c^a = c^s a^(t 2^v) has no odd solution")
        s, t = hits[0]

    metacyclic = u >= 2
    if metacyclic != facts.metacyclic:
        fail(f"u predicts metacyclic={metacyclic} but exhaustive search says {facts.metacyclic}")
    if not metacyclic and (u, v) != (1, 2):
        fail("non-metacyclic triple without u = 1, v = 2")
    if metacyclic and v != e:
        fail("metacyclic triple with v != e")
    return StructureReport(e, False, metacyclic, facts.derived_invariants, c, d, u, v, s, t)


def relation_set_holds(g: GroupTable, a: int, b: int, k: int, l: int) -> bool:
    """The three relations pinning ``(k, l)`` for a non-metacyclic pair."""
    n = g.element_order(a)
    m = n // 2
    pw = g.power
    a2, b2 = pw(a, 2), pw(b, 2)
    return (g.commutator(b, a) == g.product(pw(a, 2 + k * m), pw(b, -2 + k * m))
            and g.conjugate(b2, a) == g.product(pw(a, l * m), pw(b, -2 + l * m))
            and g.conjugate(a2, b) == g.product(pw(a, -2 + l * m), pw(b, l * m)))


def _nonmetacyclic_params(e: int) -> list[NonMetacyclic]:
    if e == 2:
        return [NonMetacyclic(2, 0, 0)]
    return [NonMetacyclic(e, k, l) for k in (0, 1) for l in (0, 1)]


def classify_triple(g: GroupTable, a: int, b: int, threads: int = 1) -> GroupParams:
    """Family parameters of the triple ``(g, a, b)``."""
    if not is_isobicyclic_pair(g, a, b):
        raise PreconditionError("(a, b) is not an isobicyclic pair")
    e = _log2(g.element_order(a))
    if e < 2:
        raise DomainError("the families start at n = 4")
    if g.is_abelian() or _group_facts(g).metacyclic:
        for f in range(2, e + 1):
            fam = cached_cayley(Metacyclic(e, f))
            if isomorphism_search(g, (a, b), fam.table, limit=1, threads=threads):
                return fam.params
        raise ClassificationError("metacyclic isobicyclic group matches no G1(e,f)")
    hits = [p for p in _nonmetacyclic_params(e) if relation_set_holds(g, a, b, p.k, p.l)]
    if len(hits) != 1:
        raise ClassificationError(f"expected exactly one relation set to hold, found {len(hits)}")
    p = hits[0]
    fam = cached_cayley(p)
    # the relations make G an image of G2(e;k,l); equal orders make it an isomorphism
    try:
        hom = extend_generator_map(fam.table, g, GenMap(fam.gens, (a, b)))
    except ExtensionError as exc:
        raise ClassificationError(f"relations hold but canonical map fails: {exc}") from None
    if not hom.is_isomorphism:
        raise ClassificationError("canonical map onto the triple is not bijective")
    return p
