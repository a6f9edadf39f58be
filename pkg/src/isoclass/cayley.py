"""
Finite groups given by explicit multiplication tables.

Everything here is brute force on purpose: the closed-form claims made by
:mod:`isoclass.families` and :mod:`isoclass.classify` are checked against
these computations, so they must not share any shortcuts with them.

Elements are integer indices ``0 .. order-1``.  ``mul[x, y]`` is the index of
the product ``x*y``.  Commutators follow ``[x, y] = x^-1 y^-1 x y`` and
conjugation ``x^y = y^-1 x y``.
"""
from __future__ import annotations

import io
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import CapacityError, DomainError, PreconditionError

log = logging.getLogger(__name__)

DEFAULT_CLOSURE_CAP = 1 << 20
EXHAUSTIVE_ASSOC_LIMIT = 256


class GroupTable:
    """An explicit finite group.

    ``mul`` is stored as a read-only ``int32`` array.  ``gens`` records the
    generators the table was built from, when known.
    """

    def __init__(self, mul, identity: int = 0, labels: Sequence[str] | None = None,
                 gens: Sequence[int] | None = None):
        mul = np.array(mul, dtype=np.int32, copy=True)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise ValueError("multiplication table must be a non-empty square array")
        n = mul.shape[0]
        if mul.min() < 0 or mul.max() >= n:
            raise ValueError("multiplication table entries out of range")
        if not 0 <= identity < n:
            raise ValueError("identity index out of range")
        mul.setflags(write=False)
        self.mul = mul
        self.identity = int(identity)
        self.labels = list(labels) if labels is not None else None
        self.gens = tuple(int(g) for g in gens) if gens is not None else None
        self._trees: dict[tuple[int, ...], SpanningTree] = {}

    def __repr__(self):
        return f"GroupTable(order={self.order})"

    def __len__(self):
        return self.order

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    def label(self, x: int) -> str:
        if self.labels is not None:
            return self.labels[x]
        return str(x)

    # -- basic element arithmetic ------------------------------------------

    @cached_property
    def inverses(self) -> np.ndarray:
        inv = np.argmax(self.mul == self.identity, axis=1).astype(np.int32)
        if not np.all(self.mul[np.arange(self.order), inv] == self.identity):
            raise ValueError("table has an element without an inverse")
        return inv

    def inverse(self, x: int) -> int:
        return int(self.inverses[x])

    def product(self, *xs: int) -> int:
        r = self.identity
        for x in xs:
            r = int(self.mul[r, x])
        return r

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inverse(x), -k
        r, base = self.identity, int(x)
        while k:
            if k & 1:
                r = int(self.mul[r, base])
            base = int(self.mul[base, base])
            k >>= 1
        return r

    def commutator(self, x: int, y: int) -> int:
        inv = self.inverses
        return self.product(int(inv[x]), int(inv[y]), x, y)

    def conjugate(self, x: int, y: int) -> int:
        """``x^y = y^-1 x y``."""
        return self.product(self.inverse(y), x, y)

    @cached_property
    def commutator_table(self) -> np.ndarray:
        inv = self.inverses
        left = self.mul[inv[:, None], inv[None, :]]
        return self.mul[left, self.mul]

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        idx = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        cur = idx.copy()
        t = 1
        while True:
            hit = (cur == self.identity) & (orders == 0)
            orders[hit] = t
            if orders.all():
                return orders
            cur = self.mul[cur, idx]
            t += 1

    def element_order(self, x: int) -> int:
        return int(self.element_orders[x])

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*(int(o) for o in np.unique(self.element_orders)))

    @cached_property
    def order_profile(self) -> tuple[tuple[int, int], ...]:
        """Sorted ``(element order, count)`` pairs; an isomorphism invariant."""
        vals, counts = np.unique(self.element_orders, return_counts=True)
        return tuple((int(v), int(c)) for v, c in zip(vals, counts))

    def cyclic(self, x: int) -> list[int]:
        out = [self.identity]
        y = int(x)
        while y != self.identity:
            out.append(y)
            y = int(self.mul[y, x])
        return out

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def is_p_group(self, p: int | None = None) -> bool:
        n = self.order
        if n == 1:
            return True
        if p is None:
            p = min(q for q in range(2, n + 1) if n % q == 0)
        while n % p == 0:
            n //= p
        return n == 1

    # -- subgroups ----------------------------------------------------------

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (self.identity,))

    def generate(self, gens: Iterable[int]) -> "Subgroup":
        gens = np.unique(np.fromiter((int(g) for g in gens), dtype=np.int64))
        mask = np.zeros(self.order, dtype=bool)
        mask[self.identity] = True
        frontier = np.array([self.identity])
        while frontier.size and gens.size:
            nxt = self.mul[np.ix_(frontier, gens)].ravel()
            nxt = np.unique(nxt[~mask[nxt]])
            mask[nxt] = True
            frontier = nxt
        return Subgroup(self, tuple(int(x) for x in np.flatnonzero(mask)))

    def commutator_subgroup(self, h: "Subgroup", k: "Subgroup") -> "Subgroup":
        """``[H, K]``, generated by all ``[x, y]`` with x in H and y in K."""
        comms = self.commutator_table[np.ix_(h.array, k.array)].ravel()
        return self.generate(np.unique(comms))

    def power_subgroup(self, k: int, within: "Subgroup | None" = None) -> "Subgroup":
        """Subgroup generated by all k-th powers of elements (of ``within``)."""
        elems = np.arange(self.order) if within is None else within.array
        cur = elems.copy()
        for _ in range(k - 1):
            cur = self.mul[cur, elems]
        return self.generate(np.unique(cur))

    def subgroup_table(self, h: "Subgroup") -> "GroupTable":
        """The subgroup H as a group in its own right (elements renumbered in order)."""
        pos = np.full(self.order, -1, dtype=np.int64)
        pos[h.array] = np.arange(h.order)
        sub = pos[self.mul[np.ix_(h.array, h.array)]]
        labels = [self.label(int(x)) for x in h.array] if self.labels else None
        return GroupTable(sub, int(pos[self.identity]), labels=labels)

    def quotient(self, normal: "Subgroup") -> tuple["GroupTable", np.ndarray]:
        """Coset table of ``G/N``.

        Cosets are represented by their minimal-index element; returns the
        quotient table and the array mapping each element of G to its coset.
        """
        if not normal.is_normal():
            raise PreconditionError("quotient requires a normal subgroup")
        reps_of = self.mul[:, normal.array].min(axis=1)
        reps = np.unique(reps_of)
        pos = np.full(self.order, -1, dtype=np.int64)
        pos[reps] = np.arange(reps.size)
        qmul = pos[reps_of[self.mul[np.ix_(reps, reps)]]]
        cosets = pos[reps_of]
        return GroupTable(qmul, int(cosets[self.identity])), cosets

    # -- structure checks ---------------------------------------------------

    def check_associative(self, samples: int = 100_000, seed: int = 0) -> bool:
        """Exhaustive below order 257, random sampling of triples above."""
        n = self.order
        mul = self.mul
        if n <= EXHAUSTIVE_ASSOC_LIMIT:
            for x in range(n):
                left = mul[mul[x][:, None], np.arange(n)[None, :]]
                right = mul[x][mul]
                if not np.array_equal(left, right):
                    return False
            return True
        rng = np.random.default_rng(seed)
        x, y, z = rng.integers(0, n, size=(3, samples))
        return bool(np.array_equal(mul[mul[x, y], z], mul[x, mul[y, z]]))

    def check_group_axioms(self) -> bool:
        e = self.identity
        idx = np.arange(self.order)
        if not (np.array_equal(self.mul[e], idx) and np.array_equal(self.mul[:, e], idx)):
            return False
        try:
            self.inverses
        except ValueError:
            return False
        return self.check_associative()

    # -- spanning trees for homomorphism extension --------------------------

    def spanning_tree(self, gens: Sequence[int]) -> "SpanningTree":
        key = tuple(int(g) for g in gens)
        tree = self._trees.get(key)
        if tree is None:
            tree = SpanningTree.build(self, key)
            self._trees[key] = tree
        return tree


@dataclass(frozen=True)
class Subgroup:
    parent: GroupTable = field(repr=False, compare=False)
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(int(m) for m in self.members)))

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.members, dtype=np.int64)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.array] = True
        return m

    def is_subgroup(self) -> bool:
        g = self.parent
        if g.identity not in self:
            return False
        prods = g.mul[np.ix_(self.array, self.array)]
        return bool(self.mask[prods].all() and self.mask[g.inverses[self.array]].all())

    def is_normal(self) -> bool:
        g = self.parent
        conj = g.mul[g.mul[g.inverses[:, None], self.array[None, :]], np.arange(g.order)[:, None]]
        return bool(self.mask[conj].all())

    def is_abelian(self) -> bool:
        block = self.parent.mul[np.ix_(self.array, self.array)]
        return bool(np.array_equal(block, block.T))

    def is_cyclic(self) -> bool:
        return bool((self.parent.element_orders[self.array] == self.order).any())

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, tuple(set(self.members) & set(other.members)))

    def join(self, other: "Subgroup") -> "Subgroup":
        return self.parent.generate(set(self.members) | set(other.members))

    def issubset(self, other: "Subgroup") -> bool:
        return set(self.members) <= set(other.members)


@dataclass(frozen=True)
class GenMap:
    """Candidate images of a generating tuple; the data of a homomorphism."""

    source: tuple[int, ...]
    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(int(s) for s in self.source))
        object.__setattr__(self, "images", tuple(int(s) for s in self.images))
        if len(self.source) != len(self.images):
            raise ValueError("GenMap source and images must have equal length")


@dataclass(frozen=True)
class CharacteristicReport:
    center: Subgroup
    derived: Subgroup
    frattini: Subgroup | None
    upper_central: list[Subgroup]
    lower_central: list[Subgroup]
    agemo: list[Subgroup]
    exponent: int
    nilpotence_class: int | None


class SpanningTree:
    """Breadth-first spanning tree of a group w.r.t. generators and their inverses.

    Stored level by level so that extending a generator map can be done with
    one vectorised gather per level.
    """

    def __init__(self, gens, levels, parent, letter):
        self.gens = gens
        self.levels = levels
        self.parent = parent
        self.letter = letter

    @classmethod
    def build(cls, g: GroupTable, gens: tuple[int, ...]) -> "SpanningTree":
        k = len(gens)
        letters = np.array(list(gens) + [g.inverse(x) for x in gens], dtype=np.int64)
        parent = np.full(g.order, -1, dtype=np.int64)
        letter = np.full(g.order, -1, dtype=np.int64)
        seen = np.zeros(g.order, dtype=bool)
        seen[g.identity] = True
        frontier = np.array([g.identity], dtype=np.int64)
        levels = []
        while frontier.size and k:
            cand = g.mul[np.ix_(frontier, letters)].ravel()
            vals, first = np.unique(cand, return_index=True)
            keep = ~seen[vals]
            if not keep.any():
                break
            # first occurrence in row-major order keeps the tree deterministic
            pos = np.sort(first[keep])
            nodes = cand[pos].astype(np.int64)
            par = frontier[pos // len(letters)]
            let = pos % len(letters)
            seen[nodes] = True
            parent[nodes] = par
            letter[nodes] = let
            levels.append((nodes, par, let))
            frontier = nodes
        if not seen.all():
            raise PreconditionError("source elements do not generate the group")
        return cls(gens, levels, parent, letter)

    def word(self, x: int) -> list[int]:
        """Letters (``s`` for generator s, ``k+s`` for its inverse) spelling x."""
        out = []
        while self.parent[x] >= 0:
            out.append(int(self.letter[x]))
            x = int(self.parent[x])
        return out[::-1]


@dataclass(frozen=True)
class Homomorphism:
    source: GroupTable = field(repr=False)
    target: GroupTable = field(repr=False)
    genmap: GenMap
    images: np.ndarray = field(repr=False, compare=False)

    @cached_property
    def injective(self) -> bool:
        return np.unique(self.images).size == self.source.order

    @cached_property
    def surjective(self) -> bool:
        return np.unique(self.images).size == self.target.order

    @property
    def is_isomorphism(self) -> bool:
        return self.injective and self.surjective

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def order(self) -> int:
        """Order as a permutation, for automorphisms."""
        if self.source is not self.target:
            raise ValueError("order is only defined for endomorphisms")
        cur = self.images.copy()
        ident = np.arange(self.source.order)
        t = 1
        while not np.array_equal(cur, ident):
            cur = self.images[cur]
            t += 1
        return t


class ExtensionError(Exception):
    """A generator map does not extend to a homomorphism.

    ``witness`` holds two words (lists of generator letters) that are equal in
    the source group but whose images differ.
    """

    def __init__(self, witness: tuple[str, str]):
        super().__init__(f"relation conflict: {witness[0]} vs {witness[1]}")
        self.witness = witness


def _format_word(letters: list[int], k: int) -> str:
    if not letters:
        return "1"
    return " ".join(f"x{s}" if s < k else f"x{s - k}^-1" for s in letters)


# -- operations ----------------------------------------------------------------


def build_from_generators(mul_rule: Callable[[Hashable, Hashable], Hashable],
                          gens: Sequence[Hashable], identity: Hashable | None = None,
                          cap: int = DEFAULT_CLOSURE_CAP,
                          label: Callable[[Hashable], str] | None = None,
                          ) -> tuple[GroupTable, list]:
    """Close ``gens`` under ``mul_rule`` and tabulate the result.

    Elements are numbered breadth-first from the identity, trying generators
    in the order given.  Returns the table and the list of the original
    element objects in index order.
    """
    gens = list(gens)
    if identity is None:
        if not gens:
            raise ValueError("need an identity or at least one generator")
        # g^t with g^(t+1) == g is the identity in any finite group
        g0 = gens[0]
        x = g0
        for _ in range(cap + 1):
            nxt = mul_rule(x, g0)
            if nxt == g0:
                identity = x
                break
            x = nxt
        else:
            raise CapacityError("could not locate the identity within the cap")
    elements = [identity]
    index = {identity: 0}
    right = [[0] for _ in gens]
    parent = [-1]
    via = [-1]
    i = 0
    while i < len(elements):
        x = elements[i]
        for s, g in enumerate(gens):
            y = mul_rule(x, g)
            j = index.get(y)
            if j is None:
                j = len(elements)
                if j >= cap:
                    raise CapacityError(f"closure exceeds cap of {cap} elements")
                index[y] = j
                elements.append(y)
                parent.append(i)
                via.append(s)
                for r in right:
                    r.append(-1)
            right[s][i] = j
        i += 1
    n = len(elements)
    right = np.array(right, dtype=np.int32).reshape(len(gens), n)
    mul = np.empty((n, n), dtype=np.int32)
    mul[:, 0] = np.arange(n)
    # x * (p * s) = (x * p) * s, filled column by column in BFS order
    for y in range(1, n):
        mul[:, y] = right[via[y]][mul[:, parent[y]]]
    labels = [label(x) for x in elements] if label is not None else None
    gen_idx = [index[g] for g in gens]
    return GroupTable(mul, 0, labels=labels, gens=gen_idx), elements


def element_order(g: GroupTable, x: int) -> int:
    return g.element_order(x)


def center(g: GroupTable) -> Subgroup:
    comm = np.all(g.mul == g.mul.T, axis=1)
    return Subgroup(g, tuple(int(x) for x in np.flatnonzero(comm)))


def derived_subgroup(g: GroupTable) -> Subgroup:
    return g.generate(np.unique(g.commutator_table))


def frattini(g: GroupTable) -> Subgroup:
    """Subgroup generated by squares and commutators; only valid for 2-groups."""
    if not g.is_p_group(2):
        raise DomainError("Frattini subgroup via squares and commutators needs a 2-group")
    sq = np.diagonal(g.mul)
    return g.generate(np.union1d(sq, np.unique(g.commutator_table)))


def frattini_by_maximal_subgroups(g: GroupTable) -> Subgroup:
    """Intersection of all maximal subgroups, for a 2-group.

    Maximal subgroups of a 2-group are exactly the kernels of surjections onto
    C2, which are found by trying every assignment of generators to C2.
    """
    if not g.is_p_group(2):
        raise DomainError("needs a 2-group")
    gens = list(g.gens) if g.gens else minimal_generators(g)
    c2 = GroupTable([[0, 1], [1, 0]])
    inter = np.ones(g.order, dtype=bool)
    for bits in itertools.product((0, 1), repeat=len(gens)):
        if not any(bits):
            continue
        try:
            hom = extend_generator_map(g, c2, GenMap(gens, bits))
        except ExtensionError:
            continue
        inter &= hom.images == 0
    return Subgroup(g, tuple(int(x) for x in np.flatnonzero(inter)))


def minimal_generators(g: GroupTable) -> list[int]:
    """A small generating set, found greedily by element order."""
    order = np.argsort(-g.element_orders, kind="stable")
    gens: list[int] = []
    cur = g.trivial()
    for x in order:
        if cur.order == g.order:
            break
        if int(x) not in cur:
            gens.append(int(x))
            cur = g.generate(gens)
    return gens


def upper_central_series(g: GroupTable) -> list[Subgroup]:
    series = [g.trivial()]
    comm = g.commutator_table
    while True:
        mask = series[-1].mask[comm].all(axis=1)
        nxt = Subgroup(g, tuple(int(x) for x in np.flatnonzero(mask)))
        if nxt.order == series[-1].order:
            return series
        series.append(nxt)


def lower_central_series(g: GroupTable) -> list[Subgroup]:
    """``[K_2, K_3, ...]`` with ``K_2 = G'`` and ``K_{i+1} = [K_i, G]``, until stable."""
    whole = g.whole()
    series = [g.commutator_subgroup(whole, whole)]
    while True:
        nxt = g.commutator_subgroup(series[-1], whole)
        if nxt.order == series[-1].order:
            return series
        series.append(nxt)


def agemo_series(g: GroupTable, p: int = 2) -> list[Subgroup]:
    """``[℧_0, ℧_1, ...]`` where ``℧_i`` is generated by all ``p^i``-th powers."""
    series = [g.whole()]
    pw = np.arange(g.order)
    while series[-1].order > 1:
        acc = pw
        for _ in range(p - 1):
            acc = g.mul[acc, pw]
        pw = acc
        nxt = g.generate(np.unique(pw))
        if nxt.order == series[-1].order:
            break
        series.append(nxt)
    return series


def characteristic_subgroups(g: GroupTable, with_frattini: bool = True) -> CharacteristicReport:
    upper = upper_central_series(g)
    nilpotent = upper[-1].order == g.order
    return CharacteristicReport(
        center=center(g),
        derived=derived_subgroup(g),
        frattini=frattini(g) if with_frattini else None,
        upper_central=upper,
        lower_central=lower_central_series(g),
        agemo=agemo_series(g),
        exponent=g.exponent,
        nilpotence_class=len(upper) - 1 if nilpotent else None,
    )


def _prime_power_parts(t: int) -> list[int]:
    out = []
    p = 2
    while t > 1:
        if t % p == 0:
            q = 1
            while t % p == 0:
                q *= p
                t //= p
            out.append(q)
        p += 1
    return out


def abelian_invariants(h: Subgroup) -> list[int]:
    """Prime-power orders of the cyclic factors of an abelian subgroup, descending.

    Repeatedly splits off a cyclic factor of maximal order: in an abelian
    group such a factor is a direct summand, so its order joins the list and
    the search continues in the quotient.
    """
    if not h.is_abelian():
        raise DomainError("abelian invariants need an abelian subgroup")
    g = h.parent
    k = g.trivial()
    out: list[int] = []
    while k.order < h.order:
        # order of each element of H modulo K
        rel = np.zeros(h.order, dtype=np.int64)
        cur = h.array.copy()
        t = 1
        while not rel.all():
            hit = k.mask[cur] & (rel == 0)
            rel[hit] = t
            cur = g.mul[cur, h.array]
            t += 1
        best = int(np.argmax(rel))
        out.extend(_prime_power_parts(int(rel[best])))
        k = g.generate(list(k.members) + [int(h.array[best])])
    return sorted(out, reverse=True)


def is_metacyclic(g: GroupTable) -> bool:
    """Exhaustive search for a cyclic normal subgroup with cyclic quotient."""
    n = g.order
    seen = set()
    exp = g.exponent
    for x in np.argsort(-g.element_orders, kind="stable"):
        x = int(x)
        h_order = int(g.element_orders[x])
        if h_order * exp < n:
            continue
        members = tuple(sorted(g.cyclic(x)))
        if members in seen:
            continue
        seen.add(members)
        h = Subgroup(g, members)
        if not h.is_normal():
            continue
        q, _ = g.quotient(h)
        if (q.element_orders == q.order).any():
            return True
    return False


def extend_generator_map(g1: GroupTable, g2: GroupTable, m: GenMap) -> Homomorphism:
    """Extend a map on generators to a homomorphism, or raise :class:`ExtensionError`.

    Raises :class:`PreconditionError` if ``m.source`` does not generate ``g1``.
    """
    tree = g1.spanning_tree(m.source)
    k = len(m.source)
    imgs = np.array(m.images, dtype=np.int64)
    letters = np.concatenate([imgs, g2.inverses[imgs]])
    phi = np.empty(g1.order, dtype=np.int64)
    phi[g1.identity] = g2.identity
    mul2 = g2.mul
    for nodes, par, let in tree.levels:
        phi[nodes] = mul2[phi[par], letters[let]]
    for s in range(k):
        lhs = phi[g1.mul[:, m.source[s]]]
        rhs = mul2[phi, imgs[s]]
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            x = int(bad[0])
            w1 = tree.word(x) + [s]
            w2 = tree.word(int(g1.mul[x, m.source[s]]))
            raise ExtensionError((_format_word(w1, k), _format_word(w2, k)))
    return Homomorphism(g1, g2, m, phi)


def extends(g1: GroupTable, g2: GroupTable, m: GenMap) -> bool:
    try:
        extend_generator_map(g1, g2, m)
    except ExtensionError:
        return False
    return True


def _chunks(seq: list, parts: int) -> list[list]:
    size = max(1, -(-len(seq) // max(1, parts)))
    return [seq[i:i + size] for i in range(0, len(seq), size)]


def run_chunked(fn, items: list, threads: int) -> list:
    """Apply ``fn`` to contiguous chunks; results concatenated in input order."""
    if threads <= 1 or len(items) < 2:
        return fn(items)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(fn, _chunks(items, threads)))
    return [x for part in parts for x in part]


def isomorphism_search(g1: GroupTable, gens1: Sequence[int], g2: GroupTable,
                       limit: int | None = None, threads: int = 1) -> list[Homomorphism]:
    """All isomorphisms ``g1 -> g2``, one per admissible image tuple of ``gens1``.

    Image candidates are restricted to elements of the same order as the
    corresponding generator.  Results come in lexicographic order of the
    image tuple.  ``limit`` stops after that many witnesses.
    """
    gens1 = [int(x) for x in gens1]
    g1.spanning_tree(gens1)
    if g1.order != g2.order or g1.order_profile != g2.order_profile:
        return []
    by_order: dict[int, list[int]] = {}
    for y, o in enumerate(g2.element_orders):
        by_order.setdefault(int(o), []).append(y)
    pools = [by_order.get(g1.element_order(x), []) for x in gens1]
    candidates = list(itertools.product(*pools))

    def work(chunk):
        found = []
        for imgs in chunk:
            try:
                hom = extend_generator_map(g1, g2, GenMap(gens1, imgs))
            except ExtensionError:
                continue
            if hom.is_isomorphism:
                found.append(hom)
                if limit is not None and len(found) >= limit:
                    break
        return found

    if limit is not None:
        threads = 1
    return run_chunked(work, candidates, threads)[:limit]


def are_isomorphic(g1: GroupTable, g2: GroupTable, gens1: Sequence[int] | None = None) -> bool:
    if gens1 is None:
        gens1 = g1.gens if g1.gens is not None else minimal_generators(g1)
    return bool(isomorphism_search(g1, gens1, g2, limit=1))


def automorphisms(g: GroupTable, gens: Sequence[int] | None = None, threads: int = 1) -> list[Homomorphism]:
    if gens is None:
        gens = g.gens if g.gens is not None else minimal_generators(g)
    return isomorphism_search(g, gens, g, threads=threads)


def is_isobicyclic_pair(g: GroupTable, a: int, b: int) -> bool:
    n = math.isqrt(g.order)
    if n * n != g.order or g.element_order(a) != n or g.element_order(b) != n:
        return False
    if set(g.cyclic(a)) & set(g.cyclic(b)) != {g.identity}:
        return False
    return swap_automorphism(g, a, b) is not None


def swap_automorphism(g: GroupTable, a: int, b: int) -> Homomorphism | None:
    try:
        hom = extend_generator_map(g, g, GenMap((a, b), (b, a)))
    except (ExtensionError, PreconditionError):
        return None
    return hom if hom.is_isomorphism else None


def find_isobicyclic_pairs(g: GroupTable, threads: int = 1) -> list[tuple[int, int]]:
    """Ordered pairs (a, b) with |a| = |b| = n, <a> ∩ <b> = 1 and a swap automorphism.

    Requires ``|G| = n^2``; the trivial intersection then forces ``G = <a><b>``.
    """
    n = math.isqrt(g.order)
    if n * n != g.order:
        log.info("group order %d is not a perfect square; no isobicyclic pairs", g.order)
        return []
    cands = [int(x) for x in np.flatnonzero(g.element_orders == n)]
    if not cands:
        return []
    masks = np.zeros((len(cands), g.order), dtype=np.int64)
    for r, x in enumerate(cands):
        masks[r, g.cyclic(x)] = 1
    overlap = masks @ masks.T
    pairs = [(cands[i], cands[j]) for i, j in zip(*np.nonzero(overlap == 1))]

    def work(chunk):
        return [(a, b) for a, b in chunk if _swap_extends(g, a, b)]

    return run_chunked(work, pairs, threads)


def _swap_extends(g: GroupTable, a: int, b: int) -> bool:
    """Swap test for a pair already known to factorise G as <a><b>.

    The only candidate map sends ``a^i b^j`` to ``b^i a^j``; it is an
    automorphism iff it respects right multiplication by a and by b.
    """
    pa = np.array(g.cyclic(a), dtype=np.int64)
    pb = np.array(g.cyclic(b), dtype=np.int64)
    elems = g.mul[pa[:, None], pb[None, :]].ravel()
    phi = np.empty(g.order, dtype=np.int64)
    phi[elems] = g.mul[pb[:, None], pa[None, :]].ravel()
    if np.unique(phi).size != g.order:
        return False
    return bool(np.array_equal(phi[g.mul[:, a]], g.mul[phi, b])
                and np.array_equal(phi[g.mul[:, b]], g.mul[phi, a]))


# -- serialisation ---------------------------------------------------------------


def dump_table(g: GroupTable) -> str:
    buf = io.StringIO()
    buf.write(f"order {g.order} identity {g.identity}\n")
    for row in g.mul:
        buf.write(" ".join(map(str, row.tolist())))
        buf.write("\n")
    return buf.getvalue()


def load_table(text: str) -> GroupTable:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty group file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "order" or head[2] != "identity":
        raise ValueError("group file header must be 'order N identity I'")
    n, ident = int(head[1]), int(head[3])
    rows = [list(map(int, line.split())) for line in lines[1:1 + n]]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"expected {n} rows of {n} entries")
    return GroupTable(rows, ident)


def invariant_key(g: GroupTable) -> tuple:
    """Cheap isomorphism invariants used to bucket groups before a full search."""
    d = derived_subgroup(g)
    inv = abelian_invariants(d) if d.is_abelian() else None
    return (g.order, g.order_profile, tuple(inv) if inv is not None else None, center(g).order)

