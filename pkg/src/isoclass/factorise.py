"""
Exhaustive search for groups ``G = AB`` with ``A = <a>``, ``B = <b>`` cyclic of order n
and ``A ∩ B = 1``.

Every element is uniquely ``a^i b^j``, so the group is fixed by the rewriting
``b^j a^i = a^x b^y``.  With ``b^y a = a^f(y) b^g(y)`` the rule

    b^j a^(i+1) = (a^x b^y) a = a^(x + f(y)) b^g(y)

fills the whole rewriting table from the pair of functions ``(f, g)``.  The
search assigns ``f(y), g(y)`` one ``y`` at a time and propagates both this
rule and its mirror ``b^(j+1) a^i = b (a^x b^y) = (b a^x) b^y``; conflicts,
including wrap-around at ``a^n = b^n = 1``, prune the branch.
"""
from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cayley import (GroupTable, run_chunked, abelian_invariants, are_isomorphic, derived_subgroup, dump_table,
                     invariant_key, is_isobicyclic_pair, isomorphism_search)
from .errors import DomainError
from .families import Metacyclic, NonMetacyclic, cached_cayley
from .report import Check, CheckList

SUPPORTED_N = (2, 4)
KLEIN_LABEL = "C2xC2"
EXPENSIVE_N = (8,)


@dataclass
class MatchedPair:
    """The functions ``f, g`` with ``b^y a = a^f(y) b^g(y)``."""

    n: int
    f: tuple[int, ...]
    g: tuple[int, ...]

    def __post_init__(self):
        if self.f[0] != 1 or self.g[0] != 0:
            raise ValueError("f(0) must be 1 and g(0) must be 0")


@dataclass
class FactorisedGroup:
    table: GroupTable
    pair: tuple[int, int]
    matched: MatchedPair
    multiplicity: int = 1

    @property
    def n(self) -> int:
        return self.matched.n


@dataclass
class SearchResult:
    n: int
    require_swap: bool
    heuristic: bool
    candidates: int
    groups_found: int
    classes: list[FactorisedGroup] = field(default_factory=list)

    @property
    def label(self) -> str:
        return "heuristic search" if self.heuristic else "exhaustive search"


class _Conflict(Exception):
    pass


class _Rewriting:
    """Partial table ``T[j][i] = (x, y)`` meaning ``b^j a^i = a^x b^y``."""

    def __init__(self, n: int):
        self.n = n
        self.t: list[list[tuple[int, int] | None]] = [[None] * n for _ in range(n)]
        for i in range(n):
            self.t[0][i] = (i, 0)
        for j in range(n):
            self.t[j][0] = (0, j)

    def copy(self) -> "_Rewriting":
        r = _Rewriting.__new__(_Rewriting)
        r.n = self.n
        r.t = [row[:] for row in self.t]
        return r

    def set(self, j: int, i: int, v: tuple[int, int], queue: list):
        old = self.t[j][i]
        if old is None:
            # b^j a^i for fixed j is injective in i
            if v in self.t[j]:
                raise _Conflict
            self.t[j][i] = v
            queue.append((j, i))
        elif old != v:
            raise _Conflict

    def propagate(self, queue: list):
        n, t = self.n, self.t
        while queue:
            j, i = queue.pop()
            x, y = t[j][i]
            # right multiplication by a
            fy = t[y][1]
            if fy is not None:
                self.set(j, (i + 1) % n, ((x + fy[0]) % n, fy[1]), queue)
            # left multiplication by b
            bx = t[1][x]
            if bx is not None:
                self.set((j + 1) % n, i, (bx[0], (bx[1] + y) % n), queue)
            # entries whose rule reads (j, i) as the lookup cell
            if i == 1:
                for jj in range(n):
                    for ii in range(n):
                        c = t[jj][ii]
                        if c is not None and c[1] == j:
                            self.set(jj, (ii + 1) % n, ((c[0] + x) % n, y), queue)
            if j == 1:
                for jj in range(n):
                    for ii in range(n):
                        c = t[jj][ii]
                        if c is not None and c[0] == i:
                            self.set((jj + 1) % n, ii, (x, (y + c[1]) % n), queue)


def _search_rewritings(n: int, heuristic: bool) -> tuple[list[MatchedPair], int]:
    """All rewriting tables consistent under propagation; also the branch count."""
    out: list[MatchedPair] = []
    visited = 0
    start = _Rewriting(n)
    try:
        start.propagate([(j, i) for j in range(n) for i in range(n) if start.t[j][i] is not None])
    except _Conflict:
        return out, 1

    def rec(state: _Rewriting):
        nonlocal visited
        visited += 1
        col = [state.t[y][1] for y in range(n)]
        free = [y for y in range(n) if col[y] is None]
        if not free:
            if all(v is not None for row in state.t for v in row):
                out.append(MatchedPair(n, tuple(c[0] for c in col), tuple(c[1] for c in col)))
            return
        y = _next_branch(state, free)
        for fy in range(n):
            for gy in range(n):
                if heuristic and y % 2 == 0 and gy % 2:
                    continue
                nxt = state.copy()
                try:
                    nxt.set(y, 1, (fy, gy), q := [])
                    nxt.propagate(q)
                except _Conflict:
                    continue
                rec(nxt)

    rec(start)
    return out, visited


def _next_branch(state: _Rewriting, free: list[int]) -> int:
    """The y whose f(y), g(y) extends the row ``b a^i`` furthest.

    Once that row is complete the mirror rule determines the whole table.
    """
    row = state.t[1]
    for i in range(state.n):
        if row[i] is not None and row[(i + 1) % state.n] is None:
            y = row[i][1]
            if state.t[y][1] is None:
                return y
    return free[0]


def raw_candidates(n: int):
    """Every ``(f, g)`` with ``f(0) = 1``, ``g(0) = 0``, without pruning (small n only)."""
    for f in itertools.product(range(n), repeat=n - 1):
        for g in itertools.product(range(n), repeat=n - 1):
            yield MatchedPair(n, (1,) + f, (0,) + g)


def induced_table(mp: MatchedPair) -> GroupTable | None:
    """Multiplication on ``a^i b^j`` (index ``i n + j``) induced by ``(f, g)``.

    Returns None when the rewriting does not close up or the result is not a group.
    """
    n = mp.n
    swap = np.empty((n, n, 2), dtype=np.int64)
    for j in range(n):
        x, y = 0, j
        for i in range(n):
            swap[j, i] = (x, y)
            x, y = (x + mp.f[y]) % n, mp.g[y]
        if (x, y) != (0, j):
            return None
    idx = np.arange(n * n)
    i1, j1 = np.divmod(idx, n)
    # (a^i1 b^j1)(a^i2 b^j2) = a^(i1 + x) b^(y + j2) with b^j1 a^i2 = a^x b^y
    xs = swap[j1[:, None], i1[None, :], 0]
    ys = swap[j1[:, None], i1[None, :], 1]
    mul = ((i1[:, None] + xs) % n) * n + (ys + j1[None, :]) % n
    if any(np.unique(row).size != n * n for row in mul) or \
            any(np.unique(col).size != n * n for col in mul.T):
        return None
    g = GroupTable(mul, identity=0, gens=(n, 1))
    if not _associative(mul):
        return None
    return g


def _associative(mul: np.ndarray) -> bool:
    """Exhaustive associativity check, vectorised over one index."""
    for x in range(mul.shape[0]):
        # (x y) z vs x (y z) for all y, z
        if not np.array_equal(mul[mul[x]], mul[x][mul]):
            return False
    return True


def matched_pair_search(n: int, require_swap: bool, expensive: bool = False,
                        heuristic: bool = False, threads: int = 1) -> SearchResult:
    """Isomorphism classes of exact factorisations ``C_n C_n``, with the distinguished pair.

    n = 8 needs ``expensive``.  ``heuristic`` additionally forces g to map
    even exponents to even ones (b^2 kept inside <b^2>), which may lose
    groups; such results are labelled "heuristic search".
    """
    if n in EXPENSIVE_N:
        if not expensive:
            raise DomainError(f"n = {n} needs the explicit expensive flag")
    elif n not in SUPPORTED_N:
        raise DomainError(f"matched-pair search supports n in {SUPPORTED_N} (8 with expensive=True), got {n}")
    pairs, visited = _search_rewritings(n, heuristic)

    def work(chunk):
        built = []
        for mp in chunk:
            g = induced_table(mp)
            if g is None:
                continue
            if require_swap and not is_isobicyclic_pair(g, n, 1):
                continue
            built.append(FactorisedGroup(g, (n, 1), mp))
        return built

    found = run_chunked(work, pairs, threads)
    return SearchResult(n, require_swap, heuristic, visited, len(found), _dedupe(found))


def _dedupe(groups: list[FactorisedGroup]) -> list[FactorisedGroup]:
    buckets: dict[tuple, list[FactorisedGroup]] = {}
    reps: list[FactorisedGroup] = []
    for fg in groups:
        bucket = buckets.setdefault(invariant_key(fg.table), [])
        for rep in bucket:
            if isomorphism_search(fg.table, fg.pair, rep.table, limit=1):
                rep.multiplicity += 1
                break
        else:
            bucket.append(fg)
            reps.append(fg)
    return reps


def family_candidates(n: int):
    e = int(math.log2(n))
    if e < 2:
        return []
    out = [Metacyclic(e, f) for f in range(2, e + 1)]
    out += [NonMetacyclic(2)] if e == 2 else [NonMetacyclic(e, k, l) for k in (0, 1) for l in (0, 1)]
    return out


def matching_family(g: GroupTable, gens) -> str | None:
    n = math.isqrt(g.order)
    if n == 2 and g.order == 4 and g.exponent == 2:
        return KLEIN_LABEL
    for p in family_candidates(n):
        if n * n == g.order and isomorphism_search(g, gens, cached_cayley(p).table, limit=1):
            return str(p)
    return None


def class_index(result: SearchResult) -> dict:
    classes = []
    for fg in result.classes:
        dg = derived_subgroup(fg.table)
        classes.append({
            "order_profile": [list(t) for t in fg.table.order_profile],
            "derived_invariants": abelian_invariants(dg) if dg.is_abelian() else None,
            "matches_family": matching_family(fg.table, fg.pair),
        })
    return {"n": result.n, "class_count": len(result.classes), "classes": classes}


def export_classes(result: SearchResult, outdir: str | os.PathLike) -> list[Path]:
    """Write one table file per class plus ``index.json``; returns the written paths."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for k, fg in enumerate(result.classes):
        p = out / f"class{k:02d}.table"
        p.write_text(dump_table(fg.table))
        paths.append(p)
    idx = out / "index.json"
    idx.write_text(json.dumps(class_index(result), indent=2, sort_keys=True) + "\n")
    paths.append(idx)
    return paths


# -- classification check --------------------------------------------------------------


def expected_partition(e: int) -> list[list[str]]:
    if e == 2:
        return [["G1(2,2)"], ["G2(2;0,0)"]]
    return ([[f"G1({e},{f})"] for f in range(2, e + 1)]
            + [[f"G2({e};0,0)"], [f"G2({e};1,0)"], [f"G2({e};0,1)", f"G2({e};1,1)"]])


def family_partition(e: int) -> list[list[str]]:
    """Isomorphism classes among the constructed family groups of exponent 2^e."""
    groups = [(str(p), cached_cayley(p)) for p in family_candidates(1 << e)]
    classes: list[list[tuple[str, object]]] = []
    for name, fg in groups:
        for cls in classes:
            if are_isomorphic(fg.table, cls[0][1].table, fg.gens):
                cls.append((name, fg))
                break
        else:
            classes.append([(name, fg)])
    return [[name for name, _ in cls] for cls in classes]


def verify_classification(e: int) -> CheckList:
    if e not in (2, 3, 4):
        raise DomainError(f"verify_classification supports e in 2..4, got {e}")
    checks = CheckList()
    if e == 2:
        res = matched_pair_search(4, True)
        checks.equal("classes = 2", 2, len(res.classes))
        matches = sorted(matching_family(fg.table, fg.pair) or "none" for fg in res.classes)
        checks.equal("classes match G1(2,2) and G2(2;0,0)", ["G1(2,2)", "G2(2;0,0)"], matches)
    part = sorted(family_partition(e))
    checks.equal(f"isomorphism classes among families, e={e}", sorted(expected_partition(e)), part)
    if e >= 3:
        checks.add(_completeness_note(e))
    return checks


def _completeness_note(e: int) -> Check:
    return Check(f"completeness beyond the families for e={e}", True,
                 "not established by search", "not established by search")
