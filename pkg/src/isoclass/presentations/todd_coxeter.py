"""
Todd-Coxeter coset enumeration.

Two strategies are provided and must agree whenever both finish:

``"relator"``
    HLT: at each live coset in turn, trace every relator, defining new
    cosets as needed; lookahead (scan without defining) when the table
    fills up.
``"coset"``
    Felsch-style: always define the first undefined table entry, then
    derive consequences by scanning relators at the cosets involved.

Coincidences are merged with a union-find over coset numbers; the smaller
number survives.  Cosets are numbered in order of definition and compacted
at the end, so the output is deterministic.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

from .parser import Presentation, Word

DEFAULT_CAP = 1 << 18
CAP_ENV = "ISOCLASS_COSET_CAP"


def default_cap() -> int:
    env = os.environ.get(CAP_ENV)
    return int(env) if env else DEFAULT_CAP


@dataclass(frozen=True)
class CosetTable:
    """Right action of each generator on the cosets ``0 .. count-1``.

    ``status`` is ``"complete"`` or ``"capacity-exceeded"``; in the latter case
    ``count`` is 0 and ``action`` is empty.
    """

    count: int
    action: dict[str, tuple[int, ...]]
    status: str = "complete"
    generators: tuple[str, ...] = field(default=())
    defined: int = field(default=0, compare=False)

    @property
    def complete(self) -> bool:
        return self.status == "complete"

    def act(self, coset: int, w: Word) -> int:
        for s, e in w:
            perm = self.action[s]
            if e > 0:
                for _ in range(e):
                    coset = perm[coset]
            else:
                inv = self.inverse_action(s)
                for _ in range(-e):
                    coset = inv[coset]
        return coset

    def inverse_action(self, s: str) -> tuple[int, ...]:
        perm = self.action[s]
        inv = [0] * len(perm)
        for i, j in enumerate(perm):
            inv[j] = i
        return tuple(inv)

    def standardize(self) -> "CosetTable":
        """Renumber cosets breadth-first from coset 0, columns in generator order."""
        cols = []
        for g in self.generators:
            cols.append(self.action[g])
            cols.append(self.inverse_action(g))
        new = {0: 0}
        order = [0]
        i = 0
        while i < len(order):
            c = order[i]
            for col in cols:
                d = col[c]
                if d not in new:
                    new[d] = len(order)
                    order.append(d)
            i += 1
        action = {g: tuple(new[self.action[g][c]] for c in order) for g in self.generators}
        return CosetTable(self.count, action, self.status, self.generators, self.defined)


class _Overflow(Exception):
    pass


class _Enumerator:
    def __init__(self, pres: Presentation, subgroup: list[Word], cap: int):
        self.gens = pres.generators
        gidx = {g: i for i, g in enumerate(self.gens)}
        self.ncols = 2 * len(self.gens)

        def letters(w: Word) -> list[int]:
            out = []
            for s, e in w:
                col = 2 * gidx[s] + (0 if e > 0 else 1)
                out.extend([col] * abs(e))
            return out

        self.relators = [letters(r) for r in pres.relators]
        self.subgroup = [letters(w) for w in subgroup]
        self.cap = cap
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.p = [0]
        self.live = 1
        self.defined = 1
        self.deductions: list[tuple[int, int]] | None = None

    # -- primitives --------------------------------------------------------

    def define(self, c: int, x: int):
        d = len(self.table)
        self.table.append([-1] * self.ncols)
        self.p.append(d)
        self.live += 1
        self.defined += 1
        self.table[c][x] = d
        self.table[d][x ^ 1] = c
        if self.deductions is not None:
            self.deductions.append((c, x))

    def rep(self, k: int) -> int:
        p = self.p
        r = k
        while p[r] != r:
            r = p[r]
        while p[k] != r:
            p[k], k = r, p[k]
        return r

    def merge(self, k: int, l: int, queue: list[int]):
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        if l < k:
            k, l = l, k
        self.p[l] = k
        self.live -= 1
        queue.append(l)

    def coincidence(self, a: int, b: int):
        t = self.table
        queue: list[int] = []
        self.merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(self.ncols):
                f = t[e][x]
                if f < 0:
                    continue
                t[f][x ^ 1] = -1
                e1, f1 = self.rep(e), self.rep(f)
                if t[e1][x] >= 0:
                    self.merge(f1, t[e1][x], queue)
                elif t[f1][x ^ 1] >= 0:
                    self.merge(e1, t[f1][x ^ 1], queue)
                else:
                    t[e1][x] = f1
                    t[f1][x ^ 1] = e1
                    if self.deductions is not None:
                        self.deductions.append((e1, x))

    def scan(self, c: int, w: list[int], fill: bool):
        """Trace ``w`` from ``c`` forwards and backwards.

        Closes single gaps by deduction, processes coincidences, and with
        ``fill`` defines new cosets to complete the trace.
        """
        t = self.table
        f, b = c, c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and t[f][w[i]] >= 0:
                f = t[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and t[b][w[j] ^ 1] >= 0:
                b = t[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                t[f][w[i]] = b
                t[b][w[i] ^ 1] = f
                if self.deductions is not None:
                    self.deductions.append((f, w[i]))
                return
            if not fill:
                return
            self.define(f, w[i])

    def lookahead(self):
        for c in range(len(self.table)):
            for r in self.relators:
                if self.p[c] != c:
                    break
                self.scan(c, r, fill=False)

    def compact(self, pointer: int = 0) -> int:
        """Drop dead cosets, renumbering in order; returns the remapped pointer."""
        live = [c for c in range(len(self.table)) if self.p[c] == c]
        new = {c: i for i, c in enumerate(live)}
        self.table = [[new[d] if d >= 0 else -1 for d in self.table[c]] for c in live]
        self.p = list(range(len(live)))
        self.live = len(live)
        return sum(1 for c in live if c < pointer)

    def ensure_room(self, pointer: int) -> int:
        if len(self.table) < self.cap:
            return pointer
        self.lookahead()
        if self.deductions:
            # compaction renumbers cosets, so pending deductions go first
            self.process_deductions()
        pointer = self.compact(pointer)
        if self.live >= self.cap:
            raise _Overflow
        return pointer

    # -- strategies ----------------------------------------------------------

    def run_hlt(self):
        for w in self.subgroup:
            self.scan(0, w, fill=True)
        c = 0
        while c < len(self.table):
            c = self.ensure_room(c)
            if self.p[c] == c:
                for r in self.relators:
                    if self.p[c] != c:
                        break
                    self.scan(c, r, fill=True)
                if self.p[c] == c:
                    row = self.table[c]
                    for x in range(self.ncols):
                        if row[x] < 0:
                            self.define(c, x)
            c += 1

    def run_felsch(self):
        self.deductions = []
        for w in self.subgroup:
            self.scan(0, w, fill=True)
        self.process_deductions()
        c = 0
        while True:
            while c < len(self.table):
                if self.p[c] == c and min(self.table[c]) < 0:
                    break
                c += 1
            else:
                # no gaps left: a full scan either confirms the table or finds coincidences
                before = self.live
                self.lookahead()
                if self.live == before and self.deductions == []:
                    return
                self.process_deductions()
                c = 0
                continue
            c = self.ensure_room(c)
            if self.p[c] != c or min(self.table[c]) >= 0:
                continue
            x = self.table[c].index(-1)
            self.define(c, x)
            self.process_deductions()

    def process_deductions(self):
        # every relator is scanned at both ends of each new edge; simple and complete
        while self.deductions:
            c, x = self.deductions.pop()
            for d in (c, self.table[c][x] if self.p[c] == c else -1):
                if d < 0:
                    continue
                d = self.rep(d)
                for r in self.relators:
                    if self.p[d] != d:
                        break
                    for k in range(len(r)):
                        self.scan(d, r[k:] + r[:k], fill=False)
                        if self.p[d] != d:
                            break

    def result(self) -> CosetTable:
        self.compact()
        n = len(self.table)
        t = self.table
        for row in t:
            if min(row) < 0:
                raise AssertionError("coset table incomplete after enumeration")
        for c in range(n):
            for r in self.relators:
                d = c
                for x in r:
                    d = t[d][x]
                if d != c:
                    raise AssertionError("relator does not act trivially on the final table")
        action = {g: tuple(t[c][2 * i] for c in range(n)) for i, g in enumerate(self.gens)}
        return CosetTable(n, action, "complete", tuple(self.gens), self.defined)


def todd_coxeter(pres: Presentation, subgroup_words: list[Word] | None = None,
                 cap: int | None = None, strategy: str = "relator") -> CosetTable:
    """Enumerate the cosets of the subgroup generated by ``subgroup_words``.

    Over the trivial subgroup the coset count is the group order.  Running
    out of room is reported through ``status``, not raised.
    """
    if strategy not in ("relator", "coset"):
        raise ValueError(f"unknown strategy {strategy!r}")
    en = _Enumerator(pres, list(subgroup_words or []), cap if cap is not None else default_cap())
    try:
        if strategy == "relator":
            en.run_hlt()
        else:
            en.run_felsch()
    except _Overflow:
        return CosetTable(0, {}, "capacity-exceeded", tuple(pres.generators), en.defined)
    return en.result()


def group_order(pres: Presentation, cap: int | None = None, strategy: str = "relator") -> int | None:
    tab = todd_coxeter(pres, cap=cap, strategy=strategy)
    return tab.count if tab.complete else None
