"""Acceptance criteria, one test each, with the stated time limits.

Every test prints a ``criterion N: PASS|FAIL`` line to the terminal (outside
pytest's capture) before asserting, so the summary is visible with ``-v``.
"""
import itertools
import os
import subprocess
import sys
import time

import pytest

from isoclass.cayley import Subgroup, derived_subgroup, find_isobicyclic_pairs
from isoclass.classify import analyze_triple
from isoclass.errors import IsoclassError
from isoclass.factorise import family_candidates, matched_pair_search, matching_family
from isoclass.families import NonMetacyclic, to_cayley
from isoclass.maps import build_map, enumerate_maps, klein_group, make_triple
from isoclass.presentations import make_presentation, todd_coxeter, verify_theorem_4_2
from isoclass.suites import coset_oracle_agreement, lemma21_checks, lemma22_checks, nonmetacyclic_params


def verdict(capsys, number: int, ok: bool, elapsed: float, limit: float | None, detail: str = ""):
    timed = limit is None or elapsed < limit
    status = "PASS" if ok and timed else "FAIL"
    bound = f" (limit {limit:.0f} s)" if limit is not None else ""
    with capsys.disabled():
        print(f"\ncriterion {number}: {status}  {elapsed:.1f} s{bound}  {detail}".rstrip())
    assert ok, detail
    assert timed, f"took {elapsed:.1f} s, limit {limit} s"


def test_criterion_01_orders(capsys):
    t0 = time.perf_counter()
    bad = []
    for e in range(2, 7):
        for p in nonmetacyclic_params(e):
            if to_cayley(p).table.order != 1 << (2 * e):
                bad.append(f"closure {p}")
            if e <= 4:
                tab = todd_coxeter(make_presentation(p))
                if not tab.complete or tab.count != 1 << (2 * e):
                    bad.append(f"coset enumeration {p}")
    verdict(capsys, 1, not bad, time.perf_counter() - t0, 60, ", ".join(bad))


def test_criterion_02_lemma21(capsys):
    t0 = time.perf_counter()
    failures = []
    for e in range(2, 6):
        failures += [f"{c.scope}: {c.name}" for c in lemma21_checks(e).failures()]
    verdict(capsys, 2, not failures, time.perf_counter() - t0, 120, "; ".join(failures))


def test_criterion_03_normal_form_oracle(capsys):
    t0 = time.perf_counter()
    bad = [str(p) for e in (2, 3, 4) for p in nonmetacyclic_params(e)
           if not coset_oracle_agreement(p)[0]]
    verdict(capsys, 3, not bad, time.perf_counter() - t0, 60, ", ".join(bad))


def test_criterion_04_isomorphism_calculus(capsys):
    t0 = time.perf_counter()
    checks = lemma22_checks(3)
    names = {c.name for c in checks.checks}
    complete = {"closed-form witness test agrees with brute force", "|Aut| = n^4/8", "|Aut| = n^4/16",
                "isomorphism classes among G2(e;k,l)"} <= names
    aut = {c.name: c.actual for c in checks.checks if c.name.startswith("|Aut|")}
    part = [c.actual for c in checks.checks if c.name.startswith("isomorphism classes")][0]
    ok = (checks.passed and complete and aut == {"|Aut| = n^4/8": 512, "|Aut| = n^4/16": 256}
          and len(part) == 3 and ["G2(3;0,1)", "G2(3;1,1)"] in part)
    verdict(capsys, 4, ok, time.perf_counter() - t0, 300,
            "; ".join(f"{c.name}: {c.actual}" for c in checks.failures()))


def test_criterion_05_theorem_4_2(capsys):
    t0 = time.perf_counter()
    bad = []
    for r, (k, l) in itertools.product((2, 3), itertools.product((0, 1), repeat=2)):
        try:
            cert = verify_theorem_4_2(r, k, l)
        except IsoclassError as exc:
            bad.append(f"BJ({r},{k},{l}): {exc}")
            continue
        if not cert.certified or cert.presentation_order != 1 << (2 * r + 4):
            bad.append(f"BJ({r},{k},{l}): order {cert.presentation_order}")
    verdict(capsys, 5, not bad, time.perf_counter() - t0, 300, "; ".join(bad))


def _triple_problems(name, g, e):
    out = []
    for a, b in find_isobicyclic_pairs(g):
        try:
            r = analyze_triple(g, a, b, verify_pair=False)
        except IsoclassError as exc:
            out.append(f"{name} ({a},{b}): {exc}")
            continue
        dg = derived_subgroup(g)
        if not dg.is_abelian():
            out.append(f"{name}: G' not abelian")
        if r.abelian:
            continue
        if r.metacyclic != (2 <= r.u < r.v == e) or (not r.metacyclic and (r.u, r.v) != (1, 2)):
            out.append(f"{name} ({a},{b}): u={r.u} v={r.v} metacyclic={r.metacyclic}")
        if g.element_order(r.c) != 1 << (e - r.u):
            out.append(f"{name} ({a},{b}): |c| = {g.element_order(r.c)}")
        av = g.power(a, 1 << r.v)
        cc, ca = Subgroup(g, tuple(g.cyclic(r.c))), Subgroup(g, tuple(g.cyclic(av)))
        if cc.intersection(ca).order != 1 or cc.order * ca.order != dg.order \
                or cc.join(ca).members != dg.members:
            out.append(f"{name} ({a},{b}): G' != <c> x <a^(2^v)>")
    return out


def test_criterion_06_triple_analysis(capsys):
    t0 = time.perf_counter()
    problems = _triple_problems("C2xC2", klein_group(), 1)
    groups = 1
    for e in (2, 3, 4):
        for p in family_candidates(1 << e):
            groups += 1
            problems += _triple_problems(str(p), to_cayley(p).table, e)
    verdict(capsys, 6, not problems, time.perf_counter() - t0, 300,
            f"{groups} groups; " + "; ".join(problems[:5]))


def test_criterion_07_completeness_e2(capsys):
    t0 = time.perf_counter()
    res = matched_pair_search(4, True)
    names = sorted(matching_family(fg.table, fg.pair) or "none" for fg in res.classes)
    ok = len(res.classes) == 2 and names == ["G1(2,2)", "G2(2;0,0)"]
    verdict(capsys, 7, ok, time.perf_counter() - t0, 120, f"classes {names}")


def test_criterion_08_theorem_5_1(capsys):
    t0 = time.perf_counter()
    counts = {n: len(enumerate_maps(n, "nonmetacyclic")) for n in (4, 8, 16)}
    ok = counts == {4: 1, 8: 4, 16: 4}
    verdict(capsys, 8, ok, time.perf_counter() - t0, 600, f"classes {counts}")


def test_criterion_09_map_invariants(capsys):
    t0 = time.perf_counter()
    bad = []
    k22 = build_map(make_triple(klein_group(), *klein_group().gens))
    if k22.genus != 0:
        bad.append(f"K_2,2 genus {k22.genus}")
    for n in (2, 4, 8):
        for mc in enumerate_maps(n):
            m = mc.map
            if m.euler != 2 - 2 * m.genus or m.genus < 0 or not m.connected():
                bad.append(f"{mc.group_name} {mc.triple.labels}")
    verdict(capsys, 9, not bad, time.perf_counter() - t0, 10, ", ".join(bad))


DETERMINISM_RUNS = [
    ["maps", "--n", "8"],
    ["maps", "--n", "16", "--family", "nonmetacyclic", "--json"],
    ["search", "--n", "4", "--allow-no-swap", "--json"],
    ["verify", "--e", "3", "--suite", "lemma21", "--suite", "thm51"],
    ["present", "--spec", "BJ(2,1,1)", "--json"],
]


def test_criterion_10_determinism(capsys):
    t0 = time.perf_counter()
    diffs = []
    for argv in DETERMINISM_RUNS:
        outs = set()
        for threads, seed in (("1", "1"), ("1", "2"), ("3", "3")):
            env = dict(os.environ, PYTHONHASHSEED=seed)
            proc = subprocess.run([sys.executable, "-m", "isoclass.cli", *argv, "--threads", threads],
                                  capture_output=True, env=env)
            outs.add((proc.returncode, proc.stdout))
        if len(outs) != 1:
            diffs.append(" ".join(argv))
    verdict(capsys, 10, not diffs, time.perf_counter() - t0, None, "; ".join(diffs))
