import json

import pytest

from isoclass.cayley import find_isobicyclic_pairs, is_isobicyclic_pair, load_table
from isoclass.classify import classify_triple
from isoclass.errors import DomainError
from isoclass.factorise import (KLEIN_LABEL, MatchedPair, class_index, export_classes,
                                induced_table, matched_pair_search, matching_family, raw_candidates,
                                verify_classification)
from isoclass.families import Metacyclic, NonMetacyclic


@pytest.fixture(scope="module")
def swap4():
    return matched_pair_search(4, True)


def test_n2_single_class():
    res = matched_pair_search(2, True)
    assert len(res.classes) == 1
    fg = res.classes[0]
    assert matching_family(fg.table, fg.pair) == KLEIN_LABEL


def test_n4_swap_classes(swap4):
    assert len(swap4.classes) == 2
    names = sorted(matching_family(fg.table, fg.pair) for fg in swap4.classes)
    assert names == ["G1(2,2)", "G2(2;0,0)"]
    assert swap4.label == "exhaustive search"


def test_n4_classes_classify_into_families(swap4):
    got = sorted(str(classify_triple(fg.table, *fg.pair)) for fg in swap4.classes)
    assert got == [str(Metacyclic(2, 2)), str(NonMetacyclic(2))]


def test_n4_without_swap_is_a_superset(swap4):
    res = matched_pair_search(4, False)
    # regression value from the exhaustive search
    assert (res.groups_found, len(res.classes)) == (4, 3)
    names = {matching_family(fg.table, fg.pair) for fg in res.classes}
    assert {"G1(2,2)", "G2(2;0,0)"} <= names


@pytest.mark.parametrize("n", [2, 4])
@pytest.mark.parametrize("swap", [True, False])
def test_emitted_groups_are_factorised(n, swap):
    for fg in matched_pair_search(n, swap).classes:
        g = fg.table
        a, b = fg.pair
        assert g.order == n * n and g.check_group_axioms()
        assert g.element_order(a) == g.element_order(b) == n
        assert set(g.cyclic(a)) & set(g.cyclic(b)) == {g.identity}
        if swap:
            assert is_isobicyclic_pair(g, a, b)
            assert find_isobicyclic_pairs(g)


@pytest.mark.parametrize("n", [2, 4])
def test_pruned_search_matches_raw_enumeration(n):
    raw = [mp for mp in raw_candidates(n) if induced_table(mp) is not None]
    res = matched_pair_search(n, False)
    assert res.groups_found == len(raw)


def test_threads_do_not_change_result(swap4):
    res = matched_pair_search(4, True, threads=3)
    assert json.dumps(class_index(res)) == json.dumps(class_index(swap4))


def test_n8_exhaustive():
    res = matched_pair_search(8, True, expensive=True)
    names = sorted(matching_family(fg.table, fg.pair) for fg in res.classes)
    assert names == ["G1(3,2)", "G1(3,3)", "G2(3;0,0)", "G2(3;0,1)", "G2(3;1,0)"]
    assert res.label == "exhaustive search"
    h = matched_pair_search(8, True, expensive=True, heuristic=True)
    assert h.label == "heuristic search"


def test_domain_errors():
    with pytest.raises(DomainError):
        matched_pair_search(8, True)
    for n in (3, 16):
        with pytest.raises(DomainError):
            matched_pair_search(n, True, expensive=True)
    with pytest.raises(ValueError):
        MatchedPair(2, (0, 1), (0, 0))


def test_inconsistent_candidate_rejected():
    # g(1) = 0 would make b a = a, which is not a group law
    assert induced_table(MatchedPair(2, (1, 1), (0, 0))) is None
    assert induced_table(MatchedPair(2, (1, 1), (0, 1))) is not None


def test_index_and_export(tmp_path, swap4):
    idx = class_index(swap4)
    assert idx["n"] == 4 and idx["class_count"] == 2
    assert {c["matches_family"] for c in idx["classes"]} == {"G1(2,2)", "G2(2;0,0)"}
    paths = export_classes(swap4, tmp_path)
    assert [p.name for p in paths] == ["class00.table", "class01.table", "index.json"]
    g = load_table(paths[0].read_text())
    assert g.order == 16
    assert json.loads(paths[-1].read_text()) == idx


@pytest.mark.parametrize("e, nclasses", [(2, 2), (3, 5), (4, 6)])
def test_verify_classification(e, nclasses):
    checks = verify_classification(e)
    assert checks.passed, [c.to_dict() for c in checks.failures()]
    part = [c for c in checks.checks if c.name.startswith("isomorphism classes")][0]
    assert len(part.actual) == nclasses
    with pytest.raises(DomainError):
        verify_classification(5)
