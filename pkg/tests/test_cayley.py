import numpy as np
import pytest
from hypothesis import given, strategies as st

from isoclass.cayley import (CapacityError, GenMap, GroupTable, Subgroup, abelian_invariants,
                             agemo_series, are_isomorphic, automorphisms, build_from_generators,
                             center, characteristic_subgroups, derived_subgroup, dump_table,
                             extend_generator_map, extends, ExtensionError, find_isobicyclic_pairs,
                             frattini, frattini_by_maximal_subgroups, invariant_key, is_isobicyclic_pair,
                             is_metacyclic, isomorphism_search, load_table, lower_central_series,
                             minimal_generators, upper_central_series)
from isoclass.errors import DomainError, PreconditionError
from isoclass.families import NonMetacyclic, cached_cayley

from conftest import cyclic, direct_product, perm_group


def test_table_validation():
    with pytest.raises(ValueError):
        GroupTable([[0, 1]])
    with pytest.raises(ValueError):
        GroupTable([[0, 2], [1, 0]])
    g = cyclic(3)
    assert not g.mul.flags.writeable


def test_build_from_generators_finds_identity_and_caps():
    table, elems = build_from_generators(lambda x, y: (x + y) % 6, [1])
    assert table.order == 6 and elems[0] == 0
    with pytest.raises(CapacityError):
        build_from_generators(lambda x, y: (x + y) % 50, [1], identity=0, cap=10)


def test_group_axioms_and_non_group():
    assert cyclic(5).check_group_axioms()
    # x*y = x - y mod 3 has a right identity only
    bad = GroupTable([[(i - j) % 3 for j in range(3)] for i in range(3)])
    assert not bad.check_group_axioms()


def test_element_orders_and_profile(quaternion, dihedral8):
    assert quaternion.order_profile == ((1, 1), (2, 1), (4, 6))
    assert dihedral8.order_profile == ((1, 1), (2, 5), (4, 2))
    assert quaternion.exponent == 4


def test_center_derived_frattini(quaternion, dihedral8, klein):
    for g in (quaternion, dihedral8):
        assert center(g).order == 2
        assert derived_subgroup(g).order == 2
        assert frattini(g).order == 2
        assert frattini(g).members == frattini_by_maximal_subgroups(g).members
    assert frattini(klein).order == 1
    with pytest.raises(DomainError):
        frattini(cyclic(3))


def test_series(dihedral8):
    upper = upper_central_series(dihedral8)
    assert [s.order for s in upper] == [1, 2, 8]
    lower = lower_central_series(dihedral8)
    assert [s.order for s in lower] == [2, 1]
    agemo = agemo_series(dihedral8)
    assert [s.order for s in agemo] == [8, 2, 1]
    rep = characteristic_subgroups(dihedral8)
    assert rep.nilpotence_class == 2
    s3 = perm_group((1, 0, 2), (1, 2, 0))[0]
    assert characteristic_subgroups(s3, with_frattini=False).nilpotence_class is None


def test_abelian_invariants():
    g = direct_product(direct_product(cyclic(4), cyclic(2)), cyclic(8))
    assert abelian_invariants(g.whole()) == [8, 4, 2]
    assert abelian_invariants(cyclic(12).whole()) == [4, 3]
    assert abelian_invariants(cyclic(1).whole()) == []


def test_quotient_and_subgroup_table(dihedral8):
    z = center(dihedral8)
    q, cosets = dihedral8.quotient(z)
    assert q.order == 4 and q.exponent == 2
    assert q.check_group_axioms()
    assert cosets[dihedral8.identity] == q.identity
    sub = dihedral8.subgroup_table(derived_subgroup(dihedral8))
    assert sub.order == 2
    non_normal = dihedral8.generate([dihedral8.gens[1]])
    with pytest.raises(PreconditionError):
        dihedral8.quotient(non_normal)


def test_subgroup_predicates(dihedral8):
    g = dihedral8
    r, s = g.gens
    rot = g.generate([r])
    refl = g.generate([s])
    assert rot.is_normal() and rot.is_cyclic() and rot.is_abelian()
    assert not refl.is_normal()
    assert rot.intersection(refl).order == 1
    assert rot.join(refl).order == 8
    assert refl.issubset(g.whole())
    assert not Subgroup(g, (g.identity, r)).is_subgroup()


def test_is_metacyclic(quaternion, dihedral8):
    assert is_metacyclic(quaternion)
    assert is_metacyclic(dihedral8)
    c2cube = direct_product(direct_product(cyclic(2), cyclic(2)), cyclic(2))
    assert not is_metacyclic(c2cube)


def test_automorphism_counts(quaternion, dihedral8, klein):
    assert len(automorphisms(klein)) == 6
    assert len(automorphisms(dihedral8)) == 8
    assert len(automorphisms(quaternion)) == 24


def test_isomorphism(quaternion, dihedral8, klein):
    assert not are_isomorphic(quaternion, dihedral8)
    assert not are_isomorphic(cyclic(4), klein)
    c4 = cyclic(4)
    relabel = np.array([0, 3, 2, 1])
    other = GroupTable(relabel[c4.mul[np.ix_(relabel, relabel)]])
    assert are_isomorphic(c4, other)
    assert len(isomorphism_search(c4, [1], other)) == 2


def test_extend_generator_map_errors(dihedral8):
    g = dihedral8
    r, s = g.gens
    with pytest.raises(ExtensionError) as exc:
        extend_generator_map(g, g, GenMap((r, s), (r, r)))
    assert "vs" in str(exc.value)
    with pytest.raises(PreconditionError):
        extend_generator_map(g, g, GenMap((r,), (r,)))
    assert extends(g, g, GenMap((r, s), (g.inverse(r), s)))


def test_isobicyclic_pairs_small():
    fg = cached_cayley(NonMetacyclic(2))
    pairs = find_isobicyclic_pairs(fg.table)
    assert fg.gens in pairs
    assert all(is_isobicyclic_pair(fg.table, a, b) for a, b in pairs)
    assert find_isobicyclic_pairs(cyclic(8)) == []


def test_dump_load_round_trip(quaternion):
    text = dump_table(quaternion)
    back = load_table(text)
    assert np.array_equal(back.mul, quaternion.mul) and back.identity == quaternion.identity
    assert dump_table(back) == text
    with pytest.raises(ValueError):
        load_table("order 2 identity 0\n0 1\n")
    with pytest.raises(ValueError):
        load_table("size 2\n")


def test_invariant_key_separates(quaternion, dihedral8):
    assert invariant_key(quaternion) != invariant_key(dihedral8)


def test_minimal_generators(quaternion):
    gens = minimal_generators(quaternion)
    assert quaternion.generate(gens).order == 8 and len(gens) == 2


@given(st.data())
def test_group_identities_hold(data):
    g = cached_cayley(NonMetacyclic(3, 1, 1)).table
    x, y, z = (data.draw(st.integers(0, g.order - 1)) for _ in range(3))
    assert g.product(x, g.inverse(x)) == g.identity
    assert g.product(g.product(x, y), z) == g.product(x, g.product(y, z))
    # [x, y]^-1 = [y, x] and x^y = x [x, y]
    assert g.inverse(g.commutator(x, y)) == g.commutator(y, x)
    assert g.conjugate(x, y) == g.product(x, g.commutator(x, y))
    k = data.draw(st.integers(-20, 20))
    assert g.power(x, k) == g.power(x, k % g.element_order(x))


@given(st.lists(st.integers(0, 63), min_size=1, max_size=3))
def test_generated_subgroups_are_subgroups(gens):
    g = cached_cayley(NonMetacyclic(3, 0, 1)).table
    h = g.generate(gens)
    assert h.is_subgroup()
    assert g.order % h.order == 0
