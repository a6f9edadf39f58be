import itertools

import pytest
from hypothesis import given, strategies as st

from isoclass.errors import CertificateError, DomainError
from isoclass.families import Metacyclic, NonMetacyclic, cached_cayley
from isoclass.presentations import (BJ, Presentation, PresentationSyntaxError, Simple2,
                                    UnknownSymbolError, default_cap, evaluate, format_presentation,
                                    format_word, group_order, make_presentation, parse_presentation,
                                    parse_spec, parse_word, todd_coxeter, verify_theorem_4_2)
from isoclass.presentations.library import SIMPLE_TEXT, theorem_4_2_images
from isoclass.presentations.parser import reduce_word


# -- parser ---------------------------------------------------------------------------


def test_parse_examples():
    p = parse_presentation(SIMPLE_TEXT)
    assert p.generators == ("a", "b") and len(p.relators) == 5
    q = parse_presentation("⟨ g | g^4 ⟩")
    assert q.generators == ("g",) and q.relators == ((("g", 4),),)
    with pytest.raises(PresentationSyntaxError) as exc:
        parse_presentation("⟨ g | g^ ⟩")
    assert exc.value.pos > 0


def test_commutator_and_conjugate_conventions():
    p = parse_presentation("< x, y | [x, y], x^y >")
    assert p.relators[0] == (("x", -1), ("y", -1), ("x", 1), ("y", 1))
    assert p.relators[1] == (("y", -1), ("x", 1), ("y", 1))


def test_equality_chains():
    p = parse_presentation("< a, b | a^2 = b^3 = 1, a = b >")
    assert p.relators == ((("a", 2),), (("b", 3),), (("a", 1), ("b", -1)))
    # w1 = w2 with neither side trivial becomes w1 w2^-1
    p = parse_presentation("< a, b | a b = b a^-1 >")
    assert p.relators == ((("a", 1), ("b", 1), ("a", 1), ("b", -1)),)


def test_parser_accepts_bracketed_and_negative_exponents():
    p = parse_presentation("< a, b | (a b)^-2, a^(-3), [a^2, b]^2 >")
    assert p.relators[0] == (("b", -1), ("a", -1), ("b", -1), ("a", -1))
    assert p.relators[1] == (("a", -3),)


def test_parser_errors():
    with pytest.raises(UnknownSymbolError):
        parse_presentation("< a | b >")
    for text in ("< a | a", "a | a >", "< a, | a >", "< a | [a >", "< a | a^x^ >"):
        with pytest.raises(PresentationSyntaxError):
            parse_presentation(text)
    with pytest.raises(ValueError):
        Presentation(("a", "a"), ())
    with pytest.raises(ValueError):
        Presentation(("a",), ((("a", 1), ("a", -1)),))


def test_parse_word_and_format():
    w = parse_word("a^-2 b", ["a", "b"])
    assert w == (("a", -2), ("b", 1))
    assert format_word(w) == "a^-2 b"
    assert format_word(()) == "1"


words = st.lists(st.tuples(st.sampled_from("abc"), st.integers(-5, 5)), max_size=8).map(reduce_word)


@given(st.lists(words.filter(bool), max_size=6))
def test_round_trip(rels):
    p = Presentation(("a", "b", "c"), tuple(rels))
    assert parse_presentation(format_presentation(p)) == p


@given(words)
def test_word_round_trip(w):
    assert parse_word(format_word(w), "abc") == w


# -- library ---------------------------------------------------------------------------


def test_make_presentation_examples():
    p = make_presentation(NonMetacyclic(3))
    assert p.generators == ("a", "b") and len(p.relators) == 6
    q = make_presentation(Metacyclic(2, 2))
    assert set(q.generators) == {"g", "h"} and len(q.relators) == 3
    bj = make_presentation(BJ(2, 1, 0))
    assert bj.generators == ("a", "x")
    assert all(s in ("a", "x") for r in bj.relators for s, _ in r)
    full = make_presentation(BJ(2, 1, 0, reduced=False))
    assert set(full.generators) == set("axvbzuw")


def test_parse_spec():
    assert parse_spec("BJ(3,0,1)") == BJ(3, 0, 1)
    assert parse_spec("G2-simple(2)") == Simple2()
    assert parse_spec("G1(3,2)") == Metacyclic(3, 2)
    with pytest.raises(DomainError):
        parse_spec("BJ(1,0,0)")
    with pytest.raises(ValueError):
        parse_spec("nonsense")


# -- coset enumeration -------------------------------------------------------------------


def test_todd_coxeter_examples():
    assert todd_coxeter(parse_presentation(SIMPLE_TEXT)).count == 16
    assert todd_coxeter(parse_presentation("< g | g^4 >")).count == 4
    assert todd_coxeter(make_presentation(Metacyclic(3, 2))).count == 64


@pytest.mark.parametrize("k, l", list(itertools.product((0, 1), repeat=2)))
def test_bj_r2_orders(k, l):
    assert group_order(make_presentation(BJ(2, k, l))) == 256


def test_reduced_and_full_bj_agree():
    assert group_order(make_presentation(BJ(2, 1, 1, reduced=False))) == 256


def test_subgroup_cosets():
    p = parse_presentation("< a, b | a^3, b^2, (a b)^2 >")
    assert group_order(p) == 6
    assert todd_coxeter(p, [(("a", 1),)]).count == 2
    assert todd_coxeter(p, [(("b", 1),)]).count == 3


def test_infinite_group_hits_cap():
    tab = todd_coxeter(parse_presentation("< a, b | [a, b] >"), cap=500)
    assert tab.status == "capacity-exceeded" and not tab.complete
    assert group_order(parse_presentation("< a | >"), cap=100) is None


def test_cap_from_environment(monkeypatch):
    monkeypatch.setenv("ISOCLASS_COSET_CAP", "123")
    assert default_cap() == 123
    monkeypatch.delenv("ISOCLASS_COSET_CAP")
    assert default_cap() == 1 << 18


def test_unknown_strategy():
    with pytest.raises(ValueError):
        todd_coxeter(parse_presentation("< g | g^2 >"), strategy="magic")


def _family_specs():
    out = [NonMetacyclic(2), Simple2()]
    for e in (3, 4):
        out += [NonMetacyclic(e, k, l) for k in (0, 1) for l in (0, 1)]
    for e in (2, 3, 4):
        out += [Metacyclic(e, f) for f in range(2, e + 1)]
    return out


@pytest.mark.parametrize("spec", _family_specs(), ids=str)
def test_family_orders_match_closure(spec):
    target = 16 if isinstance(spec, Simple2) else cached_cayley(spec).table.order
    pres = make_presentation(spec)
    hlt = todd_coxeter(pres, strategy="relator")
    felsch = todd_coxeter(pres, strategy="coset")
    assert hlt.count == felsch.count == target
    assert hlt.standardize() == felsch.standardize()
    for rel in pres.relators:
        assert all(hlt.act(c, rel) == c for c in range(hlt.count))


@pytest.mark.parametrize("spec", [s for s in _family_specs() if not isinstance(s, Simple2)], ids=str)
def test_relation_soundness(spec):
    fg = cached_cayley(spec)
    pres = make_presentation(spec)
    s, t = fg.gens
    names = ("a", "b") if isinstance(spec, NonMetacyclic) else ("g", "h")
    assignment = dict(zip(names, (s, t)))
    for rel in pres.relators:
        assert evaluate(rel, assignment, fg.table) == fg.table.identity, format_word(rel)


def test_simple_presentation_is_g2_2():
    fg = cached_cayley(NonMetacyclic(2))
    a, b = fg.gens
    for rel in make_presentation(Simple2()).relators:
        assert evaluate(rel, {"a": a, "b": b}, fg.table) == fg.table.identity


# -- BJ isomorphism certificate ------------------------------------------------------------


def test_certificate_examples():
    c = verify_theorem_4_2(2, 0, 0)
    assert c.certified and c.presentation_order == c.family_order == 256
    c = verify_theorem_4_2(2, 1, 1)
    assert c.certified and c.x_square_is_zk
    c = verify_theorem_4_2(3, 0, 1)
    assert c.certified and c.presentation_order == 1024


def test_certificate_reports_cap_overflow():
    c = verify_theorem_4_2(2, 0, 0, cap=50)
    assert c.presentation_order is None and not c.certified


def test_wrong_images_are_rejected(monkeypatch):
    import isoclass.presentations.library as lib

    def broken(r, k, l):
        fg, img = theorem_4_2_images(r, k, l)
        img["x"] = fg.gens[1]
        return fg, img

    monkeypatch.setattr(lib, "theorem_4_2_images", broken)
    with pytest.raises(CertificateError) as exc:
        lib.verify_theorem_4_2(2, 0, 0)
    assert exc.value.relator is not None
