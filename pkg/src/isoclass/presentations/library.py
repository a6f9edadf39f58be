"""Presentations of the isobicyclic families and the Berkovich-Janko groups."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from ..cayley import GroupTable
from ..errors import CertificateError, DomainError
from ..families import Metacyclic, NonMetacyclic, parse_params, to_cayley
from .parser import Presentation, Word, format_word, parse_presentation
from .todd_coxeter import todd_coxeter


@dataclass(frozen=True)
class Simple2:
    """``G2(2;0,0)`` through its short presentation."""

    def __str__(self):
        return "G2-simple(2)"


@dataclass(frozen=True)
class BJ:
    """Berkovich-Janko group with ``x^2 = z^k`` and ``w = z^l``."""

    r: int
    k: int
    l: int
    reduced: bool = True

    def __post_init__(self):
        if self.r < 2 or self.k not in (0, 1) or self.l not in (0, 1):
            raise DomainError(f"BJ(r,k,l) needs r >= 2 and k, l in {{0, 1}}, got {self}")

    def __str__(self):
        return f"BJ({self.r},{self.k},{self.l})"


PresentationSpec = Union[Metacyclic, NonMetacyclic, Simple2, BJ]

_BJ_RE = re.compile(r"^\s*BJ\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_SIMPLE_RE = re.compile(r"^\s*G2-simple\s*\(\s*2\s*\)\s*$")


def parse_spec(text: str) -> PresentationSpec:
    if _SIMPLE_RE.match(text):
        return Simple2()
    mt = _BJ_RE.match(text)
    if mt:
        return BJ(*(int(x) for x in mt.groups()))
    return parse_params(text)


def _g1_text(e: int, f: int) -> str:
    n = 1 << e
    return f"< h, g | h^{n} = g^{n} = 1, h^g = h^{1 + (1 << f)} >"


def _g2_text(e: int, k: int, l: int) -> str:
    n, m = 1 << e, 1 << (e - 1)
    z = f"(a^{m} b^{m})"
    return (f"< a, b | a^{n} = b^{n} = [b^2, a^2] = 1, [b, a] = a^2 b^-2 {z}^{k}, "
            f"(b^2)^a = b^-2 {z}^{l}, (a^2)^b = a^-2 {z}^{l} >")


SIMPLE_TEXT = "< a, b | a^4 = b^4 = [a^2, b] = [b^2, a] = 1, [b, a] = a^2 b^2 >"


def _bj_text(r: int, k: int, l: int) -> str:
    return (f"< a, x, v, b, z, u, w | a^{1 << (r + 2)} = 1, [a, x] = v, [v, a] = b, "
            f"v^{1 << (r + 1)} = b^{1 << r} = [v, b] = 1, v^{1 << r} = z, "
            f"b^{1 << (r - 1)} = u, x^2 = z^{k}, b^x = b^-1, v^x = v^-1, b^a = b^-1, "
            f"a^4 = v^-2 b^-1 w, w = z^{l} >")


def bj_definitions(r: int, l: int) -> dict[str, Word]:
    """The auxiliary symbols of the BJ presentation as words, in dependency order."""
    return {
        "v": (("a", -1), ("x", -1), ("a", 1), ("x", 1)),
        "b": (("v", -1), ("a", -1), ("v", 1), ("a", 1)),
        "z": (("v", 1 << r),),
        "u": (("b", 1 << (r - 1)),),
        "w": (("z", l),) if l else (),
    }


def make_presentation(spec: PresentationSpec | str) -> Presentation:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    if isinstance(spec, Metacyclic):
        return parse_presentation(_g1_text(spec.e, spec.f))
    if isinstance(spec, NonMetacyclic):
        return parse_presentation(_g2_text(spec.e, spec.k, spec.l))
    if isinstance(spec, Simple2):
        return parse_presentation(SIMPLE_TEXT)
    if isinstance(spec, BJ):
        full = parse_presentation(_bj_text(spec.r, spec.k, spec.l))
        if not spec.reduced:
            return full
        return full.eliminate(bj_definitions(spec.r, spec.l))
    raise DomainError(f"unsupported presentation spec {spec!r}")


def evaluate(w: Word, assignment: dict[str, int], g: GroupTable) -> int:
    """Value of a word in ``g`` with generators sent to the given elements."""
    r = g.identity
    for s, e in w:
        r = int(g.mul[r, g.power(assignment[s], e)])
    return r


@dataclass
class Theorem42Certificate:
    r: int
    k: int
    l: int
    family_order: int
    presentation_order: int | None
    generated_order: int
    relators_checked: int
    consequences: dict[str, bool] = field(default_factory=dict)
    x_square_is_zk: bool = False

    @property
    def e(self) -> int:
        return self.r + 2

    @property
    def certified(self) -> bool:
        return (self.presentation_order == self.family_order == self.generated_order == 1 << (2 * self.e)
                and all(self.consequences.values()) and self.x_square_is_zk)


def theorem_4_2_images(r: int, k: int, l: int):
    """Family group G2(r+2;k,l) and the images of the BJ symbols in it."""
    fg = to_cayley(NonMetacyclic(r + 2, k, l))
    g = fg.table
    a1, b1 = fg.gens
    m = fg.params.m
    z1 = g.product(g.power(a1, m), g.power(b1, m))
    img = {
        "a": a1,
        "x": g.product(g.inverse(a1), b1),
        "v": g.product(g.power(a1, -2), g.power(b1, 2), g.power(z1, k)),
        "b": g.product(g.power(b1, -4), g.power(z1, l)),
        "z": z1,
        "u": g.power(b1, m),
        "w": g.power(z1, l),
    }
    return fg, img


def verify_theorem_4_2(r: int, k: int, l: int, cap: int | None = None) -> Theorem42Certificate:
    """Certify ``BJ(r,k,l) ≅ G2(r+2;k,l)`` via ``a -> a1``, ``x -> a1^-1 b1``.

    Every BJ relator must hold on the images (else :class:`CertificateError`),
    the images of a and x must generate, and coset enumeration must give the
    BJ group the same order.
    """
    spec = BJ(r, k, l)
    fg, img = theorem_4_2_images(r, k, l)
    g = fg.table
    full = make_presentation(BJ(r, k, l, reduced=False))
    for rel in full.relators:
        if evaluate(rel, img, g) != g.identity:
            raise CertificateError(f"relator {format_word(rel)} fails on the images", rel)
    x, a, v, b = img["x"], img["a"], img["v"], img["b"]
    consequences = {
        "v^a = v b": g.conjugate(v, a) == g.product(v, b),
        "x^a = x v^-1": g.conjugate(x, a) == g.product(x, g.inverse(v)),
    }
    generated = g.generate([img["a"], img["x"]]).order
    tab = todd_coxeter(make_presentation(spec), cap=cap)
    return Theorem42Certificate(
        r=r, k=k, l=l,
        family_order=g.order,
        presentation_order=tab.count if tab.complete else None,
        generated_order=generated,
        relators_checked=len(full.relators),
        consequences=consequences,
        x_square_is_zk=g.power(x, 2) == g.power(img["z"], k),
    )
