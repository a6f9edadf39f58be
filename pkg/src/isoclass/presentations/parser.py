"""
Reading and writing group presentations.

Grammar::

    presentation := '<' gens '|' [relation (',' relation)*] '>'
    relation     := word ('=' word)*
    word         := '1' | factor+
    factor       := primary ('^' exponent)*
    primary      := SYMBOL | '(' word ')' | '[' word (',' word)+ ']'
    exponent     := ['-'] INT | '(' ['-'] INT ')' | ['-'] primary

``x^y`` with a non-integer exponent is the conjugate ``y^-1 x y``; commutators
are ``[x, y] = x^-1 y^-1 x y`` and nest to the left.  A chain
``w1 = w2 = ... = wk`` contributes the relators ``wi wk^-1`` for ``i < k``.
Symbols after the bar are matched greedily against the declared generator
names, so ``a^2b^2`` reads as ``a^2 b^2``.  ``⟨ ⟩`` may stand in for ``< >``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

Word = tuple[tuple[str, int], ...]


class PresentationSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class UnknownSymbolError(PresentationSyntaxError):
    pass


# -- words ----------------------------------------------------------------------------


def reduce_word(syllables) -> Word:
    """Free reduction: merge adjacent powers of one symbol, drop zero exponents."""
    out: list[list] = []
    for sym, exp in syllables:
        if exp == 0:
            continue
        if out and out[-1][0] == sym:
            out[-1][1] += exp
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([sym, exp])
    return tuple((s, e) for s, e in out)


def word_inverse(w: Word) -> Word:
    return tuple((s, -e) for s, e in reversed(w))


def word_mul(*ws: Word) -> Word:
    return reduce_word(syl for w in ws for syl in w)


def word_power(w: Word, k: int) -> Word:
    if k < 0:
        w, k = word_inverse(w), -k
    return reduce_word(w * k)


def commutator(x: Word, y: Word) -> Word:
    return word_mul(word_inverse(x), word_inverse(y), x, y)


def conjugate(x: Word, y: Word) -> Word:
    return word_mul(word_inverse(y), x, y)


def word_length(w: Word) -> int:
    return sum(abs(e) for _, e in w)


def substitute(w: Word, defs: dict[str, Word]) -> Word:
    return reduce_word(syl for s, e in w
                       for syl in (word_power(defs[s], e) if s in defs else ((s, e),)))


def format_word(w: Word) -> str:
    if not w:
        return "1"
    return " ".join(s if e == 1 else f"{s}^{e}" for s, e in w)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        gens = set(self.generators)
        if len(gens) != len(self.generators):
            raise ValueError("duplicate generator names")
        for r in self.relators:
            for s, _ in r:
                if s not in gens:
                    raise ValueError(f"relator uses undeclared symbol {s!r}")
            if reduce_word(r) != r:
                raise ValueError(f"relator {format_word(r)} is not freely reduced")

    def __str__(self):
        return format_presentation(self)

    def eliminate(self, defs: dict[str, Word]) -> "Presentation":
        """Substitute definitions for generators and drop them.

        ``defs`` is applied in insertion order, so later definitions may refer
        to earlier ones.  Relators that become trivial are discarded.
        """
        resolved: dict[str, Word] = {}
        for name, w in defs.items():
            resolved[name] = substitute(w, resolved)
        gens = tuple(g for g in self.generators if g not in resolved)
        rels = []
        for r in self.relators:
            nr = substitute(r, resolved)
            if nr and nr not in rels:
                rels.append(nr)
        return Presentation(gens, tuple(rels))


def format_presentation(p: Presentation) -> str:
    rels = ", ".join(format_word(r) for r in p.relators)
    return f"< {', '.join(p.generators)} | {rels} >"


# -- parsing ----------------------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT = re.compile(r"\d+")
_PAREN_INT = re.compile(r"\(\s*(-?)\s*(\d+)\s*\)")
_ALIASES = {"⟨": "<", "⟩": ">", "−": "-"}


class _Parser:
    def __init__(self, text: str):
        self.text = "".join(_ALIASES.get(ch, ch) for ch in text)
        self.pos = 0
        self.gens: list[str] = []
        self.by_length: list[str] = []

    # lexing helpers
    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise PresentationSyntaxError(f"expected {ch!r}, found {found!r}", self.pos)
        self.pos += 1

    def integer(self) -> int:
        self.skip()
        mt = _INT.match(self.text, self.pos)
        if not mt:
            raise PresentationSyntaxError("expected an integer", self.pos)
        self.pos = mt.end()
        return int(mt.group())

    def symbol(self) -> str:
        self.skip()
        for g in self.by_length:
            if self.text.startswith(g, self.pos):
                self.pos += len(g)
                return g
        mt = _IDENT.match(self.text, self.pos)
        if mt:
            raise UnknownSymbolError(f"unknown symbol {mt.group()!r}", self.pos)
        raise PresentationSyntaxError(f"unexpected character {self.peek()!r}", self.pos)

    # grammar
    def presentation(self) -> Presentation:
        self.expect("<")
        while True:
            self.skip()
            mt = _IDENT.match(self.text, self.pos)
            if not mt:
                raise PresentationSyntaxError("expected a generator name", self.pos)
            self.gens.append(mt.group())
            self.pos = mt.end()
            if self.peek() == ",":
                self.pos += 1
                continue
            break
        self.expect("|")
        self.by_length = sorted(self.gens, key=len, reverse=True)
        rels: list[Word] = []
        if self.peek() != ">":
            while True:
                rels.extend(self.relation())
                if self.peek() == ",":
                    self.pos += 1
                    continue
                break
        self.expect(">")
        if self.peek():
            raise PresentationSyntaxError("trailing input", self.pos)
        try:
            return Presentation(tuple(self.gens), tuple(r for r in rels if r))
        except ValueError as exc:
            raise PresentationSyntaxError(str(exc), 0) from None

    def relation(self) -> list[Word]:
        chain = [self.word()]
        while self.peek() == "=":
            self.pos += 1
            chain.append(self.word())
        last_inv = word_inverse(chain[-1])
        if len(chain) == 1:
            return [chain[0]]
        return [word_mul(w, last_inv) for w in chain[:-1]]

    def word(self) -> Word:
        factors = []
        while True:
            ch = self.peek()
            if not ch or ch in ",=>|)]":
                break
            factors.append(self.factor())
        if not factors:
            raise PresentationSyntaxError("expected a word", self.pos)
        return word_mul(*factors)

    def factor(self) -> Word:
        base = self.primary()
        while self.peek() == "^":
            self.pos += 1
            kind, val = self.exponent()
            base = word_power(base, val) if kind == "int" else conjugate(base, val)
        return base

    def primary(self) -> Word:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            w = self.word()
            self.expect(")")
            return w
        if ch == "[":
            self.pos += 1
            w = self.word()
            self.expect(",")
            w = commutator(w, self.word())
            while self.peek() == ",":
                self.pos += 1
                w = commutator(w, self.word())
            self.expect("]")
            return w
        if ch == "1":
            self.pos += 1
            return ()
        if ch.isdigit():
            raise PresentationSyntaxError("integers may only appear as exponents", self.pos)
        return ((self.symbol(), 1),)

    def exponent(self) -> tuple[str, object]:
        ch = self.peek()
        if ch == "-" or ch.isdigit():
            sign = 1
            if ch == "-":
                self.pos += 1
                if not self.peek().isdigit():
                    return "word", word_inverse(self.primary())
                sign = -1
            return "int", sign * self.integer()
        if ch == "(":
            mt = _PAREN_INT.match(self.text, self.pos)
            if mt:
                self.pos = mt.end()
                return "int", int(mt.group(2)) * (-1 if mt.group(1) else 1)
        if not ch or ch in ",=>|)]^":
            raise PresentationSyntaxError("missing exponent", self.pos)
        return "word", self.primary()


def parse_presentation(text: str) -> Presentation:
    return _Parser(text).presentation()


def parse_word(text: str, generators) -> Word:
    p = _Parser(text)
    p.gens = list(generators)
    p.by_length = sorted(p.gens, key=len, reverse=True)
    w = p.word()
    if p.peek():
        raise PresentationSyntaxError("trailing input", p.pos)
    return w
