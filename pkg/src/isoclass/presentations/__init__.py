from .library import (BJ, Simple2, Theorem42Certificate, evaluate, make_presentation,
                      parse_spec, verify_theorem_4_2)
from .parser import (Presentation, PresentationSyntaxError, UnknownSymbolError, Word,
                     format_presentation, format_word, parse_presentation, parse_word)
from .todd_coxeter import CosetTable, default_cap, group_order, todd_coxeter

__all__ = [
    "BJ", "CosetTable", "Presentation", "PresentationSyntaxError", "Simple2",
    "Theorem42Certificate", "UnknownSymbolError", "Word", "default_cap", "evaluate",
    "format_presentation", "format_word", "group_order", "make_presentation",
    "parse_presentation", "parse_spec", "parse_word", "todd_coxeter", "verify_theorem_4_2",
]
