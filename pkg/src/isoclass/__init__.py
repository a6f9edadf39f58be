"""Isobicyclic 2-groups: construction, classification and regular embeddings of K_{n,n}."""

__version__ = "0.1.0"

from .cayley import GroupTable, Subgroup
from .families import Metacyclic, NFElement, NonMetacyclic, nf_multiply, parse_params, to_cayley

__all__ = [
    "GroupTable", "Metacyclic", "NFElement", "NonMetacyclic", "Subgroup", "__version__",
    "nf_multiply", "parse_params", "to_cayley",
]
