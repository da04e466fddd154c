"""Exact indices of commensurabilities between groups, modules and rings."""

__version__ = "0.1.0"

from .abelian import ABELIAN, AbHom, FgAbGroup, aut_order, hom_certify, ia_abelian
from .correspondence import (
    Commensurability,
    Correspondence,
    EquivalenceWitness,
    certify,
    compose,
    from_isogeny,
    index,
    inverse,
    verify_equivalence,
)
from .errors import CapExceeded, CommensurError, NotIsogeny
from .kernels import BACKEND
from .linalg import IntMatrix

__all__ = [
    "ABELIAN", "AbHom", "BACKEND", "CapExceeded", "Commensurability", "CommensurError",
    "Correspondence", "EquivalenceWitness", "FgAbGroup", "IntMatrix", "NotIsogeny", "aut_order",
    "certify", "compose", "from_isogeny", "hom_certify", "ia_abelian", "index", "inverse",
    "verify_equivalence",
]
