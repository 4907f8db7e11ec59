"""Exact homology of sphere quotients by finite linear group actions."""

__version__ = "0.1.0"

from .complexes import (
    EMPTY_COMPLEX,
    OrientedChainComplex,
    SimplicialComplex,
    Subdivision,
    barycentric_subdivision,
    chain_complex,
    euler_characteristic,
    full_subcomplex,
    join,
    polygon,
    zero_sphere,
)
from .homology import (
    F2,
    F3,
    F5,
    RATIONALS,
    BettiTable,
    ElementaryDivisors,
    FieldSpec,
    SparseIntMatrix,
    betti,
    rank_mod_p,
    rank_over_q,
    relative_betti,
    smith_normal_form,
)

__all__ = [
    "EMPTY_COMPLEX",
    "OrientedChainComplex",
    "SimplicialComplex",
    "Subdivision",
    "barycentric_subdivision",
    "chain_complex",
    "euler_characteristic",
    "full_subcomplex",
    "join",
    "polygon",
    "zero_sphere",
    "F2",
    "F3",
    "F5",
    "RATIONALS",
    "BettiTable",
    "ElementaryDivisors",
    "FieldSpec",
    "SparseIntMatrix",
    "betti",
    "rank_mod_p",
    "rank_over_q",
    "relative_betti",
    "smith_normal_form",
    "__version__",
]
