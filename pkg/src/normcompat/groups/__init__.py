from .characters import Character, CharTerm
from .descriptors import (GL, SL, SO, FiberProduct, GroupDescriptor, GSp, KernelOf, Product, Sp,
                          UnsupportedPrime, antidiagonal_form, group_from_spec,
                          standard_symplectic_form)
from .embedding import EmbeddingError, EmbeddingMap, Placement, embedding_lie_map, sample_points
from .parabolic import (Cocharacter, LeviSub, MirabolicDescriptor, ParabolicSplit, levi_blocks,
                        lie_algebra, parabolic_split, weight_positions)
from .poly import Poly
from .scheme import BudgetExceeded, Scheme
from .torus import lie_c, torus_differential, torus_quotient


def group_points_mod(g, p, N, budget=10 ** 6):
    """Points of G over Z/p^N as sorted flat residue tuples."""
    g.check_prime(p)
    return Scheme.of_group(g).points(p, N, budget)


__all__ = [
    "Character", "CharTerm", "GroupDescriptor", "GL", "SL", "Sp", "GSp", "SO", "Product",
    "FiberProduct", "KernelOf", "UnsupportedPrime", "group_from_spec",
    "standard_symplectic_form", "antidiagonal_form", "EmbeddingMap", "EmbeddingError",
    "Placement", "embedding_lie_map", "sample_points", "Cocharacter", "LeviSub",
    "MirabolicDescriptor", "ParabolicSplit", "parabolic_split", "levi_blocks", "lie_algebra",
    "weight_positions", "Poly", "Scheme", "BudgetExceeded", "torus_quotient", "lie_c",
    "torus_differential", "group_points_mod",
]
