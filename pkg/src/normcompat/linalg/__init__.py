from .echelon import ModPSolver, nullspace, rank, rank_mod_p, rref, rref_mod_p, rref_rank
from .lattice import (integer_kernel, integer_left_kernel, integral_degeneracy_primes,
                      prime_divisors, saturate, smith_invariants)
from .matrix import ExactMatrix, NotInvertible, RingMismatch, as_matrix
from .rational import Rational, is_p_integral, reduce_mod, to_rational, vp, vp_int
from .subspace import DimensionMismatch, Subspace, subspace_ops

__all__ = [
    "ExactMatrix", "NotInvertible", "RingMismatch", "as_matrix",
    "Rational", "to_rational", "vp", "vp_int", "is_p_integral", "reduce_mod",
    "rref", "rref_rank", "rank", "nullspace", "rref_mod_p", "rank_mod_p", "ModPSolver",
    "Subspace", "subspace_ops", "DimensionMismatch",
    "smith_invariants", "integer_kernel", "integer_left_kernel", "saturate",
    "integral_degeneracy_primes", "prime_divisors",
]
