from .cosets import (Coset, CompactClass, ContainmentError, NormalFormError, check_containment,
                     index_of, pullback, pushforward, reps_for)

__all__ = ["Coset", "CompactClass", "ContainmentError", "NormalFormError", "check_containment",
           "index_of", "pullback", "pushforward", "reps_for"]
