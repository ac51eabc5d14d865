"""The Cartesian (Mackey) square of the coset model.

For U, U' inside V and a class c at U', the two sides are

    pullback_{V->U} pushforward_{U'->V} c
    sum over U'-orbits gamma on V/U of  sum over u' in U'/K_gamma of  x u' gamma U,

with K_gamma = U' ∩ gamma U gamma^{-1}. The orbits come from a breadth-first
search over generators of U'; the U'/K_gamma representatives come from a
separate search that decides membership in K_gamma directly.
"""

import random
from dataclasses import dataclass, field

from .. import residue as R
from ..levels import LevelDescriptor, generators_residue
from .cosets import Coset, CompactClass, _Index, pullback, pushforward, reps_for


@dataclass
class CartesianResult:
    ok: bool
    classes: int
    index: int
    orbits: int
    witness: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def full_level(group, eta, p):
    """G(Z_p) itself as a level (all bounds zero)."""
    return LevelDescriptor(group, eta, 0, "custom", None, p, {}, 0)


def random_element(group, eta, p, prec, rng, length=12):
    """A random word in topological generators of G(Z_p), as residues mod p^prec."""
    gens = generators_residue(full_level(group, eta, p), prec)
    n, m = group.n, p ** prec
    x = R.identity(n)
    for _ in range(length):
        x = R.mul(x, rng.choice(gens), n, m)
    return x


def random_class(level, prec, rng, size=3, coeff=5):
    terms = []
    for _ in range(size):
        k = random_element(level.group, level.eta, level.p, prec, rng)
        terms.append((Coset(k, (0,) * level.n, level, prec), rng.choice(
            [c for c in range(-coeff, coeff + 1) if c])))
    return CompactClass(level, terms)


def _orbit_gammas(V, U, Up, reps, prec):
    """One representative per U'-orbit on V/U."""
    cosets = [Coset(r, (0,) * V.n, U, prec) for r in reps]
    index = _Index()
    for i, c in enumerate(cosets):
        index.add(c, i)
    gens = generators_residue(Up, prec)
    orbit_of = [None] * len(cosets)
    gammas = []
    for start in range(len(cosets)):
        if orbit_of[start] is not None:
            continue
        label = len(gammas)
        gammas.append(reps[start])
        orbit_of[start] = label
        queue = [start]
        while queue:
            i = queue.pop()
            for g in gens:
                j = index.find(cosets[i].left(g))
                if j is None:
                    raise RuntimeError("generator of U' moved a coset outside V/U")
                if orbit_of[j] is None:
                    orbit_of[j] = label
                    queue.append(j)
    sizes = [orbit_of.count(k) for k in range(len(gammas))]
    return gammas, sizes


def _stabilizer_reps(U, Up, gamma, prec):
    """Representatives of U'/K_gamma by membership gamma^{-1} w^{-1} w' gamma in U."""
    n, p = U.n, U.p
    m = p ** prec
    gi = R.inv(gamma, n, p, m)
    gens = generators_residue(Up, prec)
    found = [R.identity(n)]
    invs = [R.identity(n)]
    i = 0
    while i < len(found):
        w = found[i]
        i += 1
        for g in gens:
            cand = R.mul(g, w, n, m)
            for wi in invs:
                y = R.prod((gi, wi, cand, gamma), n, m)
                if U.contains_residue(y, prec):
                    break
            else:
                found.append(cand)
                invs.append(R.inv(cand, n, p, m))
    return found


def cartesian_check(U, Up, V, samples=20, seed=0, classes=None, drop_gamma=None,
                    budget=10 ** 5):
    """Check the Cartesian square on random classes at U'.

    ``drop_gamma`` removes one orbit representative from the right-hand side
    (fault injection); the check must then fail.
    """
    for lv in (U, Up, V):
        if lv.shift:
            raise ValueError("cartesian_check takes unshifted levels")
    if not U.is_subgroup_of(V) or not Up.is_subgroup_of(V):
        raise ValueError("U and U' must lie in V")
    prec = max(U.depth, Up.depth, V.depth, 1) + 1
    reps = reps_for(V, U, prec, budget)
    gammas, sizes = _orbit_gammas(V, U, Up, reps, prec)
    if drop_gamma is not None:
        gammas = [g for i, g in enumerate(gammas) if i != drop_gamma % len(gammas)]
    translations = []
    n, m = V.n, V.p ** prec
    for gamma in gammas:
        for w in _stabilizer_reps(U, Up, gamma, prec):
            translations.append(R.mul(w, gamma, n, m))
    rng = random.Random(seed)
    if classes is None:
        classes = [random_class(Up, prec, rng) for _ in range(samples)]
    for idx, c in enumerate(classes):
        lhs = pullback(pushforward(c, None, V), U, reps=(reps, prec))
        rhs = CompactClass(U, [(x.translate_residue(t, U, prec), a)
                               for x, a in c.terms for t in translations], c.modulus)
        if lhs != rhs:
            diff = lhs.difference(rhs)
            return CartesianResult(False, idx + 1, len(reps), len(gammas), {
                "class": idx, "lhs_mass": lhs.mass, "rhs_mass": rhs.mass,
                "difference": [(list(x.k), a) for x, a in diff[:5]]})
    return CartesianResult(True, len(classes), len(reps), len(gammas),
                           {"orbit_sizes": sizes})
