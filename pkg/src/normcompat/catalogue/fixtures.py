"""Matrix models of the example pairs, built in code.

The shipped ``data/*.config`` files are generated from these builders
(``python -m normcompat.catalogue.fixtures``); points u not given in closed
form were found once with :func:`normcompat.spherical.find_u` and frozen.
"""

from ..groups import (GL, GSp, SO, Character, Cocharacter, EmbeddingMap, FiberProduct,
                      LeviSub, MirabolicDescriptor, Placement, Product, antidiagonal_form,
                      standard_symplectic_form)
from ..linalg import ExactMatrix
from ..spherical import PairConfig, find_u


def _det(idx, e=1):
    return Character.det(idx, e)


def _block_diag(*blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    o = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[o + i][o + j] = x
        o += len(b)
    return out


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _gl2_fiber():
    return FiberProduct(GL(2), GL(2), _det([0, 1]), _det([0, 1]))


def modular_symbol():
    h = GL(1)
    g = FiberProduct(GL(1), GL(2), _det([0]), _det([0, 1]))
    emb = EmbeddingMap(h, g, [Placement.block([0], [0]), Placement.block([1], [0]),
                              Placement.const(2)])
    u = ExactMatrix(_block_diag([[1]], [[1, 1], [0, 1]]))
    return PairConfig(h, g, emb, Cocharacter((1, 1, 0)),
                      MirabolicDescriptor(h, Cocharacter((0,)), LeviSub.full()),
                      LeviSub.trivial(), u, 3, "modular-symbol",
                      {"open": True, "stab_dim": 0, "condition_b": True})


def diag_gln(n):
    """GL_n into GL_{n+1} x_{G_m} GL_n by g -> (g + 1, g), Q_H^0 = H, Borel Q_G."""
    h = GL(n)
    g = FiberProduct(GL(n + 1), GL(n), _det(range(n + 1)), _det(range(n)))
    idx = list(range(n))
    emb = EmbeddingMap(h, g, [Placement.block(idx, idx), Placement.const(n),
                              Placement.block([n + 1 + i for i in idx], idx)])
    eta = tuple(range(n, -1, -1)) + tuple(range(n, 0, -1))
    cfg = PairConfig(h, g, emb, Cocharacter(eta),
                     MirabolicDescriptor(h, Cocharacter((0,) * n), LeviSub.full()),
                     LeviSub.trivial(), None, 3, f"diag-gl{n}",
                     {"open": True, "stab_dim": 0, "condition_b": True})
    return cfg


def rankin_selberg():
    h = GL(2)
    g = _gl2_fiber()
    emb = EmbeddingMap(h, g, [Placement.block([0, 1], [0, 1]), Placement.block([2, 3], [0, 1])])
    u = ExactMatrix(_block_diag(_eye(2), [[1, 1], [0, 1]]))
    mir = MirabolicDescriptor(h, Cocharacter((1, 0)), LeviSub.kernel([_det([1])]))
    return PairConfig(h, g, emb, Cocharacter((1, 0, 1, 0)), mir, LeviSub.trivial(), u, 2,
                      "rankin-selberg", {"open": True, "stab_dim": 0, "condition_b": True})


def gl2n_shalika(n):
    h = Product([GL(n), GL(n)])
    g = GL(2 * n)
    a, b = list(range(n)), list(range(n, 2 * n))
    emb = EmbeddingMap(h, g, [Placement.block(a, a), Placement.block(b, b)])
    u = [[int(i == j) for j in range(2 * n)] for i in range(2 * n)]
    for i in range(n):
        u[i][n + i] = 1
    levi = LeviSub.kernel([_det(a) * _det(b, -1)])
    return PairConfig(h, g, emb, Cocharacter((1,) * n + (0,) * n),
                      MirabolicDescriptor(h, Cocharacter((0,) * (2 * n)), LeviSub.full()),
                      levi, ExactMatrix(u), 2, f"gl2n-shalika-{n}",
                      {"open": True, "stab_dim": n * n, "condition_b": True,
                       "stabilizer": "{(X, X)}", "vanishing_character": "det(h1)/det(h2)"})


def gl2n_borel(n):
    h = Product([GL(n), GL(n)])
    g = GL(2 * n)
    a, b = list(range(n)), list(range(n, 2 * n))
    emb = EmbeddingMap(h, g, [Placement.block(a, a), Placement.block(b, b)])
    u = [[int(i == j) for j in range(2 * n)] for i in range(2 * n)]
    for i in range(n):
        u[i][2 * n - 1 - i] = 1
    chars = [_det([i]) * _det([2 * n - 1 - i], -1) for i in range(n)]
    return PairConfig(h, g, emb, Cocharacter(tuple(range(2 * n - 1, -1, -1))),
                      MirabolicDescriptor(h, Cocharacter((0,) * (2 * n)), LeviSub.full()),
                      LeviSub.kernel(chars), ExactMatrix(u), 2, f"gl2n-borel-{n}",
                      {"open": True, "stab_dim": n, "condition_b": True,
                       "stabilizer": "diag(x_1..x_n, x_n..x_1)"})


def _gsp4_embedding_places():
    # A acts on span(e0, e3), B on span(e1, e2): an orthogonal decomposition for J.
    return [Placement.block([0, 3], [0, 1]), Placement.block([1, 2], [2, 3])]


def gsp4_siegel():
    h = _gl2_fiber()
    g = GSp(standard_symplectic_form(2))
    emb = EmbeddingMap(h, g, _gsp4_embedding_places())
    mir = MirabolicDescriptor(h, Cocharacter((1, 0, 1, 0)),
                              LeviSub.kernel([_det([1]), _det([3])]))
    return PairConfig(h, g, emb, Cocharacter((1, 1, 0, 0)), mir, LeviSub.trivial(), None, 2,
                      "gsp4-siegel", {"open": True, "stab_dim": 0, "condition_b": True})


def gsp4_gl2():
    h = _gl2_fiber()
    J = standard_symplectic_form(2)
    gsp = GSp(J)
    g = FiberProduct(gsp, GL(2), gsp.similitude(), _det([0, 1]))
    emb = EmbeddingMap(h, g, _gsp4_embedding_places() + [Placement.block([4, 5], [2, 3])])
    # (2,0,1,1) rather than (1,0,0,0): same parabolic, but a cocharacter of the fiber product.
    mir = MirabolicDescriptor(h, Cocharacter((2, 0, 1, 1)), LeviSub.kernel([_det([1])]))
    return PairConfig(h, g, emb, Cocharacter((3, 2, 1, 0, 2, 1)), mir, LeviSub.trivial(),
                      None, 2, "gsp4-gl2", {"open": True, "stab_dim": 0, "condition_b": True})


def gl3_gl1():
    h = Product([GL(2), GL(1)])
    g = Product([GL(3), GL(1)])
    emb = EmbeddingMap(h, g, [Placement.block([0, 1], [0, 1]), Placement.block([2], [2]),
                              Placement.block([3], [2])])
    mir = MirabolicDescriptor(h, Cocharacter((1, 0, 0)), LeviSub.kernel([_det([1])]))
    return PairConfig(h, g, emb, Cocharacter((2, 1, 0, 0)), mir, LeviSub.trivial(), None, 2,
                      "gl3-gl1", {"open": True, "stab_dim": 0, "condition_b": True})


def _gsp6_h():
    inner = _gl2_fiber()
    return FiberProduct(inner, GL(2), _det([0, 1]), _det([0, 1]))


def _gsp6_pair(eta, name, expected):
    h = _gsp6_h()
    g = GSp(standard_symplectic_form(3))
    emb = EmbeddingMap(h, g, [Placement.block([0, 5], [0, 1]), Placement.block([1, 4], [2, 3]),
                              Placement.block([2, 3], [4, 5])])
    mir = MirabolicDescriptor(h, Cocharacter((2, 0, 1, 1, 1, 1)), LeviSub.kernel([_det([1])]))
    return PairConfig(h, g, emb, Cocharacter(eta), mir, LeviSub.trivial(), None, 2, name,
                      expected)


def gsp6_1221():
    return _gsp6_pair((3, 2, 2, 1, 1, 0), "gsp6-1221",
                      {"open": True, "stab_dim": 0, "condition_b": True})


def gsp6_borel():
    return _gsp6_pair((5, 4, 3, 2, 1, 0), "gsp6-borel",
                      {"open": False, "dim_q_h": 8, "flag_dim": 9})


def so_pair():
    """SO(V) into SO(V) x SO(V + e), dim V = 2, split forms; p odd."""
    h = SO(antidiagonal_form(2))
    g = Product([SO(antidiagonal_form(2)), SO(antidiagonal_form(3))])
    emb = EmbeddingMap(h, g, [Placement.block([0, 1], [0, 1]), Placement.block([2, 4], [0, 1]),
                              Placement.const(3)])
    return PairConfig(h, g, emb, Cocharacter((0, 0, 1, 0, -1)),
                      MirabolicDescriptor(h, Cocharacter((0, 0)), LeviSub.full()),
                      LeviSub.trivial(), None, 3, "so-pair",
                      {"open": True, "stab_dim": 0, "condition_b": True})


BUILDERS = {
    "modular-symbol": modular_symbol,
    "rankin-selberg": rankin_selberg,
    "gl2n-shalika-1": lambda: gl2n_shalika(1),
    "gl2n-shalika-2": lambda: gl2n_shalika(2),
    "gl2n-borel-1": lambda: gl2n_borel(1),
    "gl2n-borel-2": lambda: gl2n_borel(2),
    "gsp4-siegel": gsp4_siegel,
    "gsp4-gl2": gsp4_gl2,
    "gl3-gl1": gl3_gl1,
    "gsp6-1221": gsp6_1221,
    "gsp6-borel": gsp6_borel,
    "diag-gl1": lambda: diag_gln(1),
    "diag-gl2": lambda: diag_gln(2),
    "diag-gl3": lambda: diag_gln(3),
    "so-pair": so_pair,
}


def complete(cfg, p=None, strategy="enumerate", budget=5000):
    """Fill in u by a deterministic search when the builder leaves it open."""
    if cfg.u is not None:
        return cfg
    p = p or cfg.p or 3
    res = find_u(cfg, strategy, p=p, budget=budget, integral=True)
    if res.u is None:
        return cfg
    return cfg.with_u(res.u, cfg.p)


# Norm-relation simulations that take minutes rather than seconds.
SLOW = {"gsp4-siegel", "gl3-gl1", "gsp4-gl2", "diag-gl2", "diag-gl3", "gsp6-1221", "gl2n-borel-2"}
R_MAX = {"gsp4-siegel": 1}


def write_data(directory=None):
    import pathlib

    from ..config import dumps, pair_to_dict
    out = pathlib.Path(directory or pathlib.Path(__file__).parent / "data")
    out.mkdir(parents=True, exist_ok=True)
    for name, build in BUILDERS.items():
        cfg = complete(build())
        r_max = R_MAX.get(name, 2 if cfg.g.n <= 4 else 1)
        d = pair_to_dict(cfg, r_max=r_max, seed=0, slow=name in SLOW,
                         budgets={"enumeration": 10 ** 6, "search": 2000})
        (out / f"{name}.config").write_text(dumps(d), encoding="utf-8")


if __name__ == "__main__":
    write_data()
