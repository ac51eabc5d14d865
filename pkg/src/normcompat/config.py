"""Pair/run configuration files: strict JSON, matrices as arrays of integer strings.

Schema (``normcompat-pair/1``)::

    {
      "schema": "normcompat-pair/1",
      "name": str, "description": str,
      "h": group, "g": group,                    # see groups.group_from_spec
      "embedding": [placement, ...],            # block / char / const placements
      "eta_g": [int, ...],
      "mirabolic_h": {"eta": [int, ...], "levi_sub": levi},
      "levi_sub_g": levi,                       # {"kind": trivial|full|kernel, "characters": [...]}
      "u": [[str, ...], ...] | null,
      "p": int, "r_max": int, "depth": int | null, "seed": int,
      "budgets": {"enumeration": int, "search": int},
      "slow": bool,                             # simulate-norm needs --extended
      "expected": {...}                         # prose claims kept as golden values
    }
"""

import hashlib
import json
import re
from dataclasses import dataclass, field

from .groups import (Cocharacter, EmbeddingMap, LeviSub, MirabolicDescriptor, Placement,
                     group_from_spec)
from .linalg import ExactMatrix
from .spherical import PairConfig

SCHEMA = "normcompat-pair/1"
_INT = re.compile(r"^-?[0-9]+$")
_REQUIRED = ("h", "g", "embedding", "eta_g", "mirabolic_h", "levi_sub_g")
_KNOWN = set(_REQUIRED) | {"schema", "name", "description", "u", "p", "r_max", "depth", "seed",
                           "budgets", "expected", "notes", "slow"}


class ConfigError(ValueError):
    def __init__(self, where, message):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass
class RunConfig:
    pair: PairConfig
    p: int
    r_max: int = 1
    depth_override: int = None
    budgets: dict = field(default_factory=lambda: {"enumeration": 10 ** 6, "search": 2000})
    seed: int = 0
    expected: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)
    digest: str = ""
    slow: bool = False


def _is_prime(p):
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def _matrix(value, where):
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise ConfigError(where, "expected a non-empty array of rows")
    n = len(value[0])
    out = []
    for i, row in enumerate(value):
        if len(row) != n:
            raise ConfigError(f"{where}[{i}]", "ragged matrix row")
        for j, x in enumerate(row):
            if not isinstance(x, str) or not _INT.match(x):
                raise ConfigError(f"{where}[{i}][{j}]", f"expected an integer string, got {x!r}")
        out.append([int(x) for x in row])
    return out


def _stringify(obj):
    """Forms and matrices inside specs are written as integer strings."""
    if isinstance(obj, dict):
        return {k: (_str_matrix(v) if k == "form" else _stringify(v)) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_stringify(v) for v in obj]
    return obj


def _str_matrix(m):
    return [[str(int(x)) for x in row] for row in m]


def _check_forms(obj, where):
    if isinstance(obj, dict):
        for k, v in obj.items():
            if k == "form":
                _matrix(v, f"{where}.form")
            else:
                _check_forms(v, f"{where}.{k}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _check_forms(v, f"{where}[{i}]")


def config_hash(raw):
    text = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def pair_from_dict(d, check_embedding=True):
    if not isinstance(d, dict):
        raise ConfigError("$", "top level must be an object")
    if d.get("schema", SCHEMA) != SCHEMA:
        raise ConfigError("$.schema", f"unsupported schema {d.get('schema')!r}")
    for k in _REQUIRED:
        if k not in d:
            raise ConfigError(f"$.{k}", "missing required field")
    for k in d:
        if k not in _KNOWN:
            raise ConfigError(f"$.{k}", "unknown field")
    for k in ("h", "g"):
        _check_forms(d[k], f"$.{k}")
        try:
            d_group = group_from_spec(_intify(d[k]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"$.{k}", f"bad group spec ({exc})") from None
        if k == "h":
            h = d_group
        else:
            g = d_group
    try:
        places = [Placement.from_spec(_intify(s), h) for s in d["embedding"]]
        emb = EmbeddingMap(h, g, places, check=check_embedding)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("$.embedding", str(exc)) from None
    eta = d["eta_g"]
    if not isinstance(eta, list) or not all(isinstance(x, int) for x in eta):
        raise ConfigError("$.eta_g", "expected an array of integers")
    try:
        eta_g = Cocharacter(eta)
        eta_g.check(g)
    except ValueError as exc:
        raise ConfigError("$.eta_g", str(exc)) from None
    mh = d["mirabolic_h"]
    try:
        mirab = MirabolicDescriptor(h, Cocharacter(mh["eta"]),
                                    LeviSub.from_spec(_intify(mh["levi_sub"]), h))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("$.mirabolic_h", str(exc)) from None
    try:
        levi_g = LeviSub.from_spec(_intify(d["levi_sub_g"]), g)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("$.levi_sub_g", str(exc)) from None
    u = None
    if d.get("u") is not None:
        u = ExactMatrix(_matrix(d["u"], "$.u"))
        if u.rows != g.n or u.cols != g.n:
            raise ConfigError("$.u", f"expected a {g.n}x{g.n} matrix")
    p = d.get("p")
    if p is not None and (not isinstance(p, int) or not _is_prime(p)):
        raise ConfigError("$.p", "expected a prime")
    try:
        return PairConfig(h, g, emb, eta_g, mirab, levi_g, u, p, d.get("name", ""),
                          dict(d.get("expected", {})))
    except ValueError as exc:
        raise ConfigError("$.u", str(exc)) from None


def _intify(obj):
    """Integer strings back to ints inside specs (forms)."""
    if isinstance(obj, dict):
        return {k: _intify(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_intify(v) for v in obj]
    if isinstance(obj, str) and _INT.match(obj):
        return int(obj)
    return obj


def run_from_dict(d, p=None, r_max=None, depth=None, seed=None):
    pair = pair_from_dict(d)
    budgets = {"enumeration": 10 ** 6, "search": 2000}
    for k, v in (d.get("budgets") or {}).items():
        if k not in budgets:
            raise ConfigError(f"$.budgets.{k}", "unknown budget")
        if not isinstance(v, int) or v <= 0:
            raise ConfigError(f"$.budgets.{k}", "budgets must be positive integers")
        budgets[k] = v
    if not isinstance(d.get("slow", False), bool):
        raise ConfigError("$.slow", "expected a boolean")
    pp = p if p is not None else d.get("p")
    if pp is None or not _is_prime(pp):
        raise ConfigError("$.p", "a prime p is required")
    rm = r_max if r_max is not None else d.get("r_max", 1)
    if not isinstance(rm, int) or rm < 1:
        raise ConfigError("$.r_max", "expected a positive integer")
    if pair.u is not None:
        try:
            from .spherical import check_u
            check_u(pair.g, pair.u, pp)
        except ValueError as exc:
            raise ConfigError("$.u", str(exc)) from None
    pair.p = pp
    return RunConfig(pair, pp, rm, depth if depth is not None else d.get("depth"), budgets,
                     seed if seed is not None else d.get("seed", 0), dict(d.get("expected", {})),
                     d, config_hash(d), bool(d.get("slow", False)))


def parse_text(text, source="<config>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}", exc.msg) from None


def load_run(path, **overrides):
    with open(path, encoding="utf-8") as fh:
        raw = parse_text(fh.read(), str(path))
    return run_from_dict(raw, **overrides)


def load_pair(path):
    return load_run(path).pair


def pair_to_dict(cfg, **extra):
    d = {
        "schema": SCHEMA,
        "name": cfg.name,
        "h": _stringify(cfg.h.to_spec()),
        "g": _stringify(cfg.g.to_spec()),
        "embedding": _stringify(cfg.emb.to_spec()),
        "eta_g": list(cfg.eta_g.eta),
        "mirabolic_h": _stringify(cfg.mirab_h.to_spec()),
        "levi_sub_g": _stringify(cfg.levi_sub_g.to_spec()),
        "u": None if cfg.u is None else [[_int_str(x) for x in row] for row in cfg.u.rows_list()],
    }
    if cfg.p is not None:
        d["p"] = cfg.p
    if cfg.meta:
        d["expected"] = cfg.meta
    d.update(extra)
    return d


def _int_str(x):
    if getattr(x, "denominator", 1) != 1:
        raise ValueError("u must have integer entries to be written")
    return str(int(x))


def dumps(d):
    return json.dumps(d, indent=2, sort_keys=True) + "\n"
