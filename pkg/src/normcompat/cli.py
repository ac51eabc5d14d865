"""Command-line entry point: ``normcompat <command> [config] [options]``.

Every command prints one report (JSON by default, sorted keys, no timings,
so a rerun with the same config and seed is byte-identical). Exit codes:
0 everything passed, 1 a mathematical check failed, 2 something was skipped
(budget, hypotheses unmet, slow case without --extended), 64 usage or parse
error.
"""

import argparse
import json
import sys
import warnings

from . import __version__
from .config import ConfigError, dumps, load_run, pair_to_dict

EXIT_PASS, EXIT_FAIL, EXIT_SKIP, EXIT_USAGE = 0, 1, 2, 64
STATUSES = ("pass", "fail", "skipped-budget", "hypotheses-unmet")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _record(name, status, **data):
    assert status in STATUSES, status
    return {"name": name, "status": status, "data": data}


def _exit_code(records):
    statuses = {r["status"] for r in records}
    if "fail" in statuses:
        return EXIT_FAIL
    if statuses - {"pass"}:
        return EXIT_SKIP
    return EXIT_PASS


def _report(command, records, run=None, extra=None):
    out = {"tool": "normcompat", "version": __version__, "command": command,
           "records": records, "exit_code": _exit_code(records)}
    out["status"] = {EXIT_PASS: "pass", EXIT_FAIL: "fail"}.get(out["exit_code"], "skipped")
    if run is not None:
        out["config"] = {"name": run.raw.get("name", ""), "sha256": run.digest, "p": run.p,
                         "r_max": run.r_max, "seed": run.seed}
    if extra:
        out.update(extra)
    return out


def _budget(args, run):
    return args.budget if args.budget is not None else run.budgets["enumeration"]


def _load(args):
    return load_run(args.config, p=args.p, r_max=args.rmax, depth=args.depth, seed=args.seed)


# -- commands ----------------------------------------------------------------

def _dimension_gap(cfg):
    from .groups import parabolic_split
    split = parabolic_split(cfg.g, cfg.eta_g)
    flag = split.lie_g.dim - split.lie_qbar.dim
    return cfg.mirab_h.lie.dim, flag


def cmd_check_pair(args):
    from .spherical import check_condition_b, check_open_orbit, find_u, torus_image
    run = _load(args)
    cfg, p = run.pair, run.p
    budget = _budget(args, run)
    records = []
    if cfg.u is None:
        dim_qh, flag = _dimension_gap(cfg)
        if dim_qh < flag:
            records.append(_record("open_orbit", "fail", open=False, dim_q_h=dim_qh,
                                   flag_dim=flag, reason="dimension obstruction"))
            return _report("check-pair", records, run)
        found = find_u(cfg, p=p, budget=run.budgets["search"], seed=run.seed, integral=True)
        if found.status != "found":
            records.append(_record("open_orbit", "skipped-budget", reason=found.reason))
            return _report("check-pair", records, run)
        cfg = cfg.with_u(found.u, p)
    rep = check_open_orbit(cfg)
    summary = rep.summary()
    records.append(_record("open_orbit", "pass" if rep.open else "fail",
                           **{k: summary[k] for k in ("open", "span_dim", "flag_dim",
                                                      "dim_q_h", "dim_qbar_g", "dim_g")}))
    good = p not in rep.bad_primes and p not in rep.nonunit_primes
    records.append(_record("good_prime", "pass" if good else "fail", p=p,
                           bad_primes=summary["bad_primes"],
                           nonunit_primes=summary["nonunit_primes"]))
    stab = {"stab_dim": rep.stab_dim,
            "basis": [[str(x) for x in v] for v in rep.stabilizer.basis]}
    want = run.expected.get("stab_dim")
    records.append(_record("stabilizer", "pass" if want in (None, rep.stab_dim) else "fail",
                           expected=want, **stab))
    depth = run.depth_override or 1
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cond = check_condition_b(cfg, p, depth, budget)
    if not cond["lie_ok"] or cond["points_ok"] is False:
        status = "fail"
    elif cond["points_ok"] is None:
        status = "skipped-budget"
    else:
        status = "pass"
    records.append(_record("condition_b", status, depth=depth, **cond))
    if cfg.h.torus_quotient() and rep.stabilizer_h is not None:
        ti = torus_image(cfg)
        records.append(_record("torus_image", "pass", image_dim=ti["image_dim"],
                               lie_c_dim=ti["lie_c_dim"], proper=ti["proper"],
                               vanishing_characters=[str(c) for c in
                                                     ti["vanishing_characters"]]))
    return _report("check-pair", records, run)


def cmd_simulate_norm(args):
    from .groups import BudgetExceeded
    from .mackey.machine import (family_check, machine_family, machine_hypotheses,
                                 verify_norm_relation)
    run = _load(args)
    cfg, p = run.pair, run.p
    budget = _budget(args, run)
    if run.slow and not args.extended:
        return _report("simulate-norm", [_record(
            "norm_relation", "skipped-budget", reason="slow case; rerun with --extended")], run)
    if cfg.u is None:
        return _report("simulate-norm", [_record(
            "hypotheses", "hypotheses-unmet", reason="config has no u; run find-u first")], run)
    ok, hyp = machine_hypotheses(cfg, p, budget)
    if not ok:
        return _report("simulate-norm", [_record("hypotheses", "hypotheses-unmet", **hyp)], run)
    records = [_record("hypotheses", "pass", **hyp)]
    for r in range(1, run.r_max + 1):
        res = verify_norm_relation(cfg, p, r, check_hypotheses=False, budget=budget)
        data = res.summary()
        data.pop("status")
        data.pop("hypotheses")
        records.append(_record(f"norm_relation[r={r}]", res.status, **data))
    try:
        fam = family_check(machine_family(cfg, p, run.r_max, budget))
    except BudgetExceeded as exc:
        records.append(_record("family_check", "skipped-budget", reason=str(exc)))
    else:
        records.append(_record("family_check", "pass" if fam.ok else "fail",
                               checked=fam.checked, failing_r=fam.failing_r))
    return _report("simulate-norm", records, run)


def cmd_verify_lemma(args):
    from .groups import BudgetExceeded
    from .levels import verify_lemma
    run = _load(args)
    budget = _budget(args, run)
    if run.pair.u is None:
        return _report("verify-lemma", [_record(
            "hypotheses", "hypotheses-unmet", reason="config has no u; run find-u first")], run)
    records = []
    for r in range(1, run.r_max + 1):
        try:
            out = verify_lemma(run.pair, run.p, r, run.depth_override, budget)
        except BudgetExceeded as exc:
            records.append(_record(f"lemma[r={r}]", "skipped-budget", reason=str(exc)))
            continue
        out.pop("representatives")
        ok = out["part_i"] and out["part_ii"] and out.get("guard", {}).get("agrees", True)
        records.append(_record(f"lemma[r={r}]", "pass" if ok else "fail", **out))
    return _report("verify-lemma", records, run)


def cmd_find_u(args):
    from .spherical import find_u
    run = _load(args)
    cfg = run.pair
    res = find_u(cfg, strategy=args.strategy, p=run.p, budget=run.budgets["search"],
                 seed=run.seed, integral=True)
    if res.status == "found":
        completed = dict(run.raw)
        completed.update(pair_to_dict(cfg.with_u(res.u, run.p)))
        for k in ("p", "r_max", "seed"):
            completed[k] = getattr(run, k)
        rec = _record("find_u", "pass", tried=res.tried,
                      u=[[str(x) for x in row] for row in res.u.rows_list()])
        return _report("find-u", [rec], run, {"completed_config": completed})
    status = "hypotheses-unmet" if res.status == "dimension-obstruction" else "skipped-budget"
    reason = res.reason
    if res.status == "dimension-obstruction":
        reason = f"dimension obstruction, search skipped: {res.reason}"
    return _report("find-u", [_record("find_u", status, tried=res.tried, reason=reason)], run)


def cmd_catalogue(args):
    from .catalogue import (FamilyTemplate, check_entry, instances, list_catalogue)
    records = []
    if args.check_dims:
        for e in instances():
            c = check_entry(e)
            records.append(_record(f"dims:{e.name}", "pass" if c["ok"] else "fail",
                                   dim_h=c["dim_h"], dim_flag_g=c["dim_flag_g"],
                                   kind=e.kind))
    listing = None
    if args.filter is not None or not args.check_dims:
        try:
            items = list_catalogue(args.filter or "all")
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        listing = []
        for it in items:
            if isinstance(it, FamilyTemplate):
                listing.append({"name": it.name, "kind": it.kind, "notes": it.notes,
                                "configs": {str(k): v for k, v in sorted(it.configs.items())}})
            elif hasattr(it, "to_dict"):
                listing.append(it.to_dict())
            else:
                listing.append({"name": it.name, "kind": it.kind, "notes": it.notes})
        if not records:
            records.append(_record(f"listing:{args.filter or 'all'}", "pass", count=len(listing)))
    extra = {"listing": listing} if listing is not None else None
    return _report("catalogue", records, extra=extra)


COMMANDS = {"check-pair": cmd_check_pair, "simulate-norm": cmd_simulate_norm,
            "verify-lemma": cmd_verify_lemma, "find-u": cmd_find_u, "catalogue": cmd_catalogue}


# -- parsing and rendering --------------------------------------------------------

def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--extended", action="store_true",
                        help="run slow cases instead of skipping them")
    run_opts = _Parser(add_help=False)
    run_opts.add_argument("config", help="path to a pair configuration file")
    run_opts.add_argument("--p", type=int, help="override the prime")
    run_opts.add_argument("--rmax", type=int, help="override r_max")
    run_opts.add_argument("--depth", type=int, help="override the enumeration depth")
    run_opts.add_argument("--budget", type=int, help="override the enumeration budget")
    run_opts.add_argument("--seed", type=int, help="override the seed")

    parser = _Parser(prog="normcompat",
                     description="Exact checks for spherical pairs, level towers and norm "
                                 "relations.")
    parser.add_argument("--version", action="version", version=f"normcompat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("check-pair", parents=[common, run_opts],
                   help="open orbit, stabilizer, condition (B), torus image")
    sub.add_parser("simulate-norm", parents=[common, run_opts],
                   help="exact norm relation for r = 1..rmax and the compatible family")
    sub.add_parser("verify-lemma", parents=[common, run_opts],
                   help="brute-force index lemma for r = 1..rmax")
    fu = sub.add_parser("find-u", parents=[common, run_opts],
                        help="search for u and print the completed config")
    fu.add_argument("--strategy", choices=("enumerate", "random"), default="enumerate")
    cat = sub.add_parser("catalogue", parents=[common], help="list or check the catalogue")
    cat.add_argument("--check-dims", action="store_true")
    cat.add_argument("--filter", choices=("all", "none", "eisenstein", "has-torus-factor"))
    return parser


def _scalar(v):
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return str(v)


def render_text(report):
    lines = [f"normcompat {report['version']} {report['command']}: {report['status']}"]
    if "config" in report:
        c = report["config"]
        lines.append(f"config {c['name']} sha256={c['sha256'][:16]} p={c['p']} "
                     f"r_max={c['r_max']} seed={c['seed']}")
    for rec in report["records"]:
        lines.append(f"[{rec['status']}] {rec['name']}")
        for k, v in sorted(rec["data"].items()):
            text = _scalar(v)
            if len(text) > 100:
                text = text[:97] + "..."
            lines.append(f"    {k}: {text}")
    for item in report.get("listing") or []:
        label = item.get("name") or item.get("entry")
        if "outcome" in item:
            label += f"  k={item['k']} -> {item['outcome']}"
        lines.append(f"  {label}")
    if "completed_config" in report:
        lines.append(dumps(report["completed_config"]).rstrip())
    return "\n".join(lines) + "\n"


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        report = COMMANDS[args.command](args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json":
        out.write(dumps(report))
    else:
        out.write(render_text(report))
    return report["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
