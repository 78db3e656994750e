"""``vrmorse`` command-line front end.

Every subcommand writes one JSON document (``simplices`` writes JSON lines)
that embeds the effective configuration and a content hash of the input.
Exit codes: 0 success, 1 error, 2 a refutation or failed check under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import BudgetExceeded
from .metric import format_value, parse_value, validate_metric

DEFAULTS = {
    "max_dim": 2,
    "max_subset": 4,
    "betti_dim": None,
    "scales": "full",
    "radius": 4,
    "N": 2,
    "eps": None,
    "budget": None,
}

EXIT_OK, EXIT_ERROR, EXIT_STRICT = 0, 1, 2


class CliError(Exception):
    """Bad configuration or input; reported with exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: invalid config: {message}\n")


def _add_input(p):
    src = p.add_argument_group("input (exactly one)")
    src.add_argument("--gen", help="generator: circle:12, lattice:2:15, sphere:2")
    src.add_argument("--input", help="point cloud CSV x0,...,xk[,label]")
    src.add_argument("--matrix", help="distance matrix CSV (optional label row)")
    p.add_argument("--eps", type=float, help="tolerance for float distances")


def _add_common(p):
    p.add_argument("--config", help="JSON file with option values (flags take precedence)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--strict", action="store_true", default=None,
                   help="exit 2 when the analysis refutes or a check fails")
    p.add_argument("--budget", type=int, help="simplex budget (overrides VRMORSE_BUDGET)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vrmorse", description="Discrete Morse theory on Vietoris-Rips complexes.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check the metric axioms")
    _add_input(p)
    _add_common(p)

    p = sub.add_parser("simplices", help="dump VR simplices at one scale as JSON lines")
    _add_input(p)
    _add_common(p)
    p.add_argument("--scale", required=False, help="scale in stored units (squared for lattices)")
    p.add_argument("--max-dim", type=int, dest="max_dim")

    p = sub.add_parser("dlink", help="classify the descending link of one simplex")
    _add_input(p)
    _add_common(p)
    p.add_argument("--simplex", help="comma separated point indices, e.g. 0,4,8")
    p.add_argument("--homology-cap", type=int, dest="homology_cap")

    p = sub.add_parser("criteria", help="scan scales with the Link Criterion")
    _add_input(p)
    _add_common(p)
    p.add_argument("--scales", help="comma separated stored values, or 'full' (default)")
    p.add_argument("--max-subset", type=int, dest="max_subset")

    p = sub.add_parser("persistence", help="certified intervals and Betti cross-check")
    _add_input(p)
    _add_common(p)
    p.add_argument("--max-subset", type=int, dest="max_subset")
    p.add_argument("--betti-dim", type=int, dest="betti_dim")
    p.add_argument("--table", help="also write a plot-ready per-scale CSV here")

    p = sub.add_parser("forman", help="classify and verify a Forman function")
    p.add_argument("--input", help='JSON {"simplices": [...], "h": [...]}')
    _add_common(p)

    p = sub.add_parser("group", help="word-metric ball checks")
    p.add_argument("--spec", help="free_group:2, free_abelian:2, explicit, or a JSON object")
    p.add_argument("--edges", help="Cayley edge CSV u,v,generator (explicit groups)")
    p.add_argument("--identity", help="identity vertex of an explicit Cayley graph")
    p.add_argument("--radius", type=int)
    p.add_argument("--scale", help="comma separated integer scales")
    p.add_argument("--combing", choices=["prefix", "staircase"])
    p.add_argument("--N", type=int, dest="N")
    _add_common(p)
    return parser


def _merge_config(args) -> dict:
    cfg = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise CliError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise CliError(f"config is not JSON: {exc}") from None
        if not isinstance(cfg, dict):
            raise CliError("config must be a JSON object")
    out = {k: v for k, v in DEFAULTS.items() if k in vars(args)}
    out.update({k.replace("-", "_"): v for k, v in cfg.items()})
    for k, v in vars(args).items():
        if v is not None and k != "config":
            out[k] = v
    out["strict"] = bool(out.get("strict"))
    if out.get("budget") is not None and int(out["budget"]) <= 0:
        raise CliError("budget must be positive")
    return out


def _space(cfg):
    from .io import parse_generator, read_distance_matrix, read_point_cloud

    given = [k for k in ("gen", "input", "matrix") if cfg.get(k)]
    if len(given) != 1:
        raise CliError("give exactly one of --gen, --input, --matrix")
    try:
        if cfg.get("gen"):
            return parse_generator(cfg["gen"])
        if cfg.get("input"):
            kw = {} if cfg.get("eps") is None else {"eps": cfg["eps"]}
            return read_point_cloud(cfg["input"], **kw)
        return read_distance_matrix(cfg["matrix"], eps=cfg.get("eps"))
    except OSError as exc:
        raise CliError(f"unreadable input: {exc}") from None


def _envelope(command, cfg, result, space=None) -> dict:
    shown = {k: v for k, v in cfg.items() if v is not None and k not in ("command", "out")}
    out = {"command": command, "config": shown, "result": result}
    if space is not None:
        out["input_hash"] = space.content_hash()
        out["n"] = space.n
        out["kind"] = space.kind
    return out


def _scale_list(text):
    return [parse_value(s) for s in str(text).split(",") if s.strip()]


def cmd_validate(cfg):
    space = _space(cfg)
    rep = validate_metric(space)
    result = {"ok": rep.ok, "problems": [{"kind": p.kind, "where": [str(x) for x in p.where]}
                                         for p in rep.problems]}
    return _envelope("validate", cfg, result, space), not rep.ok


def cmd_simplices(cfg):
    from .complex import enumerate_simplices

    space = _space(cfg)
    if cfg.get("scale") is None:
        raise CliError("simplices needs --scale")
    t = parse_value(cfg["scale"])
    cx = enumerate_simplices(space, t, int(cfg["max_dim"]), cfg.get("budget"))
    head = _envelope("simplices", cfg, {"f_vector": list(cx.f_vector())}, space)
    return json.dumps(head, sort_keys=True) + "\n" + cx.to_jsonl(), False


def cmd_dlink(cfg):
    from .morse import LinkKind, classify_descending_link

    space = _space(cfg)
    if not cfg.get("simplex"):
        raise CliError("dlink needs --simplex")
    try:
        verts = [int(v) for v in str(cfg["simplex"]).split(",") if v.strip()]
    except ValueError:
        raise CliError(f"bad simplex {cfg['simplex']!r}") from None
    res = classify_descending_link(space, verts, cfg.get("homology_cap"), cfg.get("budget"))
    return _envelope("dlink", cfg, res.to_json(space), space), res.kind == LinkKind.NONTRIVIAL


def cmd_criteria(cfg):
    from .criteria import Status, criterion_range_scan
    from .metric import diameter_spectrum

    space = _space(cfg)
    scales = list(diameter_spectrum(space)) if cfg["scales"] == "full" else _scale_list(cfg["scales"])
    verdicts = criterion_range_scan(space, scales, int(cfg["max_subset"]))
    result = [v.to_json(space.kind) for v in verdicts]
    return _envelope("criteria", cfg, result, space), any(v.status == Status.REFUTED for v in verdicts)


def cmd_persistence(cfg):
    from .persistence import cross_validate, persistence_intervals

    space = _space(cfg)
    bd = cfg.get("betti_dim")
    report = persistence_intervals(space, int(cfg["max_subset"]), None if bd is None else int(bd),
                                   budget=cfg.get("budget"))
    result = report.to_json()
    failed = False
    if bd is not None:
        check = cross_validate(report, cfg.get("budget"))
        result["cross_validate"] = {"passed": check.passed, "message": check.message(),
                                    "jumps": [{"level": format_value(space.levels[j.level]),
                                               "expected": list(j.expected), "found": list(j.found)}
                                              for j in check.jumps]}
        failed = not check.passed
    if cfg.get("table"):
        _write_table(cfg["table"], report, cfg.get("budget"))
    return _envelope("persistence", cfg, result, space), failed


def _write_table(path, report, budget=None):
    """One row per spectrum scale: value, real value, verdict, interval number, Betti numbers."""
    import csv

    from .persistence import betti_profile

    space = report.space
    member = {lv: i for i, iv in enumerate(report.intervals) for lv in iv.levels()}
    width = 0 if report.betti_dim is None else report.betti_dim + 1
    if width:
        missing = [v for v in report.per_scale if v.level not in report.betti]
        for v, b in zip(missing, betti_profile(space, [v.value for v in missing], report.betti_dim, budget)):
            report.betti[v.level] = b
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["scale", "real", "status", "interval"] + [f"b{k}" for k in range(width)])
            for v in report.per_scale:
                b = report.betti.get(v.level)
                row = [format_value(v.value), f"{space.real(v.value):.12g}", v.status.value,
                       member.get(v.level, "")]
                w.writerow(row + (list(b.reduced[:width]) if b is not None else [""] * width))
    except OSError as exc:
        raise CliError(f"cannot write table: {exc}") from None


def cmd_forman(cfg):
    from .forman import forman_report_json, load_forman_json

    if not cfg.get("input"):
        raise CliError("forman needs --input complex.json")
    try:
        with open(cfg["input"], encoding="utf-8") as fh:
            cx, h = load_forman_json(fh.read())
    except OSError as exc:
        raise CliError(f"unreadable input: {exc}") from None
    result = forman_report_json(cx, h)
    failed = not (result["valid"] and result.get("descending_types_ok") and result.get("weak_morse_inequalities"))
    return _envelope("forman", cfg, result), failed


def cmd_group(cfg):
    from .criteria import Status
    from .groups import (
        boundary_safe_strong_check,
        cayley_ball,
        good_combing_check,
        parse_group_spec,
        prefix_combing,
        staircase_combing,
    )
    from .io import read_cayley_edges

    if not cfg.get("spec"):
        raise CliError("group needs --spec")
    edges = None
    if cfg.get("edges"):
        try:
            edges = read_cayley_edges(cfg["edges"])
        except OSError as exc:
            raise CliError(f"unreadable input: {exc}") from None
    ident = cfg.get("identity")
    if ident is not None and edges and isinstance(edges[0][0], int):
        ident = int(ident)
    spec = parse_group_spec(cfg["spec"], edges, ident)
    ball = cayley_ball(spec, int(cfg["radius"]), cfg.get("budget"))
    result = {"group": spec.to_json(), "radius": ball.radius, "ball_size": len(ball)}
    scales = [int(s) for s in _scale_list(cfg["scale"])] if cfg.get("scale") else []
    verdicts = [boundary_safe_strong_check(ball, t) for t in scales]
    result["checks"] = [v.to_json() for v in verdicts]
    failed = any(v.status == Status.REFUTED for v in verdicts)
    if cfg.get("combing"):
        oracle = prefix_combing if cfg["combing"] == "prefix" else staircase_combing
        rep = good_combing_check(ball, oracle, int(cfg["N"]), scales or None)
        result["combing"] = rep.to_json()
        failed = failed or not rep.passed
    return _envelope("group", cfg, result), failed


COMMANDS = {
    "validate": cmd_validate,
    "simplices": cmd_simplices,
    "dlink": cmd_dlink,
    "criteria": cmd_criteria,
    "persistence": cmd_persistence,
    "forman": cmd_forman,
    "group": cmd_group,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _merge_config(args)
        payload, failed = COMMANDS[args.command](cfg)
    except CliError as exc:
        print(f"vrmorse: invalid config: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except BudgetExceeded as exc:
        print(f"vrmorse: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, KeyError) as exc:
        print(f"vrmorse: bad input: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = payload if isinstance(payload, str) else json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if cfg.get("out"):
        try:
            with open(cfg["out"], "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"vrmorse: cannot write output: {exc}", file=sys.stderr)
            return EXIT_ERROR
    else:
        sys.stdout.write(text)
    return EXIT_STRICT if failed and cfg["strict"] else EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
