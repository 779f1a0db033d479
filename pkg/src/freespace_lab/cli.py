"""Command-line front end.

Every command writes one JSON report (or CSV for ``classify --format csv``)
embedding the tool version, an echo of the configuration and the
arithmetic mode.  Reports are serialised with sorted keys so the same
configuration always produces byte-identical output.

Exit codes: 0 success, 1 when ``--assert`` finds a Refuted verdict where
Proven was expected, 2 on input errors (malformed files name the JSON path).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .attainment import check_function, strongly_attains, verify_na_equals_sna
from .certificates import check_report
from .elements import FreeElement, LipFunction
from .errors import FreespaceError, MalformedInput
from .extremal import DEFAULT_DEPTH, DEFAULT_EPS_GRID, classify_all, oracle_extreme_points
from .free_space import kr_norm_dual, kr_norm_primal, slice_diameter
from .gallery import gallery
from .lipschitz import lip_norm, slice_molecules
from .metric import (
    MetricSpace,
    load_json_text,
    metric_segment,
    snowflake,
    space_from_json,
    space_to_json,
    validate,
)
from .rational import fmt, to_fraction

CLAIMS = ("extreme", "exposed_by_fxy", "denting", "strongly_exposed")


class InputError(Exception):
    """Bad command-line input (exit 2)."""


@dataclass
class RunConfig:
    command: str
    space: str | None = None
    gallery: str | None = None
    N: int | None = None
    snowflake: str | None = None
    pair: list[str] | None = None
    depth: int = DEFAULT_DEPTH
    eps_grid: list[str] = field(default_factory=lambda: [fmt(e) for e in DEFAULT_EPS_GRID])
    arithmetic: str = "exact"
    out: str | None = None
    seed: int | None = None
    extra: dict = field(default_factory=dict)


# -- helpers ----------------------------------------------------------------------

def _read_json(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return load_json_text(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON in {path} (line {exc.lineno}, column {exc.colno})") from exc


def _load_space(args) -> MetricSpace:
    if args.space and args.gallery:
        raise InputError("give either --space or --gallery, not both")
    if args.space:
        space = space_from_json(_read_json(args.space))
    elif args.gallery:
        if args.N is None:
            raise InputError("--gallery needs --N")
        space = gallery(args.gallery, args.N)
    else:
        raise InputError("a space is required (--space FILE or --gallery NAME --N N)")
    args.base_space = space
    if getattr(args, "snowflake", None):
        space = snowflake(space, _rational_arg(args.snowflake, "--snowflake"))
    return space


def _config(args, space: MetricSpace | None) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in ("space", "gallery", "N", "snowflake", "pair", "depth", "out", "seed"):
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "eps_grid", None):
        cfg.eps_grid = list(args.eps_grid)
    if space is not None:
        cfg.arithmetic = "exact" if space.exact else "float"
    return cfg


def _envelope(cfg: RunConfig, result: Any) -> dict:
    return {
        "tool": "freespace_lab",
        "version": __version__,
        "arithmetic": cfg.arithmetic,
        "config": asdict(cfg),
        "result": result,
    }


def _dump(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _rational_arg(value: str, flag: str):
    try:
        return to_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{flag} expects a rational such as 1/4, got {value!r}") from exc


def _pair(space: MetricSpace, pair):
    if not pair:
        return None
    return space.check_pair(*pair)


# -- commands ------------------------------------------------------------------------

def cmd_validate(args) -> int:
    space = _load_space(args)
    cfg = _config(args, space)
    violations = validate(space)
    _emit(_dump(_envelope(cfg, {"valid": not violations, "violations": violations})), args.out)
    if violations:
        print(f"error: {len(violations)} metric violation(s); first: {violations[0]}", file=sys.stderr)
        return 2
    return 0


def cmd_segment(args) -> int:
    space = _load_space(args)
    x, y = _pair(space, args.pair)
    seg = sorted(metric_segment(space, x, y))
    result = {"segment": [space.labels[i] for i in seg], "trivial": len(seg) == 2}
    _emit(_dump(_envelope(_config(args, space), result)), args.out)
    return 0


def cmd_norm(args) -> int:
    space = _load_space(args)
    mu = FreeElement.from_json(space, _read_json(args.element))
    result: dict[str, Any] = {"element": mu.to_json()}
    if args.method in ("dual", "both"):
        dual = kr_norm_dual(mu)
        result["dual"] = {"value": fmt(dual.value), "witness": dual.witness.to_json()}
    if args.method in ("primal", "both"):
        primal = kr_norm_primal(mu)
        plan = [{"from": space.labels[u], "to": space.labels[v], "mass": fmt(m)}
                for (u, v), m in sorted(primal.plan.items())]
        result["primal"] = {"value": fmt(primal.value), "plan": plan}
    if args.method == "both":
        result["agree"] = result["dual"]["value"] == result["primal"]["value"]
    cfg = _config(args, space)
    cfg.extra = {"element": args.element, "method": args.method}
    _emit(_dump(_envelope(cfg, result)), args.out)
    return 0


def _rows_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y"] + list(CLAIMS) + ["oracle_extreme"])
    for r in rows:
        ora = "" if r.oracle_extreme is None else str(r.oracle_extreme).lower()
        w.writerow(list(r.molecule) + [getattr(r, c).status.value for c in CLAIMS] + [ora])
    return buf.getvalue()


def cmd_classify(args) -> int:
    wanted = []
    if args.assert_claims:
        wanted = [c.strip() for c in args.assert_claims.split(",") if c.strip()]
        bad = [c for c in wanted if c not in CLAIMS]
        if bad:
            raise InputError(f"unknown claim(s) for --assert: {bad}; choose from {list(CLAIMS)}")
    space = _load_space(args)
    eps_grid = [_rational_arg(e, "--eps-grid") for e in args.eps_grid] if args.eps_grid else DEFAULT_EPS_GRID
    if any(e <= 0 for e in eps_grid):
        raise InputError("--eps-grid values must be positive")
    pairs = [_pair(space, args.pair)] if args.pair else None
    rows = classify_all(space, depth=args.depth, eps_grid=eps_grid, pairs=pairs)
    cfg = _config(args, space)
    cfg.extra = {"format": args.format, "assert": args.assert_claims}
    if args.format == "csv":
        _emit(_rows_csv(rows), args.out)
    else:
        result = {"space": space_to_json(args.base_space), "rows": [r.to_json() for r in rows]}
        _emit(_dump(_envelope(cfg, result)), args.out)
    if wanted:
        failures = [(r.molecule, c) for r in rows for c in wanted if getattr(r, c).refuted]
        for mol, c in failures:
            print(f"assert: {c} Refuted for {mol[0]} {mol[1]}", file=sys.stderr)
        if failures:
            return 1
    return 0


def cmd_oracle(args) -> int:
    space = _load_space(args)
    verts = oracle_extreme_points(space, cap=args.cap)
    result = {"count": len(verts), "vertices": [list(m.labels(space)) for m in verts]}
    _emit(_dump(_envelope(_config(args, space), result)), args.out)
    return 0


def cmd_attain(args) -> int:
    space = _load_space(args)
    cfg = _config(args, space)
    if args.function:
        f = LipFunction.from_json(space, _read_json(args.function))
        report = strongly_attains(space, f)
        verts = oracle_extreme_points(space)
        sample = check_function(space, f, verts)
        result = report.to_json()
        if isinstance(sample, dict):
            result["counterexample"] = sample
            result["passed"] = False
        else:
            result["vertex"] = list(sample.vertex.labels(space))
            result["passed"] = True
        cfg.extra = {"function": args.function}
    else:
        if args.random is None:
            raise InputError("attain needs --function FILE or --random K")
        seed = 0 if args.seed is None else args.seed
        cfg.seed = seed
        report = verify_na_equals_sna(space, args.random, seed=seed)
        result = report.to_json()
        cfg.extra = {"random": args.random}
    _emit(_dump(_envelope(cfg, result)), args.out)
    return 0 if result.get("passed", True) else 1


def cmd_gallery(args) -> int:
    space = gallery(args.name, args.N)
    _emit(json.dumps(space_to_json(space), indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_slice(args) -> int:
    space = _load_space(args)
    f = LipFunction.from_json(space, _read_json(args.function))
    alpha = _rational_arg(args.alpha, "--alpha")
    norm = lip_norm(f).value
    if norm > 1:
        raise InputError(f"slice needs a function of Lipschitz norm <= 1, got {fmt(norm)}")
    ms = slice_molecules(f, alpha)
    result = {
        "lip_norm": fmt(norm),
        "molecules": [list(m.labels(space)) for m in ms],
        "diameter_molecules": fmt(slice_diameter(space, f, alpha, restrict_to_molecules=True)),
    }
    if args.full:
        result["diameter_full"] = fmt(slice_diameter(space, f, alpha, restrict_to_molecules=False))
    cfg = _config(args, space)
    cfg.extra = {"function": args.function, "alpha": args.alpha, "full": args.full}
    _emit(_dump(_envelope(cfg, result)), args.out)
    return 0


def cmd_check(args) -> int:
    report = _read_json(args.report)
    if not isinstance(report, dict) or not isinstance(report.get("result"), dict):
        raise MalformedInput("not a classify report", "$.result")
    res_part = report["result"]
    if args.space:
        space = space_from_json(_read_json(args.space))
    elif "space" in res_part:
        try:
            space = space_from_json(res_part["space"])
        except MalformedInput as exc:
            raise MalformedInput(str(exc).split(": ", 1)[-1], "$.result.space" + exc.path[1:]) from exc
    else:
        raise MalformedInput("report does not embed its space; pass --space", "$.result.space")
    snow = (report.get("config") or {}).get("snowflake")
    if snow:
        space = snowflake(space, to_fraction(snow))
    res = check_report(res_part, space)
    out = {"ok": res.ok, "problems": res.problems, "rows": len(res_part.get("rows", []))}
    sys.stdout.write(_dump(out))
    return 0 if res.ok else 1


# -- parser ------------------------------------------------------------------------

def _space_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--space", help="space JSON file")
    p.add_argument("--gallery", help="gallery family name (instead of --space)")
    p.add_argument("--N", type=int, help="gallery truncation depth")
    p.add_argument("--snowflake", help="replace distances d by d**P, 0 < P < 1")
    p.add_argument("--out", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freespace-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the metric axioms")
    _space_args(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("segment", help="metric segment [x, y]")
    _space_args(p)
    p.add_argument("--pair", nargs=2, metavar=("X", "Y"), required=True)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("norm", help="Kantorovich-Rubinstein norm of an element")
    _space_args(p)
    p.add_argument("--element", required=True, help='JSON {"coeffs": {label: rational}}')
    p.add_argument("--method", choices=["dual", "primal", "both"], default="both")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("classify", help="classify molecules with evidence")
    _space_args(p)
    p.add_argument("--pair", nargs=2, metavar=("X", "Y"))
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--eps-grid", nargs="+", help="descending rationals (default 1 1/2 1/4 1/8 1/16)")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--assert", dest="assert_claims", nargs="?", const=",".join(CLAIMS),
                   help="exit 1 if any listed claim (comma separated, default all) is Refuted")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("oracle", help="vertices of the unit ball by exact LP")
    _space_args(p)
    p.add_argument("--cap", type=int, default=10)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("attain", help="strong norm attainment")
    _space_args(p)
    p.add_argument("--function", help="JSON map label -> rational")
    p.add_argument("--random", type=int, metavar="K", help="sample K random functions")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_attain)

    p = sub.add_parser("gallery", help="write a gallery space file")
    p.add_argument("--name", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("slice", help="molecules and diameter of a slice")
    _space_args(p)
    p.add_argument("--function", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--full", action="store_true", help="also compute the full-slice diameter")
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("check", help="re-verify the evidence in a classify report")
    p.add_argument("--report", required=True)
    p.add_argument("--space", help="space file (default: the one embedded in the report)")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MalformedInput as exc:
        print(f"error: {exc.code} at {exc.path}: {str(exc).split(': ', 1)[-1]}", file=sys.stderr)
        return 2
    except (FreespaceError, InputError) as exc:
        code = getattr(exc, "code", "input-error")
        print(f"error: {code}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
