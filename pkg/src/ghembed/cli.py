"""Command-line interface.

Exit codes: 0 success, 1 property failure, 2 input error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bead import build_bead
from .box import BoxPoint, box_linf_distance, embed_box_point
from .experiments import ExperimentConfig, check_axioms, check_theorem
from .gh import DEFAULT_BUDGET, gh_bounds, gh_bruteforce, gh_exact
from .metric import (
    MetricError,
    SearchTooLarge,
    diameter,
    dumps_space,
    read_space,
    scale,
    space_to_dict,
)

EXIT_OK, EXIT_PROPERTY, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def fmt(v: float) -> str:
    return f"{v:.12g}"


def _load_json(path) -> dict:
    def reject(name):
        raise ValueError(f"non-finite number {name!r} in {path}")

    return json.loads(Path(path).read_text(), parse_constant=reject)


def _emit_bead(bead, args) -> None:
    if args.out:
        out = Path(args.out)
        out.write_text(dumps_space(bead) + "\n")
        sidecar = Path(args.sidecar) if args.sidecar else out.with_suffix(".sidecar.json")
        sidecar.write_text(json.dumps(bead.sidecar()) + "\n")
        print(f"wrote {out} and {sidecar}")
    else:
        print(json.dumps({"space": space_to_dict(bead), "sidecar": bead.sidecar()}))


def cmd_validate(args) -> int:
    X = read_space(args.file, tol=args.tol)
    print(f"valid metric: {X.n} points, diameter {fmt(diameter(X))}")
    return EXIT_OK


def cmd_diam(args) -> int:
    print(fmt(diameter(read_space(args.file))))
    return EXIT_OK


def cmd_scale(args) -> int:
    print(dumps_space(scale(read_space(args.file), args.t)))
    return EXIT_OK


def cmd_gh(args) -> int:
    X, Y = read_space(args.x), read_space(args.y)
    if args.method == "bounds":
        lo, hi = gh_bounds(X, Y)
        if args.json:
            print(json.dumps({"lower": lo, "upper": hi}))
        else:
            print(f"{fmt(lo)} {fmt(hi)}")
        return EXIT_OK
    if args.method == "bruteforce":
        res = gh_bruteforce(X, Y)
    else:
        res = gh_exact(X, Y, args.budget)
    if args.json:
        print(res.to_json())
    else:
        suffix = "" if res.optimal else f" (budget exhausted; lower bound {fmt(res.lower_bound)})"
        print(fmt(res.value) + suffix)
    return EXIT_OK if res.optimal else EXIT_BUDGET


def cmd_bead(args) -> int:
    manifest = _load_json(args.manifest)
    base = Path(args.manifest).parent
    blocks = [read_space(base / p) for p in manifest["blocks"]]
    _emit_bead(build_bead(manifest["r"], blocks), args)
    return EXIT_OK


def cmd_embed_box(args) -> int:
    spec = _load_json(args.spec)
    _emit_bead(embed_box_point(BoxPoint(spec["x"], spec["r"])), args)
    return EXIT_OK


def cmd_box_distance(args) -> int:
    spec = _load_json(args.spec)
    x = BoxPoint(spec["x"], spec["r"])
    y = BoxPoint(spec["y"], spec["r"])
    print(fmt(box_linf_distance(x, y)))
    return EXIT_OK


def _radii(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad radius list {text!r}") from None


def cmd_check_theorem(args) -> int:
    cfg = ExperimentConfig(
        seed=args.seed,
        trials=args.trials,
        N=args.blocks,
        max_block_points=args.max_points,
        r=args.r,
        tolerance=args.tol,
        node_budget=args.budget,
        workers=args.workers,
    )
    report = check_theorem(cfg)
    if args.json:
        print(report.to_json(timings=args.timings))
    else:
        for rec in report.records:
            status = "ok" if rec.complete and rec.deviation <= cfg.tolerance else (
                "INCOMPLETE" if not rec.complete else "FAIL"
            )
            line = (
                f"trial {rec.trial:3d}  lhs {fmt(rec.lhs)}  rhs {fmt(rec.rhs)}"
                f"  dev {fmt(rec.deviation)}  nodes {rec.nodes}  {status}"
            )
            if args.timings:
                line += f"  {fmt(rec.wall_time)}s"
            print(line)
        print(
            f"max deviation {fmt(report.max_deviation)}; "
            f"{len(report.failures)} failures; {len(report.incomplete)} incomplete"
        )
    if report.failures:
        return EXIT_PROPERTY
    return EXIT_BUDGET if report.incomplete else EXIT_OK


def cmd_check_axioms(args) -> int:
    report = check_axioms(
        ExperimentConfig(seed=args.seed, tolerance=args.tol, node_budget=args.budget),
        pool_size=args.pool_size,
        max_points=args.max_points,
    )
    if args.json:
        print(json.dumps(report.to_dict(), sort_keys=True))
    else:
        for name, v in report.violations.items():
            print(f"{name:20s} max violation {fmt(v)}  ({report.checks[name]} checks)")
        print("PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_PROPERTY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ghembed", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check that a JSON matrix is a metric")
    s.add_argument("file")
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("diam", help="print the diameter")
    s.add_argument("file")
    s.set_defaults(func=cmd_diam)

    s = sub.add_parser("scale", help="multiply all distances by t")
    s.add_argument("file")
    s.add_argument("t", type=float)
    s.set_defaults(func=cmd_scale)

    s = sub.add_parser("gh", help="Gromov-Hausdorff distance between two spaces")
    s.add_argument("x")
    s.add_argument("y")
    s.add_argument("--method", choices=("exact", "bruteforce", "bounds"), default="exact")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_gh)

    for name, func, arg, text in (
        ("bead", cmd_bead, "manifest", "build a bead space from {r, blocks}"),
        ("embed-box", cmd_embed_box, "spec", "embed a box point {r, x}"),
    ):
        s = sub.add_parser(name, help=text)
        s.add_argument(arg)
        s.add_argument("-o", "--out", help="write the space here instead of stdout")
        s.add_argument("--sidecar", help="sidecar path (default: <out>.sidecar.json)")
        s.set_defaults(func=func)

    s = sub.add_parser("box-distance", help="sup distance between box points {r, x, y}")
    s.add_argument("spec")
    s.set_defaults(func=cmd_box_distance)

    s = sub.add_parser("check-theorem", help="random bead-space identity trials")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=25)
    s.add_argument("--blocks", type=int, default=2)
    s.add_argument("--max-points", type=int, default=2)
    s.add_argument("--r", type=_radii, default=None, help="comma-separated radii")
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--json", action="store_true")
    s.add_argument("--timings", action="store_true", help="include wall times")
    s.set_defaults(func=cmd_check_theorem)

    s = sub.add_parser("check-axioms", help="GH property battery on a random pool")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--pool-size", type=int, default=12)
    s.add_argument("--max-points", type=int, default=4)
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_check_axioms)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MetricError as exc:
        for v in exc.violations:
            print(v, file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, KeyError, OSError, SearchTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
