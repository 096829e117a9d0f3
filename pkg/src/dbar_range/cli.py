"""Command-line front end.

Subcommands: certify (exterior-witness condition -> lattice -> weight
report), verify (discrete operator check of a constant), scenario (replay
an example family from a spec file).  Exit codes are stable: 0 certified
or passed, 1 usage/configuration error, 2 condition not satisfied, 3
verification exceeded the supplied constant.

DBAR_RANGE_THREADS caps the linear-algebra thread pools (default 1 so that
identical configs reproduce byte-identical reports); it must be honored
before the numeric stack loads, which is why the heavy imports live inside
the command handlers.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path


def _setup_threads():
    cap = os.environ.get("DBAR_RANGE_THREADS", "1")
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, cap)


def _common(parser):
    parser.add_argument("--out", default="dbar-range-out", help="output directory")
    parser.add_argument("--seed", type=int, default=0, help="seed recorded in reports")
    parser.add_argument("--mesh", type=float, default=None, help="mesh override")
    parser.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dbar-range",
        description="closed-range certificates and discrete verification "
        "for the Cauchy-Riemann operator on planar domains",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", help="construct a weight certificate for a domain")
    c.add_argument("--domain", required=True, help="domain JSON file")
    c.add_argument("--M", type=float, required=True, help="witness search radius")
    c.add_argument("--delta", type=float, required=True, help="witness clearance")
    c.add_argument("--gamma-max", type=int, default=64, help="series truncation rings")
    _common(c)

    v = sub.add_parser("verify", help="check a constant against the discrete operator")
    v.add_argument("--domain", required=True, help="domain JSON file")
    v.add_argument("--C", type=float, required=True, help="constant to verify")
    v.add_argument("--trials", type=int, default=20, help="random test forms")
    v.add_argument("--dump-field", action="store_true", help="CSV dump of the last solution field")
    _common(v)

    s = sub.add_parser("scenario", help="run a scenario spec file")
    s.add_argument("--spec", required=True, help="scenario JSON file")
    _common(s)
    return p


def _load_json(path: str):
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemExit(
            f"error: {path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None


def cmd_certify(args) -> int:
    from .geometry import (
        ConfigurationError,
        DomainSpecError,
        build_lattice,
        condition_x,
        domain_from_dict,
    )
    from .reporting import stamp, write_report
    from .weights import lattice_weight_report

    config = {
        "command": "certify",
        "domain": _load_json(args.domain),
        "M": args.M,
        "delta": args.delta,
        "gamma_max": args.gamma_max,
        "mesh": args.mesh,
        "seed": args.seed,
    }
    dom = domain_from_dict(config["domain"])
    cx = condition_x(dom, args.M, args.delta, h=args.mesh)
    report = {
        "command": "certify",
        "M": args.M,
        "delta": args.delta,
        "mesh": dom.raster(args.mesh).h,
        "seed": args.seed,
        "condition_x": {
            "holds": cx.holds,
            "failure_count": cx.failure_count,
            "unprovable_count": cx.unprovable_count,
            "accepted_by_symmetry": cx.accepted_by_symmetry,
        },
        "notes": list(cx.notes),
    }
    if not cx.holds:
        report["verdict"] = (
            "undecided by this toolkit: the exterior-witness condition fails "
            "at these parameters (it is sufficient, not necessary)"
        )
        path = write_report(Path(args.out) / "certify_report.json", stamp(report, config))
        print(f"condition not satisfied; report: {path}")
        return 2
    lat = build_lattice(dom, args.M, args.delta, h=args.mesh, cert=cx)
    weight = lattice_weight_report(dom, lat, gamma_max=args.gamma_max, h=args.mesh)
    report["weight"] = weight
    report["verdict"] = "closed range certified on the windowed domain"
    path = write_report(Path(args.out) / "certify_report.json", stamp(report, config))
    print(
        f"certified: log10 C = {weight['log10_C']:.3f} "
        f"(A = {weight['A']:.6g}, B = {weight['B']:.6g}); report: {path}"
    )
    return 0


def cmd_verify(args) -> int:
    from .discrete import (
        DENSE_LIMIT,
        SolverError,
        assemble,
        closed_range_constant,
        least_norm_solve,
        verify_certificate,
    )
    from .geometry import domain_from_dict
    from .reporting import stamp, write_csv, write_report

    if args.C <= 0:
        print("error: --C must be positive", file=sys.stderr)
        return 1
    config = {
        "command": "verify",
        "domain": _load_json(args.domain),
        "C": args.C,
        "trials": args.trials,
        "mesh": args.mesh,
        "seed": args.seed,
    }
    dom = domain_from_dict(config["domain"])
    g = assemble(dom, args.mesh)
    sigma = None
    if g.size <= DENSE_LIMIT:
        sigma = closed_range_constant(g, method="dense")
    else:
        try:
            sigma = closed_range_constant(g, method="iterative")
        except SolverError:
            sigma = None
    rep = verify_certificate(g, args.C, trials=args.trials, seed=args.seed)
    report = {
        "command": "verify",
        "mesh": g.h,
        "seed": args.seed,
        "unknowns": g.size,
        "sigma_min": sigma,
        "discrete_constant": None if sigma is None else 1.0 / sigma,
        "verification": rep,
    }
    path = write_report(Path(args.out) / "verify_report.json", stamp(report, config))
    if args.dump_field and args.trials > 0:
        import numpy as np

        w = np.zeros(g.size, dtype=complex)
        rng = np.random.default_rng(args.seed)
        from .discrete import radial_bump

        c = g.nodes_z[int(rng.integers(0, g.size))]
        w = radial_bump(g.nodes_z, c, 10 * g.h)
        v, _ = least_norm_solve(g, g.op @ w)
        write_csv(
            Path(args.out) / "verify_field.csv",
            {
                "x": g.nodes_z.real,
                "y": g.nodes_z.imag,
                "re_u": v.real,
                "im_u": v.imag,
            },
        )
    status = "passed" if rep["passed"] else "EXCEEDED"
    print(
        f"verification {status}: max ratio {rep['max_ratio']:.6g} vs "
        f"C = {args.C:.6g}; report: {path}"
    )
    return 0 if rep["passed"] else 3


def cmd_scenario(args) -> int:
    from .reporting import stamp, write_csv, write_report
    from .scenarios import run_scenario

    spec = _load_json(args.spec)
    if args.mesh is not None:
        spec["mesh"] = args.mesh
    if args.seed:
        spec["seed"] = args.seed
    report = run_scenario(spec)
    name = report["scenario"]
    path = write_report(Path(args.out) / f"scenario_{name}_report.json", stamp(report, spec))
    rows = report.get("measured", {}).get("rows")
    if rows:
        cols = {k: [r[k] for r in rows] for k in rows[0]}
        write_csv(Path(args.out) / f"scenario_{name}_rows.csv", cols)
    ok = all(c["passed"] for c in report.get("checks", []))
    print(f"scenario {name}: {'all checks passed' if ok else 'CHECK FAILED'}; report: {path}")
    return 0 if ok else 3


def main(argv=None) -> int:
    _setup_threads()
    args = build_parser().parse_args(argv)
    from .discrete import MeshError, SolverError
    from .geometry import ConfigurationError, DomainSpecError, QueryError
    from .scenarios import ScenarioError

    handlers = {"certify": cmd_certify, "verify": cmd_verify, "scenario": cmd_scenario}
    try:
        return handlers[args.command](args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (
        DomainSpecError,
        QueryError,
        ConfigurationError,
        MeshError,
        ScenarioError,
        SolverError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
