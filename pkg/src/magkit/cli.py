"""Command line front end.

Subcommands wrap the library and emit JSON (structured results) or CSV
(curves). Exit codes: 0 success, 1 input error (bad file, bad flags),
2 mathematical nonexistence or hypothesis failure, reported as structured
JSON diagnostics. Outputs are deterministic for identical inputs and
flags; every numeric field round-trips full double precision.

The environment variable MAGKIT_THREADS caps internal parallelism of the
sweep and subset-verification loops (default 1).
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import asymptotics, embedding, identities, spd, subspace
from ._jsonutil import dumps, fmt
from .errors import InputError, MathError, UnknownTarget
from .magnitude import (
    Definiteness,
    set_pd_cutoff_scale,
    similarity_data,
)
from .metric import (
    MetricSpace,
    from_distance_matrix,
    load_space,
    scale,
    three_point_demo,
    two_point_space,
)

REPRODUCE_TARGETS = ("fig1", "fig2", "example-2-3", "example-fb-2pt")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magkit",
        description="Magnitude of finite metric spaces: compute, embed, sweep, "
        "subspace updates, strong positive definiteness, submodularity.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, needs_input: bool = True):
        if needs_input:
            p.add_argument("--input", "-i", required=True,
                           help="distance matrix CSV or points/dist JSON")
        p.add_argument("--output", "-o", default=None,
                       help="output file (default: stdout)")
        p.add_argument("--t", type=float, default=1.0,
                       help="scale factor applied to the metric (default 1)")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for any sampled checks (outputs stay deterministic)")
        p.add_argument("--tol-pd", type=float, default=None,
                       help="override the relative eigenvalue cutoff for definiteness")
        p.add_argument("--format", choices=("json", "csv"), default=None,
                       help="output format where both apply")
        return p

    common(sub.add_parser("compute", help="magnitude, weighting, circumradius, residuals"))
    common(sub.add_parser("embed", help="export the similarity embedding"))

    p = common(sub.add_parser("sweep", help="magnitude across scales, CSV curve"))
    p.add_argument("--t-min", type=float, default=0.01)
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--grid", type=int, default=32, help="grid points per decade")

    p = common(sub.add_parser("subspace", help="subset magnitude via the incremental path"))
    p.add_argument("--subset", default=None, help='comma list of indices to keep, e.g. "0,2"')
    p.add_argument("--remove", default=None, help="comma list of indices to drop")

    p = common(sub.add_parser("delete-chain", help="sequential one-point deletions"))
    p.add_argument("--remove", required=True, help="comma list of indices in deletion order")

    common(sub.add_parser("spd", help="strong positive definiteness certificate"))

    p = common(sub.add_parser("submodular", help="set function submodularity report"))
    p.add_argument("--kind", choices=("inverse", "shifted"), default="inverse")
    p.add_argument("--alpha", type=float, required=True, help="value on the empty set")

    common(sub.add_parser("identities", help="identity residual report and interlacing"))

    p = common(sub.add_parser("reproduce", help="emit reference example data"),
               needs_input=False)
    p.add_argument("--target", required=True, choices=REPRODUCE_TARGETS)

    return parser


def _write(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _load_scaled(args) -> MetricSpace:
    space = load_space(args.input)
    if args.t != 1.0:
        space = scale(space, args.t)
    return space


def _parse_index_list(raw: str, n: int) -> list[int]:
    try:
        items = [int(tok) for tok in raw.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise InputError(f"bad index list {raw!r}: {exc}") from exc
    for i in items:
        if i < 0 or i >= n:
            raise InputError(f"index {i} outside 0..{n - 1}")
    return items


# --- commands -------------------------------------------------------------------


def cmd_compute(args) -> int:
    space = _load_scaled(args)
    data = similarity_data(space)
    if data.magnitude is None:
        _write(args, dumps({
            "error": "no_solution",
            "message": "the weighting system has no solution; magnitude does not exist",
            "definiteness": data.definiteness.value,
        }) + "\n")
        return 2
    out = {
        "n": space.n,
        "definiteness": data.definiteness.value,
        "magnitude": data.magnitude,
        "weighting": data.weighting,
        "weighting_fraction": data.weighting / data.magnitude,
        "circumradius": None,
        "circumcenter_barycentric": None,
        "residuals": None,
    }
    if data.definiteness is Definiteness.POSITIVE_DEFINITE:
        radius, bary = embedding.circumradius_equilibrium(data.matrix)
        out["circumradius"] = radius
        out["circumcenter_barycentric"] = bary
    try:
        out["residuals"] = identities.identity_residuals(space).to_dict()
    except MathError:
        pass  # singular or zero-magnitude: residual identities do not apply
    _write(args, dumps(out) + "\n")
    return 0


def cmd_embed(args) -> int:
    space = _load_scaled(args)
    emb = embedding.similarity_embedding(space)
    _write(args, dumps(embedding.embedding_to_dict(emb)) + "\n")
    return 0


def cmd_sweep(args) -> int:
    space = load_space(args.input)  # grid carries the scaling
    grid = asymptotics.default_log_grid(args.t_min, args.t_max, args.grid)
    points = asymptotics.magnitude_sweep(space, grid)
    if args.format == "json":
        _write(args, dumps([p.to_dict() for p in points]) + "\n")
    else:
        _write(args, asymptotics.sweep_to_csv(points))
    return 0


def cmd_subspace(args) -> int:
    space = _load_scaled(args)
    if (args.subset is None) == (args.remove is None):
        raise InputError("provide exactly one of --subset or --remove")
    if args.subset is not None:
        keep = sorted(set(_parse_index_list(args.subset, space.n)))
    else:
        drop = set(_parse_index_list(args.remove, space.n))
        keep = [i for i in range(space.n) if i not in drop]
    result = subspace.subspace_magnitude_weighting(space, keep, check=True)
    oracle = subspace.recompute_subspace(space, keep)
    _write(args, dumps({
        "subset": list(result.subset),
        "magnitude": result.magnitude,
        "weighting": result.weighting,
        "derivation": result.derivation,
        "recomputed_magnitude": oracle.magnitude,
    }) + "\n")
    return 0


def cmd_delete_chain(args) -> int:
    space = _load_scaled(args)
    order = _parse_index_list(args.remove, space.n)
    results = subspace.delete_chain(space, order)
    _write(args, dumps({
        "order": order,
        "steps": [
            {
                "subset": list(r.subset),
                "magnitude": r.magnitude,
                "weighting": r.weighting,
                "derivation": r.derivation,
            }
            for r in results
        ],
    }) + "\n")
    return 0


def cmd_spd(args) -> int:
    space = _load_scaled(args)
    cert = spd.spd_certificate(space)
    out = {"certificate": cert.to_dict(), "semialgebraic": None}
    try:
        data = similarity_data(space)
        if data.definiteness is not Definiteness.SINGULAR:
            out["semialgebraic"] = spd.spd_semialgebraic_check(data.matrix)
    except MathError:
        pass
    _write(args, dumps(out) + "\n")
    return 0


def cmd_submodular(args) -> int:
    space = load_space(args.input)
    if args.kind == "inverse":
        if args.t != 1.0:
            space = scale(space, args.t)
        report = spd.check_inverse_submodularity(space, args.alpha)
    else:
        report = spd.check_shifted_submodularity(space, args.t, args.alpha)
    _write(args, dumps(report.to_dict()) + "\n")
    return 0


def cmd_identities(args) -> int:
    space = _load_scaled(args)
    residuals = identities.identity_residuals(space)
    inter = identities.interlacing_check(space)
    _write(args, dumps({
        "residuals": residuals.to_dict(),
        "interlacing": {
            "similarity_eigenvalues": inter.similarity_eigenvalues,
            "centered_eigenvalues": inter.centered_eigenvalues,
            "chain_ok": inter.chain_ok,
            "max_chain_violation": inter.max_chain_violation,
            "homogeneous": inter.homogeneous,
            "equality_ok": inter.equality_ok,
            "informational": inter.informational,
        },
    }) + "\n")
    return 0


# --- reproduce targets ------------------------------------------------------------


def _reproduce_fig1() -> str:
    grid = np.round(np.arange(0.0, 12.0 + 1e-9, 0.05), 10)
    rows = asymptotics.two_point_approximation(1.0, grid)
    return asymptotics.two_point_csv(rows)


def _reproduce_fig2() -> str:
    space = three_point_demo()
    grid = asymptotics.default_log_grid(0.01, 10.0, 32)
    lines = ["t,magnitude,w_frac_1,w_frac_2,w_frac_3,change_1,change_2,change_3"]
    for t in grid:
        scaled = scale(space, float(t))
        data = similarity_data(scaled)
        coeffs = identities.coefficient_data(scaled)
        w = data.weighting
        mag = data.magnitude
        w_frac = w / mag
        change = 2.0 * w * w / (coeffs.cbar * mag)
        cells = [fmt(t), fmt(mag)] + [fmt(v) for v in w_frac] + [fmt(v) for v in change]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _reproduce_example_2_3() -> str:
    space = from_distance_matrix([
        [0.0, math.log(2.0), math.log(10.0)],
        [math.log(2.0), 0.0, math.log(10.0)],
        [math.log(10.0), math.log(10.0), 0.0],
    ])
    data = similarity_data(space)
    emb = embedding.similarity_embedding(space)
    reference_centered = np.array([
        [1.9, -0.35, -1.55],
        [-0.35, 1.9, -1.55],
        [-1.55, -1.55, 3.1],
    ]) / 9.0
    sq = {}
    for i in range(3):
        for j in range(i + 1, 3):
            diff = emb.points[i] - emb.points[j]
            sq[f"{i}{j}"] = float(diff @ diff)
    out = {
        "similarity": data.matrix,
        "reference_similarity": [[1.0, 0.5, 0.1], [0.5, 1.0, 0.1], [0.1, 0.1, 1.0]],
        "centered": emb.gram,
        "reference_centered": reference_centered,
        "max_centered_deviation": float(np.max(np.abs(emb.gram - reference_centered))),
        "embedding_factor": emb.factor,
        "embedded_squared_distances": sq,
        "reference_embedded_squared_distances": {"01": 0.5, "02": 0.9, "12": 0.9},
        "magnitude": data.magnitude,
    }
    return dumps(out) + "\n"


def _reproduce_example_fb_2pt() -> str:
    entries = []
    for delta in (0.1, 0.5, 0.9):
        space = two_point_space(-math.log(delta))
        block = identities.fiedler_bapat_block(space)
        inv = 1.0 / (1.0 - delta)
        reference = 0.5 * np.array([
            [-(1.0 + delta), 1.0, 1.0],
            [1.0, inv, -inv],
            [1.0, -inv, inv],
        ])
        entries.append({
            "delta": delta,
            "bordered": block.bordered,
            "inverse_block": block.inverse_block,
            "reference_block": reference,
            "max_block_deviation": float(
                np.max(np.abs(block.inverse_block - reference))
            ),
            "product_residual": block.product_residual,
        })
    return dumps(entries) + "\n"


def cmd_reproduce(args) -> int:
    target = args.target
    if target == "fig1":
        text = _reproduce_fig1()
    elif target == "fig2":
        text = _reproduce_fig2()
    elif target == "example-2-3":
        text = _reproduce_example_2_3()
    elif target == "example-fb-2pt":
        text = _reproduce_example_fb_2pt()
    else:
        raise UnknownTarget(f"unknown reproduction target {target!r}")
    _write(args, text)
    return 0


DISPATCH = {
    "compute": cmd_compute,
    "embed": cmd_embed,
    "sweep": cmd_sweep,
    "subspace": cmd_subspace,
    "delete-chain": cmd_delete_chain,
    "spd": cmd_spd,
    "submodular": cmd_submodular,
    "identities": cmd_identities,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage problems; that slot is reserved
        # for mathematical failures here
        return 0 if exc.code in (0, None) else 1
    if args.tol_pd is not None:
        set_pd_cutoff_scale(args.tol_pd)
    try:
        return DISPATCH[args.command](args)
    except InputError as exc:
        _write(args, dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    except MathError as exc:
        _write(args, dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
