"""Command-line interface: generate, orient, verify, inspect ribbons,
simulate, and run scaling sweeps.

Exit codes: 0 success, 2 Moebius strip detected, 1 anything else
(usage, parse or I/O errors, inconsistent orientation for ``verify``).
"""

from __future__ import annotations

import argparse
import sys

from . import fileio
from .errors import MeshError, MoebiusError, ParseError
from .generate import (GridSpec, SplitMix64, gen_cubed_sphere, gen_structured,
                       shuffle_mesh)
from .parallel import fit_loglog_slope, run_parallel, scaling_sweep
from .partition import dump_partition, partition_cells
from .serial import orient_serial, ribbons
from .unionfind import orient_unionfind
from .verify import check_consistent

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MOEBIUS = 2


def _load_mesh(path: str, fmt: str | None):
    if fmt is None:
        fmt = "msh" if path.endswith(".msh") else "native"
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    return fileio.read_msh(text) if fmt == "msh" else fileio.read_native(text)


def _build_kind(args) -> "QuadMesh":
    kind = args.kind
    if kind == "square":
        return gen_structured(GridSpec(args.nx, args.ny))
    if kind == "torus":
        return gen_structured(GridSpec(args.nx, args.ny,
                                       periodic_x=True, periodic_y=True))
    if kind == "moebius":
        return gen_structured(GridSpec(args.nx, args.ny,
                                       periodic_x=True, twist_x=True))
    if kind == "cubed-sphere":
        return gen_cubed_sphere(args.n)
    raise MeshError(f"unknown mesh kind {kind!r}")


def _cmd_gen(args) -> int:
    mesh = _build_kind(args)
    if args.shuffle is not None:
        mesh = shuffle_mesh(mesh, args.shuffle)
    with open(args.out, "w", encoding="ascii") as fh:
        fh.write(fileio.write_native(mesh))
    print(f"wrote {args.out}: {mesh.nv} vertices, {mesh.num_cells} cells, "
          f"{mesh.num_edges} edges")
    return EXIT_OK


def _orient_with(args, mesh):
    if args.algo == "serial":
        return orient_serial(mesh)
    if args.algo == "unionfind":
        return orient_unionfind(mesh)
    if args.np < 1:
        raise MeshError("--np must be >= 1")
    return run_parallel(mesh, args.np, args.partitioner)[0]


def _cmd_orient(args) -> int:
    mesh = _load_mesh(args.mesh, args.format)
    omap = _orient_with(args, mesh)
    out = args.out or args.mesh + ".orient"
    with open(out, "w", encoding="ascii") as fh:
        fh.write(fileio.write_orientation(mesh, omap))
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    mesh = _load_mesh(args.mesh, args.format)
    with open(args.orientation, "r", encoding="ascii") as fh:
        omap = fileio.read_orientation(mesh, fh.read())
    violations = check_consistent(mesh, omap)
    if violations:
        for cell, e, opp in violations:
            print(f"cell {cell}: pair {e} / {opp} violated", file=sys.stderr)
        print(f"{len(violations)} violated pairs", file=sys.stderr)
        return EXIT_ERROR
    print("consistent")
    return EXIT_OK


def _cmd_ribbons(args) -> int:
    mesh = _load_mesh(args.mesh, args.format)
    part = ribbons(mesh)
    print(f"{len(part)} ribbons")
    for i, edges in enumerate(part.ribbons):
        keys = " ".join(f"{lo}-{hi}"
                        for lo, hi in (mesh.edge_tuple(e) for e in edges))
        print(f"ribbon {i} ({len(edges)} edges): {keys}")
    return EXIT_OK


def _cmd_scale(args) -> int:
    mesh = _build_kind(args)
    sizes = [int(s) for s in args.np.split(",")]
    rows = scaling_sweep(mesh, sizes, args.partitioner)
    with open(args.out, "w", encoding="ascii") as fh:
        fh.write(fileio.write_rounds_csv(rows))
    print(f"wrote {args.out}")
    if args.print_slope:
        print(f"slope {fit_loglog_slope(rows):.3f}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    mesh = _load_mesh(args.mesh, args.format)
    if args.np < 1:
        raise MeshError("--np must be >= 1")
    rank_order = None
    if args.seed is not None:
        def rank_order(round_index, size, _seed=args.seed):
            order = list(range(size))
            SplitMix64(_seed + round_index).shuffle(order)
            return order
    if args.emit_partition:
        partition = partition_cells(mesh, args.np, args.partitioner)
        with open(args.emit_partition, "w", encoding="ascii") as fh:
            fh.write(dump_partition(partition))
    omap, trace = run_parallel(mesh, args.np, args.partitioner,
                               rank_order=rank_order)
    print(f"rounds {trace.rounds} (k={trace.k_observed})")
    if args.emit_rounds:
        with open(args.emit_rounds, "w", encoding="ascii") as fh:
            fh.write(fileio.write_rounds_csv([(args.np, trace.rounds)]))
    if args.emit_orientation:
        with open(args.emit_orientation, "w", encoding="ascii") as fh:
            fh.write(fileio.write_orientation(mesh, omap))
    return EXIT_OK


def _add_mesh_arg(p):
    p.add_argument("mesh", help="mesh file (.mesh native, .msh Gmsh 2.2)")
    p.add_argument("--format", choices=("native", "msh"),
                   help="override extension-based format detection")


def _add_kind_args(p):
    p.add_argument("kind", choices=("square", "torus", "moebius",
                                    "cubed-sphere"))
    p.add_argument("--nx", type=int, default=4, help="cells in x")
    p.add_argument("--ny", type=int, default=None,
                   help="cells in y (default: nx; 1 for moebius)")
    p.add_argument("--n", type=int, default=2,
                   help="cells per cube edge (cubed-sphere)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="quadorient",
        description="Consistent edge orientations for quadrilateral meshes.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a mesh file")
    _add_kind_args(p)
    p.add_argument("--shuffle", type=int, metavar="SEED",
                   help="apply a seeded random relabeling")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("orient", help="compute an edge orientation")
    _add_mesh_arg(p)
    p.add_argument("--algo", choices=("serial", "unionfind", "parallel"),
                   default="serial")
    p.add_argument("--np", type=int, default=1,
                   help="simulated process count (parallel)")
    p.add_argument("--partitioner", choices=("block", "bfs"), default="bfs")
    p.add_argument("--out", help="orientation file (default: MESH.orient)")
    p.set_defaults(fn=_cmd_orient)

    p = sub.add_parser("verify", help="check an orientation file")
    _add_mesh_arg(p)
    p.add_argument("orientation")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("ribbons", help="list orientation-dependency classes")
    _add_mesh_arg(p)
    p.set_defaults(fn=_cmd_ribbons)

    p = sub.add_parser("scale", help="rounds-vs-processes sweep to CSV")
    _add_kind_args(p)
    p.add_argument("--np", required=True,
                   help="comma-separated process counts, e.g. 4,16,64")
    p.add_argument("--partitioner", choices=("block", "bfs"), default="block")
    p.add_argument("--out", required=True)
    p.add_argument("--print-slope", action="store_true")
    p.set_defaults(fn=_cmd_scale)

    p = sub.add_parser("simulate", help="run the negotiation simulator")
    _add_mesh_arg(p)
    p.add_argument("--np", type=int, required=True)
    p.add_argument("--partitioner", choices=("block", "bfs"), default="bfs")
    p.add_argument("--seed", type=int,
                   help="seed for a randomized rank schedule (results do "
                        "not depend on it; scheduling knob only)")
    p.add_argument("--emit-rounds", metavar="FILE")
    p.add_argument("--emit-orientation", metavar="FILE")
    p.add_argument("--emit-partition", metavar="FILE")
    p.set_defaults(fn=_cmd_simulate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    if getattr(args, "kind", None) == "moebius" and args.ny is None:
        args.ny = 1
    if getattr(args, "ny", "token") is None:
        args.ny = args.nx
    try:
        return args.fn(args)
    except MoebiusError as err:
        print(f"Moebius strip detected: {err}", file=sys.stderr)
        return EXIT_MOEBIUS
    except (MeshError, ParseError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
