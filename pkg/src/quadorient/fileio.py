"""Text formats: native mesh, orientation files, rounds CSV, and a Gmsh
MSH 2.2 ASCII reader (4-node quadrangles only).

All writers emit LF line endings and ASCII decimal integers so round trips
are byte-exact across platforms.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    EmptyInputError,
    MalformedSectionError,
    MissingEdgeError,
    NoQuadranglesError,
    ParseError,
    UnknownEdgeError,
    UnsupportedVersionError,
)
from .mesh import QuadMesh, build_mesh
from .serial import OrientationMap


def write_native(mesh: QuadMesh) -> str:
    """``quadmesh <nv> <nc>`` header, then one cyclic 4-tuple per line."""
    lines = [f"quadmesh {mesh.nv} {mesh.num_cells}"]
    lines.extend(" ".join(map(str, row)) for row in mesh.cells.tolist())
    return "\n".join(lines) + "\n"


def read_native(text: str) -> QuadMesh:
    """Inverse of :func:`write_native`; validates topology while building."""
    lines = [ln for ln in text.splitlines()]
    if not lines:
        raise ParseError("empty mesh file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "quadmesh":
        raise ParseError(f"bad header {lines[0]!r}")
    try:
        nv, nc = int(head[1]), int(head[2])
    except ValueError:
        raise ParseError(f"bad header {lines[0]!r}") from None
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != nc:
        raise ParseError(f"expected {nc} cell lines, found {len(body)}")
    cells = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 4:
            raise ParseError(f"cell line {ln!r} does not have 4 vertices")
        try:
            cells.append(tuple(int(p) for p in parts))
        except ValueError:
            raise ParseError(f"non-integer vertex in line {ln!r}") from None
    return build_mesh(nv, np.asarray(cells, dtype=np.int64).reshape(nc, 4))


def write_orientation(mesh: QuadMesh, omap: OrientationMap) -> str:
    """One line ``<lo> <hi> <dir>`` per edge, sorted by (lo, hi).

    ``+`` means the consistent direction is the canonical lo -> hi, ``-``
    the reverse.
    """
    omap.require_complete()
    lines = [f"{lo} {hi} {'-' if f else '+'}"
             for (lo, hi), f in zip(mesh.edges.tolist(), omap.flags.tolist())]
    return "\n".join(lines) + "\n"


def read_orientation(mesh: QuadMesh, text: str) -> OrientationMap:
    """Inverse of :func:`write_orientation` against a known mesh."""
    omap = OrientationMap(mesh)
    seen = 0
    for ln in text.splitlines():
        if not ln.strip():
            continue
        parts = ln.split()
        if len(parts) != 3 or parts[2] not in ("+", "-"):
            raise ParseError(f"bad orientation line {ln!r}")
        try:
            lo, hi = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"bad orientation line {ln!r}") from None
        idx = mesh.edge_index((lo, hi))
        if omap.flags[idx] >= 0:
            raise ParseError(f"duplicate line for edge ({lo}, {hi})")
        omap.flags[idx] = 1 if parts[2] == "-" else 0
        seen += 1
    if seen != mesh.num_edges:
        raise MissingEdgeError(
            f"orientation file covers {seen} of {mesh.num_edges} edges")
    return omap


def write_rounds_csv(rows) -> str:
    """``P,rounds`` header plus one integer row per entry."""
    rows = list(rows)
    if not rows:
        raise EmptyInputError("no rows to write")
    lines = ["P,rounds"]
    lines.extend(f"{int(p)},{int(r)}" for p, r in rows)
    return "\n".join(lines) + "\n"


def _section(lines: list[str], name: str) -> list[str]:
    try:
        start = lines.index(f"${name}")
        end = lines.index(f"$End{name}")
    except ValueError:
        raise MalformedSectionError(f"missing ${name} section") from None
    if end < start:
        raise MalformedSectionError(f"${name} section out of order")
    return lines[start + 1:end]


def read_msh(source) -> QuadMesh:
    """Read a Gmsh MSH 2.2 ASCII file, keeping only 4-node quadrangles.

    Node ids are compacted to dense 0-based vertex ids preserving ascending
    order; coordinates, physical tags and non-quad elements are ignored.
    """
    text = source.read() if hasattr(source, "read") else source
    lines = [ln.strip() for ln in text.splitlines()]

    fmt = _section(lines, "MeshFormat")
    if not fmt:
        raise MalformedSectionError("empty $MeshFormat section")
    version = fmt[0].split()[0]
    if version != "2.2":
        raise UnsupportedVersionError(
            f"MSH version {version} not supported (only 2.2 ASCII)")

    nodes = _section(lines, "Nodes")
    if not nodes:
        raise MalformedSectionError("empty $Nodes section")
    try:
        n_nodes = int(nodes[0])
    except ValueError:
        raise MalformedSectionError("bad node count") from None
    if len(nodes) - 1 != n_nodes:
        raise MalformedSectionError(
            f"$Nodes declares {n_nodes} nodes, found {len(nodes) - 1}")
    node_ids = []
    for ln in nodes[1:]:
        parts = ln.split()
        if len(parts) < 4:
            raise MalformedSectionError(f"bad node line {ln!r}")
        try:
            node_ids.append(int(parts[0]))
        except ValueError:
            raise MalformedSectionError(f"bad node line {ln!r}") from None
    if len(set(node_ids)) != len(node_ids):
        raise MalformedSectionError("duplicate node ids")
    dense = {nid: i for i, nid in enumerate(sorted(node_ids))}

    elems = _section(lines, "Elements")
    if not elems:
        raise MalformedSectionError("empty $Elements section")
    try:
        n_elems = int(elems[0])
    except ValueError:
        raise MalformedSectionError("bad element count") from None
    if len(elems) - 1 != n_elems:
        raise MalformedSectionError(
            f"$Elements declares {n_elems} elements, found {len(elems) - 1}")
    quads = []
    for ln in elems[1:]:
        parts = ln.split()
        try:
            etype = int(parts[1])
            ntags = int(parts[2])
            node_refs = [int(p) for p in parts[3 + ntags:]]
        except (IndexError, ValueError):
            raise MalformedSectionError(f"bad element line {ln!r}") from None
        if etype != 3:          # 3 = 4-node quadrangle
            continue
        if len(node_refs) != 4:
            raise MalformedSectionError(
                f"quadrangle with {len(node_refs)} nodes: {ln!r}")
        try:
            quads.append(tuple(dense[n] for n in node_refs))
        except KeyError as missing:
            raise MalformedSectionError(
                f"element references unknown node {missing}") from None
    if not quads:
        raise NoQuadranglesError("no 4-node quadrangle elements in file")
    return build_mesh(len(node_ids),
                      np.asarray(quads, dtype=np.int64))
