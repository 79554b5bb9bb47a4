"""Serial edge orientation by traversal, and ribbon extraction.

Fixing one edge's orientation forces the opposite edge in every incident
cell, so orientations propagate along chains of opposite edges ("ribbons").
The serial algorithm seeds each unvisited edge with SAME and walks its
ribbon; meeting an already-oriented edge with the wrong flag proves the
cells form a Moebius strip and no consistent orientation exists.
"""

from __future__ import annotations

import numpy as np

from .errors import MissingEdgeError, MoebiusError, UnknownEdgeError
from .mesh import SAME, EdgeKey, QuadMesh


class OrientationMap:
    """Per-edge orientation flags (SAME/FLIP) for one mesh.

    Flags are stored in an int8 array aligned with ``mesh.edges``; -1 marks
    an edge not yet visited.  Lookup by canonical endpoint pair via
    ``omap[(lo, hi)]``.
    """

    def __init__(self, mesh: QuadMesh, flags: np.ndarray | None = None):
        self.mesh = mesh
        if flags is None:
            flags = np.full(mesh.num_edges, -1, dtype=np.int8)
        else:
            flags = np.asarray(flags, dtype=np.int8).copy()
            if flags.shape != (mesh.num_edges,):
                raise ValueError("flag array does not match the edge count")
        self.flags = flags

    def __getitem__(self, key: EdgeKey) -> int:
        f = int(self.flags[self.mesh.edge_index(key)])
        if f < 0:
            raise MissingEdgeError(f"edge {tuple(key)} has no orientation")
        return f

    def __setitem__(self, key: EdgeKey, flag: int) -> None:
        self.flags[self.mesh.edge_index(key)] = flag

    @property
    def is_complete(self) -> bool:
        return bool((self.flags >= 0).all())

    def require_complete(self) -> None:
        if not self.is_complete:
            n = int((self.flags < 0).sum())
            raise MissingEdgeError(f"{n} edges have no orientation")

    def copy(self) -> "OrientationMap":
        return OrientationMap(self.mesh, self.flags)

    def flipped(self, edge_indices) -> "OrientationMap":
        """New map with exactly the given edge indices complemented."""
        out = self.copy()
        idx = np.asarray(list(edge_indices), dtype=np.int64)
        out.flags[idx] ^= 1
        return out

    def as_dict(self) -> dict[EdgeKey, int]:
        return {self.mesh.edge_tuple(i): int(f)
                for i, f in enumerate(self.flags)}

    def __eq__(self, other) -> bool:
        return (isinstance(other, OrientationMap)
                and np.array_equal(self.mesh.edges, other.mesh.edges)
                and np.array_equal(self.flags, other.flags))

    __hash__ = None

    def __repr__(self):
        done = int((self.flags >= 0).sum())
        return f"OrientationMap({done}/{self.mesh.num_edges} edges)"


class RibbonPartition:
    """The edge set partitioned into orientation-dependency classes.

    Two edges are in the same class iff they are connected by a chain of
    within-cell opposite pairs.  Each class forms a path or a closed loop
    through the mesh.
    """

    def __init__(self, mesh: QuadMesh, ribbons: list[list[int]],
                 ribbon_of: np.ndarray):
        self.mesh = mesh
        self.ribbons = ribbons          # sorted edge indices per class
        self.ribbon_of = ribbon_of      # per-edge class index
        self.ribbon_of.setflags(write=False)

    def __len__(self) -> int:
        return len(self.ribbons)

    def sizes(self) -> list[int]:
        return [len(r) for r in self.ribbons]

    def ribbon_keys(self, i: int) -> list[EdgeKey]:
        return [self.mesh.edge_tuple(e) for e in self.ribbons[i]]

    def as_sets(self) -> set[frozenset]:
        return {frozenset(r) for r in self.ribbons}


def orient_serial(mesh: QuadMesh, seed_flag: int = SAME) -> OrientationMap:
    """Orient every edge by traversal; raise MoebiusError if impossible.

    Edges are seeded in canonical key order; the first edge of each ribbon
    receives ``seed_flag`` (SAME by default) and the flag propagates through
    opposite pairs.  The traversal is an explicit iterative walk, never
    call-stack recursion, so ribbons of any length are fine.

    The returned map carries two counters used by the linear-time checks:
    ``visit_count`` (edges assigned, equals the edge count) and
    ``call_count`` (orientation attempts, at most 3x the edge count).
    """
    cell0, cell1, opp0, rel0, opp1, rel1 = mesh.walk_tables()
    ne = mesh.num_edges
    flags = [-1] * ne
    visits = 0
    calls = 0

    for seed in range(ne):
        calls += 1
        if flags[seed] != -1:
            continue
        flags[seed] = seed_flag
        visits += 1
        for c, first_opp, first_rel in (
                (cell0[seed], opp0[seed], rel0[seed]),
                (cell1[seed], opp1[seed], rel1[seed])):
            if c < 0:
                continue
            e = first_opp
            o = seed_flag ^ first_rel
            prev_cell = c
            while True:
                calls += 1
                f = flags[e]
                if f != -1:
                    if f != o:
                        raise MoebiusError(edge=mesh.edge_tuple(e),
                                           expected=f, found=o)
                    break
                flags[e] = o
                visits += 1
                ca = cell0[e]
                nxt = cell1[e] if ca == prev_cell else ca
                if nxt < 0:
                    break
                if cell0[e] == nxt:
                    e, o = opp0[e], o ^ rel0[e]
                else:
                    e, o = opp1[e], o ^ rel1[e]
                prev_cell = nxt

    out = OrientationMap(mesh, np.asarray(flags, dtype=np.int8))
    out.visit_count = visits
    out.call_count = calls
    return out


def ribbons(mesh: QuadMesh) -> RibbonPartition:
    """Partition the edges into ribbons (cached on the mesh)."""
    if mesh._ribbons is not None:
        return mesh._ribbons
    cell0, cell1, opp0, rel0, opp1, rel1 = mesh.walk_tables()
    ne = mesh.num_edges
    rid = [-1] * ne
    classes: list[list[int]] = []

    for seed in range(ne):
        if rid[seed] != -1:
            continue
        idx = len(classes)
        members = [seed]
        rid[seed] = idx
        for c, first_opp in ((cell0[seed], opp0[seed]),
                             (cell1[seed], opp1[seed])):
            if c < 0:
                continue
            e = first_opp
            prev_cell = c
            while rid[e] == -1:
                rid[e] = idx
                members.append(e)
                ca = cell0[e]
                nxt = cell1[e] if ca == prev_cell else ca
                if nxt < 0:
                    break
                e = opp0[e] if cell0[e] == nxt else opp1[e]
                prev_cell = nxt
        members.sort()
        classes.append(members)

    part = RibbonPartition(mesh, classes, np.asarray(rid, dtype=np.int64))
    mesh._ribbons = part
    return part
