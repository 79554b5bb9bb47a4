"""Quadrilateral mesh topology: cells, derived edges, incidence and opposite pairs.

Vertices are dense integers in ``[0, nv)``.  A cell is a 4-tuple of distinct
vertices in cyclic order.  An edge is identified by its unordered endpoint
pair and stored canonically as ``(lo, hi)`` with ``lo < hi``; the canonical
direction of an edge is lo -> hi.  An orientation flag per edge says whether
the consistent direction equals the canonical one (SAME) or opposes it (FLIP).
Flags form the two-element XOR group.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateCellError,
    DuplicateEdgeError,
    MeshError,
    NonManifoldError,
    NotIncidentError,
    UnknownEdgeError,
)

#: Orientation flag: consistent direction equals the canonical lo -> hi direction.
SAME = 0
#: Orientation flag: consistent direction is hi -> lo.
FLIP = 1

EdgeKey = tuple[int, int]


def edge_key(a: int, b: int) -> EdgeKey:
    """Canonical (lo, hi) form of the endpoint pair {a, b}."""
    return (a, b) if a < b else (b, a)


class QuadMesh:
    """Immutable topology of a quadrilateral mesh.

    Built through :func:`build_mesh`; all arrays are read-only afterwards so
    a mesh can be shared freely between threads.

    Attributes
    ----------
    nv : int
        Vertex count.
    cells : (nc, 4) int array
        Cyclic vertex tuples.
    edges : (ne, 2) int array
        Canonical endpoint pairs, sorted by (lo, hi).  The row index of an
        edge is its *edge index*; because rows are sorted, ascending edge
        index equals ascending canonical key order.
    cell_edges : (nc, 4) int array
        Edge index of boundary pair k = (cells[c,k], cells[c,(k+1)%4]).
        Slot k and slot (k+2)%4 hold opposite edges.
    pair_rel : (nc, 4) int8 array
        Required orientation relation (SAME/FLIP) between the edge in slot k
        and its opposite edge, per the equal-orientation rule for opposite
        edges of a quadrilateral.
    grid_shape : (nx, ny) or None
        Provenance tag set by the structured generator; enables the block
        partitioner.
    """

    def __init__(self, nv, cells, edges, cell_edges, edge_cell, edge_slot,
                 pair_rel, grid_shape=None):
        self.nv = int(nv)
        self.cells = cells
        self.edges = edges
        self.cell_edges = cell_edges
        # edge_cell[e] = (first cell, second cell or -1); edge_slot analogous.
        self.edge_cell = edge_cell
        self.edge_slot = edge_slot
        self.pair_rel = pair_rel
        self.grid_shape = grid_shape
        for a in (self.cells, self.edges, self.cell_edges, self.edge_cell,
                  self.edge_slot, self.pair_rel):
            a.setflags(write=False)
        self._edge_codes = None
        self._walk_tables = None
        self._ribbons = None

    # -- basic counts -------------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return self.nv

    @property
    def num_cells(self) -> int:
        return len(self.cells)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    # -- lookups ------------------------------------------------------------

    def edge_index(self, key: EdgeKey) -> int:
        """Edge index for a canonical (lo, hi) pair; UnknownEdgeError if absent."""
        lo, hi = key
        if lo > hi:
            lo, hi = hi, lo
        if self._edge_codes is None:
            self._edge_codes = self.edges[:, 0] * self.nv + self.edges[:, 1]
        code = lo * self.nv + hi
        i = int(np.searchsorted(self._edge_codes, code))
        if i >= self.num_edges or self._edge_codes[i] != code:
            raise UnknownEdgeError(f"({lo}, {hi}) is not an edge of this mesh")
        return i

    def edge_tuple(self, index: int) -> EdgeKey:
        lo, hi = self.edges[index]
        return (int(lo), int(hi))

    def edge_keys(self) -> list[EdgeKey]:
        return [tuple(row) for row in self.edges.tolist()]

    def cells_of_edge(self, index: int) -> tuple[int, ...]:
        """Incident cell indices of an edge (length 1 or 2)."""
        c0, c1 = self.edge_cell[index]
        return (int(c0),) if c1 < 0 else (int(c0), int(c1))

    def walk_tables(self):
        """Flat per-edge incidence tables as plain lists (hot-loop friendly).

        Returns (cell0, cell1, opp0, rel0, opp1, rel1): for each edge, its
        incident cells (-1 if absent) and, within each, the opposite edge
        index plus the required relation.
        """
        if self._walk_tables is None:
            ec = self.edge_cell
            es = self.edge_slot
            ne = self.num_edges
            opp = np.empty((ne, 2), dtype=np.int64)
            rel = np.zeros((ne, 2), dtype=np.int8)
            for side in (0, 1):
                present = ec[:, side] >= 0
                c = ec[present, side]
                s = es[present, side]
                opp[present, side] = self.cell_edges[c, (s + 2) % 4]
                opp[~present, side] = -1
                rel[present, side] = self.pair_rel[c, s]
            self._walk_tables = (
                ec[:, 0].tolist(), ec[:, 1].tolist(),
                opp[:, 0].tolist(), rel[:, 0].tolist(),
                opp[:, 1].tolist(), rel[:, 1].tolist(),
            )
        return self._walk_tables

    def __repr__(self):
        return (f"QuadMesh(nv={self.nv}, cells={self.num_cells}, "
                f"edges={self.num_edges})")


def build_mesh(nv: int, cells: Sequence | np.ndarray, grid_shape=None) -> QuadMesh:
    """Derive the full edge topology from cyclic cell tuples.

    Rejects cells with repeated vertices (DegenerateCellError), vertex pairs
    incident to more than two cells (NonManifoldError), and configurations
    where two cells are glued along three or more edges, which is how
    distinct topological edges sharing both endpoints show up under pairwise
    edge identification (DuplicateEdgeError).
    """
    cells = np.ascontiguousarray(np.asarray(cells, dtype=np.int64).reshape(-1, 4))
    nc = len(cells)
    nv = int(nv)
    if nv < 0:
        raise MeshError("vertex count must be non-negative")
    if nc:
        if cells.min() < 0 or cells.max() >= nv:
            raise MeshError("cell references a vertex outside [0, nv)")
        srt = np.sort(cells, axis=1)
        dup = (srt[:, 1:] == srt[:, :-1]).any(axis=1)
        if dup.any():
            bad = int(np.nonzero(dup)[0][0])
            raise DegenerateCellError(
                f"cell {bad} {tuple(cells[bad])} repeats a vertex")

    a = cells
    b = np.roll(cells, -1, axis=1)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    codes = (lo * nv + hi).ravel()
    uniq, inv = np.unique(codes, return_inverse=True)
    ne = len(uniq)
    cell_edges = inv.reshape(nc, 4).astype(np.int64)

    counts = np.bincount(inv, minlength=ne)
    if (counts > 2).any():
        # Witness: the pair whose third incidence appears first in slot order.
        seen: dict[int, int] = {}
        for slot, e in enumerate(inv.tolist()):
            n = seen.get(e, 0) + 1
            seen[e] = n
            if n == 3:
                witness = (int(uniq[e] // nv), int(uniq[e] % nv))
                raise NonManifoldError(witness, int(counts[e]))

    # Incidence: up to two (cell, slot) pairs per edge.
    order = np.argsort(inv, kind="stable")
    starts = np.zeros(ne + 1, dtype=np.int64)
    np.cumsum(counts, out=starts[1:])
    edge_cell = np.full((ne, 2), -1, dtype=np.int64)
    edge_slot = np.full((ne, 2), -1, dtype=np.int64)
    first = order[starts[:-1]]
    edge_cell[:, 0] = first // 4
    edge_slot[:, 0] = first % 4
    has2 = counts == 2
    second = order[starts[:-1][has2] + 1]
    edge_cell[has2, 1] = second // 4
    edge_slot[has2, 1] = second % 4

    # Two cells sharing >= 3 pairwise-identified edges means a collapsed
    # tube/pillow: distinct topological edges with identical endpoints.
    if has2.any():
        ca = edge_cell[has2, 0]
        cb = edge_cell[has2, 1]
        if (ca == cb).any():
            e = int(np.nonzero(has2)[0][np.nonzero(ca == cb)[0][0]])
            raise DuplicateEdgeError(
                f"cell {int(ca[0])} meets itself across pair "
                f"{(int(uniq[e] // nv), int(uniq[e] % nv))}")
        pair_codes = np.minimum(ca, cb) * nc + np.maximum(ca, cb)
        upairs, pcounts = np.unique(pair_codes, return_counts=True)
        if (pcounts >= 3).any():
            code = int(upairs[np.argmax(pcounts >= 3)])
            raise DuplicateEdgeError(
                f"cells {code // nc} and {code % nc} share "
                f"{int(pcounts.max())} vertex pairs; distinct edges with "
                f"equal endpoints are not representable")

    edges = np.column_stack((uniq // nv, uniq % nv))

    # Orientation relation of each opposite pair.  With the cell written
    # (v0, v1, v2, v3) and the pair ({v0,v1}, {v2,v3}), a consistent
    # orientation must give v0->v1 and v3->v2 the same meaning: the flags
    # disagree exactly when one of the two runs canonically and the other
    # does not.
    asc = a < b                       # slot k runs canonically as written
    pair_rel = (asc == np.roll(asc, -2, axis=1)).astype(np.int8)

    return QuadMesh(nv, cells, edges, cell_edges, edge_cell, edge_slot,
                    pair_rel, grid_shape=grid_shape)


def _slot_in_cell(mesh: QuadMesh, cell: int, e: EdgeKey) -> int:
    if not 0 <= cell < mesh.num_cells:
        raise MeshError(f"cell index {cell} out of range")
    try:
        idx = mesh.edge_index(e)
    except UnknownEdgeError:
        raise NotIncidentError(f"{tuple(e)} is not an edge of cell {cell}") from None
    row = mesh.cell_edges[cell]
    hit = np.nonzero(row == idx)[0]
    if len(hit) == 0:
        raise NotIncidentError(f"{tuple(e)} is not an edge of cell {cell}")
    return int(hit[0])


def opposite_edge(mesh: QuadMesh, cell: int, e: EdgeKey) -> EdgeKey:
    """The edge of `cell` sharing no vertex with `e`."""
    k = _slot_in_cell(mesh, cell, e)
    return mesh.edge_tuple(int(mesh.cell_edges[cell, (k + 2) % 4]))


def required_rel(mesh: QuadMesh, cell: int, e: EdgeKey) -> tuple[EdgeKey, int]:
    """Opposite edge of `e` in `cell` and the orientation relation it must keep.

    Returns (e', r) such that any consistent orientation satisfies
    flag(e) XOR flag(e') == r.
    """
    k = _slot_in_cell(mesh, cell, e)
    opp = mesh.edge_tuple(int(mesh.cell_edges[cell, (k + 2) % 4]))
    return opp, int(mesh.pair_rel[cell, k])


def edge_cells(mesh: QuadMesh, e: EdgeKey) -> list[int]:
    """Incident cell indices of an edge (1 for boundary, 2 for interior)."""
    return list(mesh.cells_of_edge(mesh.edge_index(e)))
