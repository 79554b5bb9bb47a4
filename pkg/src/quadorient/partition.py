"""Domain decomposition and per-process preprocessing for the negotiation
protocol.

Each simulated process owns a set of cells plus every edge of those cells;
an edge whose two incident cells have different owners is *shared* and is
held by both sides.  Restricting the ribbon structure to one process's
cells breaks each ribbon into local *segments*.  Preprocessing orients each
domain locally, records which shared edges are linked by a segment
(``affects_edge``/``affects_orient``) and attaches a globally unique weight
``size * l + rank`` to every shared edge, where ``l`` is the segment index.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidPartitionError, MoebiusError
from .generate import SplitMix64
from .mesh import QuadMesh


@dataclass(frozen=True)
class CellPartition:
    """Assignment of every cell to one owner rank in [0, size)."""

    size: int
    owner: np.ndarray
    method: str

    def __post_init__(self):
        self.owner.setflags(write=False)

    def cells_of(self, rank: int) -> np.ndarray:
        return np.nonzero(self.owner == rank)[0]


def _block_factors(p: int, nx: int, ny: int) -> tuple[int, int]:
    best = None
    for px in range(1, p + 1):
        if p % px:
            continue
        py = p // px
        if nx % px or ny % py:
            continue
        key = (abs(px - py), px)
        if best is None or key < best[0]:
            best = (key, (px, py))
    if best is None:
        raise InvalidPartitionError(
            f"np={p} has no px*py factorization with px | nx={nx} "
            f"and py | ny={ny}")
    return best[1]


def cell_adjacency(mesh: QuadMesh) -> list[list[int]]:
    """Cell neighbour lists (cells sharing an edge), each sorted ascending."""
    adj: list[list[int]] = [[] for _ in range(mesh.num_cells)]
    interior = mesh.edge_cell[:, 1] >= 0
    for a, b in mesh.edge_cell[interior].tolist():
        adj[a].append(b)
        adj[b].append(a)
    for lst in adj:
        lst.sort()
    return adj


def partition_cells(mesh: QuadMesh, size: int,
                    method: str = "bfs") -> CellPartition:
    """Split the cells into ``size`` parts.

    ``block`` cuts a structured grid into a px-by-py process grid of equal
    rectangles (needs grid provenance and a factorization of ``size`` whose
    factors divide nx and ny).  ``bfs`` grows parts greedily by
    breadth-first search, sizes within one cell of the average.
    """
    if size < 1:
        raise InvalidPartitionError("process count must be >= 1")
    nc = mesh.num_cells
    if size == 1:
        return CellPartition(1, np.zeros(nc, dtype=np.int64), method)

    if method == "block":
        if mesh.grid_shape is None:
            raise InvalidPartitionError(
                "block partitioning needs a structured-grid mesh")
        nx, ny = mesh.grid_shape
        px, py = _block_factors(size, nx, ny)
        idx = np.arange(nc)
        cx = (idx % nx) // (nx // px)
        cy = (idx // nx) // (ny // py)
        return CellPartition(size, cy * px + cx, "block")

    if method != "bfs":
        raise InvalidPartitionError(f"unknown partition method {method!r}")

    base, extra = divmod(nc, size)
    targets = [base + 1 if r < extra else base for r in range(size)]
    adj = cell_adjacency(mesh)
    best = None
    for attempt in range(8):
        owner = _grow_parts(nc, size, targets, adj, attempt)
        broken = _disconnected_parts(owner, size, adj)
        if broken == 0:
            return CellPartition(size, np.asarray(owner, dtype=np.int64),
                                 "bfs")
        if best is None or broken < best[0]:
            best = (broken, owner)
    return CellPartition(size, np.asarray(best[1], dtype=np.int64), "bfs")


def _grow_parts(nc, size, targets, adj, attempt):
    """One greedy growth pass: peel parts off the unassigned region.

    Seeds sit at "corners" (cells with the fewest unassigned neighbours) and
    the frontier is a min-heap on the same key, so narrow necks are consumed
    before they can pinch off pockets.  ``attempt`` shifts the first seed
    choice; the caller retries with the next corner when a pass still
    strands a pocket.
    """
    owner = [-1] * nc
    undeg = [len(a) for a in adj]
    unassigned = set(range(nc))

    def take(c, rank):
        owner[c] = rank
        unassigned.discard(c)
        for nb in adj[c]:
            undeg[nb] -= 1

    for rank in range(size):
        quota = targets[rank]
        if quota == 0:
            continue
        ranked = sorted(unassigned, key=lambda c: (undeg[c], c))
        seed = ranked[min(attempt, len(ranked) - 1)]
        take(seed, rank)
        quota -= 1
        frontier: list[tuple[int, int]] = []
        for nb in adj[seed]:
            if owner[nb] < 0:
                heapq.heappush(frontier, (undeg[nb], nb))
        while quota:
            c = None
            while frontier:
                key, cand = heapq.heappop(frontier)
                if owner[cand] >= 0:
                    continue
                if key != undeg[cand]:      # stale key: re-rank
                    heapq.heappush(frontier, (undeg[cand], cand))
                    continue
                c = cand
                break
            if c is None:                   # frontier exhausted: jump
                c = min(unassigned, key=lambda cc: (undeg[cc], cc))
            take(c, rank)
            quota -= 1
            for nb in adj[c]:
                if owner[nb] < 0:
                    heapq.heappush(frontier, (undeg[nb], nb))
    return owner


def _disconnected_parts(owner, size, adj) -> int:
    count = 0
    cells_of: dict[int, set[int]] = {}
    for c, r in enumerate(owner):
        cells_of.setdefault(r, set()).add(c)
    for rank in range(size):
        cells = cells_of.get(rank)
        if not cells:
            continue
        start = min(cells)
        seen = {start}
        queue = deque((start,))
        while queue:
            c = queue.popleft()
            for nb in adj[c]:
                if nb in cells and nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
        if seen != cells:
            count += 1
    return count


@dataclass
class LocalDomain:
    """One process's view of the mesh: owned cells, their edges, and which
    of those edges are shared with which neighbour rank."""

    mesh: QuadMesh
    rank: int
    size: int
    cells: np.ndarray
    edges: list[int]                      # sorted global edge indices
    shared: set[int]
    neighbor: dict[int, int]              # shared edge -> remote rank
    edge_cells: dict[int, list[tuple[int, int]]]  # edge -> local (cell, slot)


def build_local_domain(mesh: QuadMesh, partition: CellPartition,
                       rank: int) -> LocalDomain:
    """Collect rank-local cells, edges, shared edges and neighbour ranks."""
    if not 0 <= rank < partition.size:
        raise InvalidPartitionError(f"rank {rank} out of range")
    cells = partition.cells_of(rank)
    owner = partition.owner
    incidence: dict[int, list[tuple[int, int]]] = {}
    for c in cells.tolist():
        for k in range(4):
            incidence.setdefault(int(mesh.cell_edges[c, k]), []).append((c, k))
    shared: set[int] = set()
    neighbor: dict[int, int] = {}
    for e in incidence:
        ca, cb = mesh.edge_cell[e]
        if cb < 0:
            continue
        oa, ob = int(owner[ca]), int(owner[cb])
        if oa != ob:
            shared.add(e)
            neighbor[e] = ob if oa == rank else oa
    return LocalDomain(mesh, rank, partition.size, cells,
                       sorted(incidence), shared, neighbor, incidence)


@dataclass
class LocalState:
    """Negotiation state of one process.

    ``init_flags`` is the orientation found by the purely local traversal,
    kept for the final wholesale re-alignment of interior edges.
    ``our_orient``/``our_weight`` are the live proposals for shared edges
    and are the only values mutated during negotiation.
    """

    domain: LocalDomain
    init_flags: dict[int, int]
    segments: list[list[int]]
    seg_of: dict[int, int]
    seg_shared_ends: list[list[int]]
    affects_edge: dict[int, int]
    affects_orient: dict[int, int]
    our_weight: dict[int, int]
    our_orient: dict[int, int]
    shared_sorted: list[int] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return self.domain.rank


def local_preprocess(domain: LocalDomain) -> LocalState:
    """Orient a domain locally and derive the negotiation arrays.

    Local ribbon segments get dense indices in traversal order; every edge
    of a segment shares the segment's index, hence its weight.  For a
    segment whose two endpoint edges are both shared, the endpoints are
    cross-linked through ``affects_edge`` with the relation of their local
    flags in ``affects_orient``.  Segments with at most one shared endpoint
    leave those arrays untouched, and closed local loops have nothing to
    negotiate at all.

    The seed orientation of a segment is a free choice (flipping a whole
    dependency class never breaks local consistency).  A real distributed
    mesh numbers entities per process, so corresponding segments on
    different ranks start from effectively arbitrary, disagreeing seeds;
    we model that with a deterministic pseudo-random seed flag per
    (rank, segment).  Without it, neighbouring domains of a nicely
    numbered mesh would always agree up front and the negotiation would
    degenerate to a single round at any process count.

    A Moebius strip lying entirely inside the domain is detected here.
    """
    mesh = domain.mesh
    ce = mesh.cell_edges
    rel = mesh.pair_rel
    incidence = domain.edge_cells

    flags: dict[int, int] = {}
    segments: list[list[int]] = []
    seg_of: dict[int, int] = {}
    for seed in domain.edges:
        if seed in flags:
            continue
        idx = len(segments)
        members: list[int] = []
        stack = [(seed, 0)]
        while stack:
            e, o = stack.pop()
            f = flags.get(e)
            if f is not None:
                if f != o:
                    raise MoebiusError(edge=mesh.edge_tuple(e),
                                       expected=f, found=o,
                                       detail=f"local to rank {domain.rank}")
                continue
            flags[e] = o
            seg_of[e] = idx
            members.append(e)
            for c, k in incidence[e]:
                stack.append((int(ce[c, (k + 2) % 4]), o ^ int(rel[c, k])))
        members.sort()
        segments.append(members)

    rng = SplitMix64((domain.rank + 1) * 0x9E3779B97F4A7C15)
    for members in segments:
        if rng.randrange(2):
            for e in members:
                flags[e] ^= 1

    affects_edge: dict[int, int] = {}
    affects_orient: dict[int, int] = {}
    seg_shared_ends: list[list[int]] = []
    for members in segments:
        ends = [e for e in members if len(incidence[e]) == 1]
        shared_ends = sorted(e for e in ends if e in domain.shared)
        seg_shared_ends.append(shared_ends)
        if len(shared_ends) == 2:
            u, v = shared_ends
            affects_edge[u] = v
            affects_edge[v] = u
            r = flags[u] ^ flags[v]
            affects_orient[u] = r
            affects_orient[v] = r

    size = domain.size
    rank = domain.rank
    our_weight = {e: size * seg_of[e] + rank for e in domain.shared}
    our_orient = {e: flags[e] for e in domain.shared}

    return LocalState(domain, flags, segments, seg_of, seg_shared_ends,
                      affects_edge, affects_orient, our_weight, our_orient,
                      shared_sorted=sorted(domain.shared))


def dump_partition(partition: CellPartition) -> str:
    """Debug text: one ``<cell> <rank>`` line per cell."""
    return "\n".join(f"{c} {int(r)}"
                     for c, r in enumerate(partition.owner.tolist())) + "\n"
