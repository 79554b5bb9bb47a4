"""Round-based simulation of the distributed shared-edge negotiation.

The simulator is a superstep scheduler over in-memory mailboxes: every
round, each process snapshots its shared-edge proposals to its neighbours,
then every process runs one negotiation pass against the snapshots it
received, and a global OR-reduction of the conflict flags decides whether
another round is needed.  Processes read only snapshots and write only
their own state, so results are independent of the execution order of
ranks within a round (and of whether ranks run on a thread pool).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import MoebiusError
from .mesh import QuadMesh
from .partition import (LocalState, build_local_domain, local_preprocess,
                        partition_cells)
from .serial import OrientationMap, ribbons


@dataclass(frozen=True)
class RoundMessage:
    """One neighbour's proposals: edge -> (orientation, weight), covering
    exactly the shared edges between sender and receiver."""

    sender: int
    payload: dict[int, tuple[int, int]]


@dataclass
class NegotiationTrace:
    """Record of one simulated run.

    ``rounds`` counts loop iterations including the final conflict-free
    pass.  ``k_observed`` is the largest number of local segments composing
    any single ribbon of the global mesh; the protocol needs at most
    ``k_observed + 1`` rounds.
    """

    rounds: int
    conflicts: tuple[bool, ...]
    rank_conflicts: tuple[tuple[bool, ...], ...]
    k_observed: int
    final_shared: tuple
    states: list[LocalState] = field(default_factory=list, compare=False,
                                     repr=False)


def collect_outgoing(state: LocalState) -> list[RoundMessage]:
    """Snapshot this rank's proposals, one message per neighbour rank."""
    by_dest: dict[int, dict[int, tuple[int, int]]] = {}
    for e in state.shared_sorted:
        dest = state.domain.neighbor[e]
        by_dest.setdefault(dest, {})[e] = (state.our_orient[e],
                                           state.our_weight[e])
    return [RoundMessage(state.rank, by_dest[d]) for d in sorted(by_dest)]


def negotiate_round(state: LocalState, incoming) -> bool:
    """One negotiation pass; returns True when another round is needed.

    Shared edges are visited in ascending canonical order with in-place
    updates, so a propagation is visible when the loop reaches the paired
    edge later.  Equal weights with unequal orientations prove a Moebius
    strip; a smaller local weight adopts the remote weight and orientation
    and pushes the change through the local segment, flagging a conflict
    exactly when the paired edge flips.
    """
    their: dict[int, tuple[int, int]] = {}
    for msg in incoming:
        for e, value in msg.payload.items():
            if e not in state.domain.shared:
                raise ValueError(f"message for non-shared edge {e}")
            if state.domain.neighbor[e] != msg.sender:
                raise ValueError(f"edge {e} is not shared with rank {msg.sender}")
            their[e] = value
    if len(their) != len(state.domain.shared):
        raise ValueError("incoming messages do not cover all shared edges")

    conflict = False
    our_orient = state.our_orient
    our_weight = state.our_weight
    for e in state.shared_sorted:
        their_orient, their_weight = their[e]
        w = our_weight[e]
        if w == their_weight:
            if our_orient[e] != their_orient:
                raise MoebiusError(edge=state.domain.mesh.edge_tuple(e),
                                   expected=our_orient[e], found=their_orient)
        elif w < their_weight:
            our_weight[e] = their_weight
            our_orient[e] = their_orient
            e2 = state.affects_edge.get(e)
            if e2 is not None:
                o2 = state.affects_orient[e] ^ their_orient
                if our_orient[e2] != o2:
                    conflict = True
                our_weight[e2] = their_weight
                our_orient[e2] = o2
    return conflict


def _finalize(mesh: QuadMesh, states: list[LocalState]) -> OrientationMap:
    """Re-align interior edges after agreement and merge the local maps.

    A segment whose shared endpoint ended up opposite its initial local
    orientation is flipped wholesale; both endpoints of a segment always
    demand the same flip after a conflict-free round, and both owners of a
    shared edge must agree, so the checks here are defensive.
    """
    flags = np.full(mesh.num_edges, -1, dtype=np.int8)
    for state in states:
        for members, shared_ends in zip(state.segments,
                                        state.seg_shared_ends):
            flips = {state.our_orient[u] ^ state.init_flags[u]
                     for u in shared_ends}
            if len(flips) > 1:
                raise MoebiusError(edge=mesh.edge_tuple(shared_ends[0]),
                                   detail="segment endpoints disagree")
            flip = flips.pop() if flips else 0
            for e in members:
                f = state.init_flags[e] ^ flip
                if flags[e] < 0:
                    flags[e] = f
                elif flags[e] != f:
                    raise MoebiusError(edge=mesh.edge_tuple(e),
                                       expected=int(flags[e]), found=f,
                                       detail="owners disagree after rounds")
    return OrientationMap(mesh, flags)


def _max_segments_per_ribbon(mesh: QuadMesh,
                             states: list[LocalState]) -> int:
    part = ribbons(mesh)
    counts = [0] * len(part)
    for state in states:
        for members in state.segments:
            counts[int(part.ribbon_of[members[0]])] += 1
    return max(counts, default=0)


def run_parallel(mesh: QuadMesh, size: int, method: str = "bfs",
                 rank_order=None, threads: int | None = None
                 ) -> tuple[OrientationMap, NegotiationTrace]:
    """Simulate the negotiation protocol over ``size`` logical processes.

    ``rank_order`` (round_index, size) -> iterable of ranks fixes the
    execution order inside a round; ``threads`` runs ranks on a thread
    pool instead.  Both are observability/testing knobs: traces must be
    identical for every schedule.  A Moebius detection on any rank aborts
    the whole run at the round boundary.
    """
    partition = partition_cells(mesh, size, method)
    states = [local_preprocess(build_local_domain(mesh, partition, r))
              for r in range(size)]

    conflict_hist: list[bool] = []
    rank_hist: list[tuple[bool, ...]] = []
    rounds = 0
    while True:
        rounds += 1
        # snapshot all proposals before any rank negotiates
        inbox: list[list[RoundMessage]] = [[] for _ in range(size)]
        for state in states:
            for msg in collect_outgoing(state):
                dest = state.domain.neighbor[next(iter(msg.payload))]
                inbox[dest].append(msg)

        results: dict[int, bool] = {}
        failures: dict[int, MoebiusError] = {}

        def step(r: int) -> None:
            try:
                results[r] = negotiate_round(states[r], inbox[r])
            except MoebiusError as err:
                failures[r] = err

        order = list(rank_order(rounds - 1, size)) if rank_order else range(size)
        if threads:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(step, order))
        else:
            for r in order:
                step(r)
        if failures:
            raise failures[min(failures)]

        flags = tuple(results[r] for r in range(size))
        conflict = any(flags)
        conflict_hist.append(conflict)
        rank_hist.append(flags)
        if not conflict:
            break

    omap = _finalize(mesh, states)
    final_shared = tuple(
        tuple((e, state.our_orient[e], state.our_weight[e])
              for e in state.shared_sorted)
        for state in states)
    trace = NegotiationTrace(rounds, tuple(conflict_hist), tuple(rank_hist),
                             _max_segments_per_ribbon(mesh, states),
                             final_shared, states=states)
    return omap, trace


def scaling_sweep(mesh: QuadMesh, sizes, method: str = "block"
                  ) -> list[tuple[int, int]]:
    """(process count, rounds) per entry of ``sizes`` on a fixed mesh."""
    return [(p, run_parallel(mesh, p, method)[1].rounds) for p in sizes]


def fit_loglog_slope(rows) -> float:
    """Least-squares slope of log(rounds) against log(P)."""
    rows = list(rows)
    p = np.log([float(r[0]) for r in rows])
    y = np.log([float(r[1]) for r in rows])
    return float(np.polyfit(p, y, 1)[0])
