"""Algorithm-agnostic validity checks and cross-algorithm comparison."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MoebiusError, NotARibbonError
from .mesh import EdgeKey, QuadMesh
from .serial import OrientationMap, orient_serial, ribbons


def check_consistent(mesh: QuadMesh, omap: OrientationMap) -> list[tuple]:
    """All violated opposite-pair constraints; empty list iff consistent.

    Checks only the mesh topology and the flag map: every cell must satisfy
    flag(e) XOR flag(e') == required relation for both of its opposite
    pairs.  Returns (cell, edge, opposite_edge) per violation.
    """
    omap.require_complete()
    if mesh.num_cells == 0:
        return []
    f = omap.flags[mesh.cell_edges]                       # (nc, 4)
    bad = (f ^ np.roll(f, -2, axis=1)) != mesh.pair_rel   # (nc, 4)
    out = []
    for c, k in zip(*np.nonzero(bad[:, :2])):
        e = int(mesh.cell_edges[c, k])
        o = int(mesh.cell_edges[c, k + 2])
        out.append((int(c), mesh.edge_tuple(e), mesh.edge_tuple(o)))
    return out


def flip_ribbon(omap: OrientationMap, ribbon) -> OrientationMap:
    """Complement exactly one whole orientation-dependency class.

    ``ribbon`` is a set of edge keys (or indices) that must be exactly one
    class of the mesh's ribbon partition; flipping a whole class preserves
    consistency, anything else does not.
    """
    mesh = omap.mesh
    idx = {e if isinstance(e, int) else mesh.edge_index(e) for e in ribbon}
    if not idx:
        raise NotARibbonError("empty edge set")
    part = ribbons(mesh)
    cls = part.ribbons[int(part.ribbon_of[next(iter(idx))])]
    if idx != set(cls):
        raise NotARibbonError("edge set is not a ribbon of this mesh")
    return omap.flipped(idx)


@dataclass
class AlgorithmVerdict:
    name: str
    verdict: str                  # "ok" or "moebius"
    consistent: bool | None       # None when the algorithm aborted
    witness: EdgeKey | None = None


@dataclass
class VerdictReport:
    entries: list[AlgorithmVerdict] = field(default_factory=list)

    @property
    def verdicts(self) -> set[str]:
        return {e.verdict for e in self.entries}

    @property
    def agree(self) -> bool:
        return len(self.verdicts) == 1

    @property
    def all_ok(self) -> bool:
        return self.agree and self.verdicts == {"ok"} and all(
            e.consistent for e in self.entries)

    @property
    def all_moebius(self) -> bool:
        return self.agree and self.verdicts == {"moebius"}

    def __str__(self):
        lines = [f"{e.name}: {e.verdict}"
                 + ("" if e.consistent is None
                    else f" (consistent={e.consistent})")
                 for e in self.entries]
        return "\n".join(lines)


def compare_verdicts(mesh: QuadMesh, p_values=(1, 2, 4),
                     method: str = "bfs") -> VerdictReport:
    """Run all three algorithms and report verdict agreement.

    Failures are part of the report, never raised.
    """
    from .parallel import run_parallel
    from .unionfind import orient_unionfind

    report = VerdictReport()

    def record(name, fn):
        try:
            result = fn()
        except MoebiusError as err:
            report.entries.append(
                AlgorithmVerdict(name, "moebius", None, witness=err.edge))
        else:
            ok = not check_consistent(mesh, result)
            report.entries.append(AlgorithmVerdict(name, "ok", ok))

    record("serial", lambda: orient_serial(mesh))
    record("unionfind", lambda: orient_unionfind(mesh))
    for p in p_values:
        record(f"parallel(np={p})",
               lambda p=p: run_parallel(mesh, p, method)[0])
    return report
