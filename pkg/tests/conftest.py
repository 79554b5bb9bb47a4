"""Shared fixtures and independent oracles for the test suite.

The oracles deliberately avoid the library's incidence tables: they work
straight off the raw cell tuples so they can catch systematic errors in the
mesh derivation itself.
"""

from __future__ import annotations

import pytest

from quadorient import QuadMesh, edge_key


def naive_ribbons(mesh: QuadMesh) -> set[frozenset]:
    """Orientation-dependency classes by repeated set merging over the raw
    cell tuples (edges connected iff opposite in some cell)."""
    groups: dict[tuple, set] = {}
    for row in mesh.cells.tolist():
        a, b, c, d = row
        for e1, e2 in ((edge_key(a, b), edge_key(c, d)),
                       (edge_key(b, c), edge_key(d, a))):
            g1 = groups.setdefault(e1, {e1})
            g2 = groups.setdefault(e2, {e2})
            if g1 is not g2:
                g1 |= g2
                for e in g2:
                    groups[e] = g1
    for lo, hi in mesh.edges.tolist():
        groups.setdefault((lo, hi), {(lo, hi)})
    return {frozenset(g) for g in groups.values()}


def naive_violations(mesh: QuadMesh, flag_of: dict) -> list:
    """Opposite-pair violations computed straight from the cell tuples.

    The constraint for the pair ({v0,v1}, {v2,v3}) of cell (v0,v1,v2,v3):
    the consistent direction taken as v0->v1 on one edge must pair with
    v3->v2 on the other.  flag==0 means the consistent direction is the
    canonical lo->hi one, so "runs as v0->v1" is flag == int(v0 > v1).
    """
    out = []
    for ci, (v0, v1, v2, v3) in enumerate(mesh.cells.tolist()):
        for a, b, c, d in ((v0, v1, v2, v3), (v1, v2, v3, v0)):
            e1 = edge_key(a, b)
            e2 = edge_key(c, d)
            runs_1 = flag_of[e1] == int(a > b)
            runs_2 = flag_of[e2] == int(d > c)
            if runs_1 != runs_2:
                out.append((ci, e1, e2))
    return out


def assert_consistent_naive(mesh: QuadMesh, omap) -> None:
    bad = naive_violations(mesh, omap.as_dict())
    assert bad == [], f"naive oracle found violations: {bad[:5]}"


@pytest.fixture(scope="session")
def one_cell_mesh():
    from quadorient import build_mesh
    return build_mesh(4, [(0, 1, 3, 2)])
