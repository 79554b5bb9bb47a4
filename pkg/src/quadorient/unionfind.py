"""Disjoint sets with an orientation bit per parent link.

Each element u stores a parent p(u) and a label w(u): the relative
orientation (SAME/FLIP under XOR) between u and its parent.  ``find``
returns the set representative together with the element's orientation
relative to it; ``union(u, v, rel)`` merges the sets so that
orient(u) XOR orient(v) == rel, and detects the Moebius case where u and v
are already connected with the opposite relation.

Reducing edge orientation to this structure: make every mesh edge an
element, union both opposite pairs of every cell with their required
relation, then read each edge's orientation off ``find``.
"""

from __future__ import annotations

from .errors import MoebiusError, UnknownElementError
from .mesh import QuadMesh, SAME
from .serial import OrientationMap

import numpy as np


class OrientedForest:
    """Union-find over n integer elements with XOR orientation labels.

    Merging is by rank, ties broken toward the larger element id becoming
    the root, which makes forests deterministic.  ``find`` applies path
    compression by default, rewriting both parent links and labels; pass
    ``compress=False`` for the read-only textbook variant.
    """

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.label = [SAME] * n
        self.rank = [0] * n

    def __len__(self) -> int:
        return len(self.parent)

    def _check(self, u: int) -> None:
        if not 0 <= u < len(self.parent):
            raise UnknownElementError(f"element {u} out of range")

    def find(self, u: int, compress: bool = True) -> tuple[int, int]:
        """(representative, orientation of u relative to it)."""
        self._check(u)
        parent = self.parent
        label = self.label
        path = []
        while parent[u] != u:
            path.append(u)
            u = parent[u]
        root = u
        # Accumulate orientations root-ward, compressing as we go back down.
        o = SAME
        for x in reversed(path):
            o ^= label[x]
            if compress:
                parent[x] = root
                label[x] = o
        return root, o

    def union(self, u: int, v: int, rel: int) -> None:
        """Merge the sets of u and v such that orient(u) XOR orient(v) == rel.

        If they are already in one set, verify the existing relation instead;
        a contradiction means the constraints close a Moebius strip.
        """
        ru, ou = self.find(u)
        rv, ov = self.find(v)
        if ru == rv:
            if ou ^ rel ^ ov:
                raise MoebiusError(edge=u, expected=ou ^ rel, found=ov,
                                   detail="contradictory union")
            return
        link = ou ^ rel ^ ov
        if self.rank[ru] < self.rank[rv]:
            root, child = rv, ru
        elif self.rank[ru] > self.rank[rv]:
            root, child = ru, rv
        else:
            root, child = (ru, rv) if ru > rv else (rv, ru)
            self.rank[root] += 1
        self.parent[child] = root
        self.label[child] = link

    def chain_length(self, u: int) -> int:
        """Parent hops from u to its representative (no compression)."""
        self._check(u)
        n = 0
        while self.parent[u] != u:
            u = self.parent[u]
            n += 1
        return n

    def groups(self) -> list[list[int]]:
        """Current set partition, each group sorted, ordered by minimum."""
        byroot: dict[int, list[int]] = {}
        for u in range(len(self.parent)):
            byroot.setdefault(self.find(u)[0], []).append(u)
        return sorted(byroot.values(), key=lambda g: g[0])

    def as_sets(self) -> set[frozenset]:
        return {frozenset(g) for g in self.groups()}


def build_orientation_forest(mesh: QuadMesh) -> OrientedForest:
    """Union both opposite pairs of every cell with their required relation."""
    forest = OrientedForest(mesh.num_edges)
    ce = mesh.cell_edges
    rel = mesh.pair_rel
    for c in range(mesh.num_cells):
        try:
            forest.union(int(ce[c, 0]), int(ce[c, 2]), int(rel[c, 0]))
            forest.union(int(ce[c, 1]), int(ce[c, 3]), int(rel[c, 1]))
        except MoebiusError as err:
            raise MoebiusError(edge=mesh.edge_tuple(err.edge),
                               expected=err.expected, found=err.found,
                               detail="contradictory union") from None
    return forest


def orient_unionfind(mesh: QuadMesh) -> OrientationMap:
    """Edge orientations via the oriented union-find reduction.

    Each edge's flag is its orientation relative to its ribbon's
    representative element; raises MoebiusError exactly when the traversal
    algorithm would.
    """
    forest = build_orientation_forest(mesh)
    flags = np.empty(mesh.num_edges, dtype=np.int8)
    for e in range(mesh.num_edges):
        flags[e] = forest.find(e)[1]
    return OrientationMap(mesh, flags)
