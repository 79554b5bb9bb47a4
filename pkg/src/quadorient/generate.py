"""Deterministic mesh generators: structured grids, tori, twisted strips,
cubed spheres, and a seeded topology-preserving relabeler."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpecError
from .mesh import QuadMesh, build_mesh

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Explicit 64-bit PRNG (splitmix64) so seeded results are reproducible
    in any language.

    state' = state + 0x9E3779B97F4A7C15 (mod 2^64)
    z = state'; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9; z = (z ^ z>>27) *
    0x94D049BB133111EB; output = z ^ z>>31.

    ``randrange(n)`` is ``next() % n`` (the modulo bias is irrelevant for the
    small ranges used here) and ``shuffle`` is the descending Fisher-Yates
    loop ``for i = len-1 .. 1: swap(x[i], x[next() % (i+1)])``.
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def randrange(self, n: int) -> int:
        return self.next() % n

    def shuffle(self, xs: list) -> None:
        for i in range(len(xs) - 1, 0, -1):
            j = self.next() % (i + 1)
            xs[i], xs[j] = xs[j], xs[i]


@dataclass(frozen=True)
class GridSpec:
    """Structured-grid request.

    ``periodic_x``/``periodic_y`` identify the ends of that axis;
    ``twist_x`` identifies the x ends with a vertical flip, producing a
    Moebius strip.  Periodic axes need at least 3 cells so no two distinct
    edges collapse onto the same vertex pair.
    """

    nx: int
    ny: int
    periodic_x: bool = False
    periodic_y: bool = False
    twist_x: bool = False

    def validate(self) -> None:
        if self.nx < 1 or self.ny < 1:
            raise InvalidSpecError("nx and ny must be >= 1")
        if self.twist_x and not self.periodic_x:
            raise InvalidSpecError("twist_x requires periodic_x")
        if self.periodic_x and self.nx < 3:
            raise InvalidSpecError("periodic_x requires nx >= 3")
        if self.periodic_y and self.ny < 3:
            raise InvalidSpecError("periodic_y requires ny >= 3")
        if self.twist_x and self.periodic_y:
            raise InvalidSpecError(
                "twisted x together with periodic y (Klein-bottle-like "
                "gluing) is not supported")


def gen_structured(spec: GridSpec) -> QuadMesh:
    """Structured grid of nx-by-ny cells, vertices numbered row-major.

    Cell (i, j) has cyclic vertices (v(i,j), v(i+1,j), v(i+1,j+1), v(i,j+1)),
    with indices wrapped (and vertically flipped for twist_x) on periodic
    axes.
    """
    spec.validate()
    nx, ny = spec.nx, spec.ny
    ncols = nx if spec.periodic_x else nx + 1
    nrows = ny if spec.periodic_y else ny + 1

    def vid(ii: np.ndarray, jj: np.ndarray) -> np.ndarray:
        if spec.periodic_x:
            wrap = ii == nx
            if spec.twist_x:
                jj = np.where(wrap, ny - jj, jj)
            ii = np.where(wrap, 0, ii)
        if spec.periodic_y:
            jj = np.where(jj == ny, 0, jj)
        return jj * ncols + ii

    ci = np.tile(np.arange(nx, dtype=np.int64), ny)
    cj = np.repeat(np.arange(ny, dtype=np.int64), nx)
    cells = np.stack(
        [vid(ci, cj), vid(ci + 1, cj), vid(ci + 1, cj + 1), vid(ci, cj + 1)],
        axis=1)
    return build_mesh(ncols * nrows, cells, grid_shape=(nx, ny))


def gen_square(nx: int, ny: int) -> QuadMesh:
    return gen_structured(GridSpec(nx, ny))


def gen_torus(nx: int, ny: int) -> QuadMesh:
    return gen_structured(GridSpec(nx, ny, periodic_x=True, periodic_y=True))


def gen_moebius(nx: int, ny: int = 1) -> QuadMesh:
    return gen_structured(GridSpec(nx, ny, periodic_x=True, twist_x=True))


def gen_cubed_sphere(n: int) -> QuadMesh:
    """Closed quadrilateral mesh of a cube surface, n-by-n cells per face.

    Only the topology matters here: the six faces are glued along cube edges
    and corners by identifying lattice points of the integer cube [0, n]^3.
    Every edge ends up with exactly two incident cells.
    """
    if n < 1:
        raise InvalidSpecError("n must be >= 1")
    m = n + 1
    r = np.arange(m, dtype=np.int64)
    ii, jj = np.meshgrid(r, r, indexing="ij")
    ii, jj = ii.ravel(), jj.ravel()
    zeros = np.zeros_like(ii)
    tops = np.full_like(ii, n)
    faces = [
        (ii, jj, zeros), (ii, jj, tops),
        (ii, zeros, jj), (ii, tops, jj),
        (zeros, ii, jj), (tops, ii, jj),
    ]
    coords = np.concatenate(
        [np.stack(f, axis=1) for f in faces], axis=0)
    codes = (coords[:, 0] * m + coords[:, 1]) * m + coords[:, 2]
    uniq, inv = np.unique(codes, return_inverse=True)
    point = inv.reshape(6, m, m)

    cells = []
    for f in range(6):
        p = point[f]
        cells.append(np.stack(
            [p[:-1, :-1].ravel(), p[1:, :-1].ravel(),
             p[1:, 1:].ravel(), p[:-1, 1:].ravel()], axis=1))
    return build_mesh(len(uniq), np.concatenate(cells, axis=0))


def shuffle_mesh_with_maps(mesh: QuadMesh, seed: int):
    """Seeded random relabeling: returns (mesh', vertex_map, cell_map).

    ``vertex_map[old] = new``; ``cell_map[new] = old``.  Applies, in order:
    a Fisher-Yates permutation of vertex ids, a random rotation plus optional
    reflection of every cell tuple (original cell order), and a Fisher-Yates
    permutation of the cell list.  The result is isomorphic to the input, so
    ribbon structure and orientability are preserved.  Grid provenance is
    dropped (cell indices no longer follow the grid layout).
    """
    rng = SplitMix64(seed)
    vmap = list(range(mesh.nv))
    rng.shuffle(vmap)
    vmap_arr = np.asarray(vmap, dtype=np.int64)
    relabeled = vmap_arr[mesh.cells]

    transformed = []
    for row in relabeled.tolist():
        rot = rng.randrange(4)
        if rng.randrange(2):
            row = row[::-1]
        transformed.append(tuple(row[rot:] + row[:rot]))

    cmap = list(range(mesh.num_cells))
    rng.shuffle(cmap)
    cells = [transformed[old] for old in cmap]
    return build_mesh(mesh.nv, cells), vmap, cmap


def shuffle_mesh(mesh: QuadMesh, seed: int) -> QuadMesh:
    """Topology-preserving random relabeling of a mesh (see
    :func:`shuffle_mesh_with_maps`)."""
    return shuffle_mesh_with_maps(mesh, seed)[0]
