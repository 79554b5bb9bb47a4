import numpy as np
import pytest

from quadorient import (
    FLIP,
    MissingEdgeError,
    MoebiusError,
    OrientationMap,
    check_consistent,
    gen_cubed_sphere,
    gen_moebius,
    gen_square,
    gen_torus,
    orient_serial,
    ribbons,
    shuffle_mesh,
)

from conftest import assert_consistent_naive, naive_ribbons


class TestOrientSerial:
    def test_one_cell_all_same(self, one_cell_mesh):
        omap = orient_serial(one_cell_mesh)
        assert omap.flags.tolist() == [0, 0, 0, 0]
        assert check_consistent(one_cell_mesh, omap) == []

    def test_moebius_error_carries_witness(self):
        mesh = gen_moebius(3, 1)
        with pytest.raises(MoebiusError) as exc:
            orient_serial(mesh)
        assert exc.value.edge in mesh.edge_keys()
        assert {exc.value.expected, exc.value.found} == {0, 1}

    def test_torus_succeeds(self):
        mesh = gen_torus(3, 3)
        omap = orient_serial(mesh)
        assert check_consistent(mesh, omap) == []
        assert_consistent_naive(mesh, omap)

    def test_shuffled_meshes(self):
        for seed in range(4):
            mesh = shuffle_mesh(gen_square(5, 4), seed)
            omap = orient_serial(mesh)
            assert check_consistent(mesh, omap) == []
            assert_consistent_naive(mesh, omap)

    def test_linear_counters(self):
        for mesh in (gen_square(6, 6), gen_torus(5, 5), gen_cubed_sphere(3)):
            omap = orient_serial(mesh)
            assert omap.visit_count == mesh.num_edges
            assert omap.call_count <= 3 * mesh.num_edges

    def test_flipped_seed_complements_every_ribbon(self):
        mesh = shuffle_mesh(gen_square(4, 4), 9)
        base = orient_serial(mesh)
        flipped = orient_serial(mesh, seed_flag=FLIP)
        assert np.array_equal(flipped.flags, base.flags ^ 1)
        assert check_consistent(mesh, flipped) == []

    def test_long_strip_iterative(self):
        # a single ribbon much deeper than any recursion limit
        mesh = gen_square(20000, 1)
        omap = orient_serial(mesh)
        assert omap.is_complete
        assert check_consistent(mesh, omap) == []


class TestRibbons:
    def test_one_cell(self, one_cell_mesh):
        part = ribbons(one_cell_mesh)
        assert sorted(part.sizes()) == [2, 2]

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_square_ribbon_count(self, n):
        part = ribbons(gen_square(n, n))
        assert len(part) == 2 * n
        assert sorted(part.sizes()) == [n + 1] * 2 * n

    def test_cube_belts(self):
        part = ribbons(gen_cubed_sphere(1))
        assert len(part) == 3
        assert part.sizes() == [4, 4, 4]

    def test_matches_naive_closure(self):
        for mesh in (gen_square(4, 3), gen_torus(5, 5), gen_cubed_sphere(2),
                     shuffle_mesh(gen_cubed_sphere(2), 5)):
            part = ribbons(mesh)
            got = {frozenset(mesh.edge_tuple(e) for e in r)
                   for r in part.ribbons}
            assert got == naive_ribbons(mesh)

    def test_partition_covers_all_edges(self):
        mesh = gen_square(5, 3)
        part = ribbons(mesh)
        assert sum(part.sizes()) == mesh.num_edges
        assert (part.ribbon_of >= 0).all()


class TestOrientationMap:
    def test_lookup_and_missing(self, one_cell_mesh):
        omap = OrientationMap(one_cell_mesh)
        with pytest.raises(MissingEdgeError):
            omap[(0, 1)]
        omap[(0, 1)] = 1
        assert omap[(0, 1)] == 1
        assert not omap.is_complete

    def test_equality_and_copy(self, one_cell_mesh):
        a = orient_serial(one_cell_mesh)
        b = a.copy()
        assert a == b
        b.flags[0] ^= 1
        assert a != b
