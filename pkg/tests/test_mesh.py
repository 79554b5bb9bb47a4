import numpy as np
import pytest

from quadorient import (
    DegenerateCellError,
    DuplicateEdgeError,
    MeshError,
    NonManifoldError,
    NotIncidentError,
    UnknownEdgeError,
    build_mesh,
    edge_cells,
    gen_structured,
    gen_square,
    GridSpec,
    opposite_edge,
    required_rel,
)


class TestBuildMesh:
    def test_one_cell_edges(self, one_cell_mesh):
        # boundary pairs of (0,1,3,2): {0,1},{1,3},{3,2},{2,0}
        assert one_cell_mesh.edge_keys() == [(0, 1), (0, 2), (1, 3), (2, 3)]
        for key in one_cell_mesh.edge_keys():
            assert edge_cells(one_cell_mesh, key) == [0]

    def test_degenerate_cell(self):
        with pytest.raises(DegenerateCellError):
            build_mesh(4, [(0, 1, 0, 2)])

    def test_nonmanifold_triplicated(self):
        # duplicating (0,1,4,3) gives {1,4} a third incidence via (1,2,5,4)
        with pytest.raises(NonManifoldError) as exc:
            build_mesh(6, [(0, 1, 4, 3), (1, 2, 5, 4), (0, 1, 4, 3)])
        assert exc.value.edge == (1, 4)
        assert exc.value.count == 3

    def test_duplicate_edges_pillow(self):
        # two cells glued along all four pairs: distinct topological edges
        # collapse onto single keys
        with pytest.raises(DuplicateEdgeError):
            build_mesh(4, [(0, 1, 3, 2), (0, 1, 3, 2)])

    def test_two_cell_ring_rejected(self):
        # 2-cell-circumference tube: top/bottom edge pairs collapse
        with pytest.raises((DuplicateEdgeError, NonManifoldError)):
            build_mesh(4, [(0, 2, 3, 1), (2, 0, 1, 3)])

    def test_vertex_out_of_range(self):
        with pytest.raises(MeshError):
            build_mesh(3, [(0, 1, 3, 2)])

    def test_cell_order_independence(self):
        mesh = gen_square(3, 2)
        perm = [4, 2, 0, 5, 1, 3]
        other = build_mesh(mesh.nv, mesh.cells[perm])
        assert np.array_equal(mesh.edges, other.edges)


class TestOppositeEdge:
    def test_examples(self, one_cell_mesh):
        assert opposite_edge(one_cell_mesh, 0, (0, 1)) == (2, 3)
        assert opposite_edge(one_cell_mesh, 0, (1, 3)) == (0, 2)

    def test_diagonal_not_incident(self, one_cell_mesh):
        with pytest.raises(NotIncidentError):
            opposite_edge(one_cell_mesh, 0, (1, 2))

    def test_involution(self):
        mesh = gen_square(3, 3)
        for c in range(mesh.num_cells):
            for k in range(4):
                e = mesh.edge_tuple(int(mesh.cell_edges[c, k]))
                opp = opposite_edge(mesh, c, e)
                assert opposite_edge(mesh, c, opp) == e


class TestRequiredRel:
    def test_same_cases(self, one_cell_mesh):
        assert required_rel(one_cell_mesh, 0, (0, 1)) == ((2, 3), 0)
        assert required_rel(one_cell_mesh, 0, (1, 3)) == ((0, 2), 0)

    def test_reflected_cell(self):
        # (1,0,2,3) is a reflection of (0,1,3,2); reflections preserve the
        # opposite-pair constraint, so the relation stays `same`
        mesh = build_mesh(4, [(1, 0, 2, 3)])
        assert required_rel(mesh, 0, (0, 1)) == ((2, 3), 0)

    def test_flip_case(self):
        # in cyclic order (0,1,2,3) both pairs run canonically as written,
        # which makes the parallel directions disagree
        mesh = build_mesh(4, [(0, 1, 2, 3)])
        assert required_rel(mesh, 0, (0, 1)) == ((2, 3), 1)

    def test_symmetry(self):
        mesh = gen_structured(GridSpec(3, 3, periodic_x=True, periodic_y=True))
        for c in range(mesh.num_cells):
            for k in range(4):
                e = mesh.edge_tuple(int(mesh.cell_edges[c, k]))
                opp, r = required_rel(mesh, c, e)
                back, r2 = required_rel(mesh, c, opp)
                assert back == e
                assert r2 == r

    def test_not_incident(self, one_cell_mesh):
        with pytest.raises(NotIncidentError):
            required_rel(one_cell_mesh, 0, (1, 2))


class TestEdgeCells:
    def test_interior_edge(self):
        mesh = gen_square(2, 1)
        # middle vertical edge {1,4} is shared by both cells
        assert edge_cells(mesh, (1, 4)) == [0, 1]

    def test_unknown_edge(self, one_cell_mesh):
        with pytest.raises(UnknownEdgeError):
            edge_cells(one_cell_mesh, (9, 10))

    def test_counts(self):
        mesh = gen_square(4, 3)
        counts = [len(edge_cells(mesh, k)) for k in mesh.edge_keys()]
        assert set(counts) <= {1, 2}
        # non-periodic grid: nx*(ny+1) + ny*(nx+1) edges, 2nx+2ny on boundary
        assert mesh.num_edges == 4 * 4 + 3 * 5
        assert counts.count(1) == 2 * 4 + 2 * 3
