import pytest

from quadorient import (
    MissingEdgeError,
    NotARibbonError,
    OrientationMap,
    SplitMix64,
    check_consistent,
    compare_verdicts,
    flip_ribbon,
    gen_cubed_sphere,
    gen_moebius,
    gen_square,
    gen_torus,
    orient_serial,
    orient_unionfind,
    ribbons,
    shuffle_mesh_with_maps,
)

from conftest import naive_violations


class TestCheckConsistent:
    def test_serial_output_passes(self):
        for mesh in (gen_square(4, 4), gen_torus(5, 5), gen_cubed_sphere(2)):
            assert check_consistent(mesh, orient_serial(mesh)) == []

    def test_all_same_on_one_cell(self, one_cell_mesh):
        omap = OrientationMap(one_cell_mesh)
        omap.flags[:] = 0
        assert check_consistent(one_cell_mesh, omap) == []

    def test_single_flip_reports_bridging_cell(self):
        mesh = gen_square(2, 1)
        omap = orient_serial(mesh)
        bad = omap.copy()
        bad[(0, 1)] ^= 1  # one edge of cell 0's two-edge class
        violations = check_consistent(mesh, bad)
        assert violations == [(0, (0, 1), (3, 4))]

    def test_incomplete_map_rejected(self, one_cell_mesh):
        omap = OrientationMap(one_cell_mesh)
        with pytest.raises(MissingEdgeError):
            check_consistent(one_cell_mesh, omap)

    def test_agrees_with_naive_oracle(self):
        mesh = gen_torus(5, 5)
        omap = orient_serial(mesh)
        rng = SplitMix64(17)
        for _ in range(10):
            bad = omap.copy()
            for _ in range(3):
                bad.flags[rng.randrange(mesh.num_edges)] ^= 1
            ours = {(c, e1, e2) for c, e1, e2 in check_consistent(mesh, bad)}
            naive = set()
            for c, e1, e2 in naive_violations(mesh, bad.as_dict()):
                naive.add((c, e1, e2) if (c, e1, e2) in ours else (c, e2, e1))
            assert ours == naive


class TestFlipRibbon:
    def test_involution(self):
        mesh = gen_square(3, 3)
        omap = orient_serial(mesh)
        rib = set(ribbons(mesh).ribbons[2])
        assert flip_ribbon(flip_ribbon(omap, rib), rib) == omap

    def test_whole_ribbon_flip_stays_consistent(self):
        mesh = gen_cubed_sphere(2)
        omap = orient_serial(mesh)
        for r in ribbons(mesh).ribbons:
            assert check_consistent(mesh, flip_ribbon(omap, set(r))) == []

    def test_subset_flip_breaks(self):
        mesh = gen_square(4, 1)
        omap = orient_serial(mesh)
        part = ribbons(mesh)
        long_ribbon = max(part.ribbons, key=len)
        subset = set(long_ribbon[:2])
        broken = omap.flipped(subset)
        assert check_consistent(mesh, broken) != []

    def test_not_a_ribbon(self):
        mesh = gen_square(4, 1)
        omap = orient_serial(mesh)
        part = ribbons(mesh)
        with pytest.raises(NotARibbonError):
            flip_ribbon(omap, set(part.ribbons[0][:1]) if len(part.ribbons[0]) > 1
                        else set(part.ribbons[0]) | set(part.ribbons[1]))
        with pytest.raises(NotARibbonError):
            flip_ribbon(omap, set())

    def test_accepts_edge_keys(self):
        mesh = gen_square(2, 2)
        omap = orient_serial(mesh)
        part = ribbons(mesh)
        keys = part.ribbon_keys(0)
        assert check_consistent(mesh, flip_ribbon(omap, keys)) == []


class TestTwoOrientationsDiffer:
    def test_by_whole_ribbon_flips(self):
        # any two valid orientations differ exactly by a set of class flips
        for mesh in (gen_torus(5, 5), gen_cubed_sphere(2)):
            a = orient_serial(mesh)
            b = orient_unionfind(mesh)
            diff = {e for e in range(mesh.num_edges)
                    if a.flags[e] != b.flags[e]}
            part = ribbons(mesh)
            touched = {int(part.ribbon_of[e]) for e in diff}
            full = set()
            for r in touched:
                full |= set(part.ribbons[r])
            assert diff == full


class TestShuffleTransport:
    def test_validity_invariant_under_relabeling(self):
        mesh = gen_cubed_sphere(2)
        omap = orient_serial(mesh)
        for seed in range(3):
            shuf, vmap, _ = shuffle_mesh_with_maps(mesh, seed)
            moved = OrientationMap(shuf)
            for (a, b), flag in omap.as_dict().items():
                pa, pb = vmap[a], vmap[b]
                # flag is relative to the canonical direction; renaming can
                # reverse which endpoint is smaller
                moved[(pa, pb) if pa < pb else (pb, pa)] = (
                    flag ^ int((pa < pb) != (a < b)))
            assert check_consistent(shuf, moved) == []


class TestCompareVerdicts:
    def test_torus_all_succeed(self):
        report = compare_verdicts(gen_torus(5, 5), p_values=(1, 2, 4))
        assert report.all_ok

    def test_moebius_all_abort(self):
        report = compare_verdicts(gen_moebius(5, 1), p_values=(1, 2, 4))
        assert report.all_moebius
        assert all(e.witness is not None for e in report.entries)

    def test_shuffled_cubed_sphere(self):
        from quadorient import shuffle_mesh
        for seed in range(4):
            mesh = shuffle_mesh(gen_cubed_sphere(4), seed)
            assert compare_verdicts(mesh, p_values=(2,)).all_ok
