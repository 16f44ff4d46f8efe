import numpy as np
import pytest

from funrips import (SampledSpace, boundary_matrices, build_function_cech_euclidean,
                     build_function_rips, dump_complex, load_complex,
                     rescale_horizontal)
from funrips.filtration import BifilteredComplex


def planar(coords, values):
    return SampledSpace.from_coords(np.asarray(coords, float),
                                    np.asarray(values, float))


class TestFunctionRips:
    def test_single_vertex(self):
        sp = SampledSpace(np.zeros((1, 1)), np.array([[0.3]]))
        c = build_function_rips(sp, 0)
        assert c.n_simplices(0) == 1
        assert tuple(c.grades[0][0]) == (0.0, 0.3)

    def test_edge_grade_is_diameter_and_max(self):
        sp = planar([[0, 0], [1, 0]], [0.3, 0.7])
        c = build_function_rips(sp, 1)
        assert c.n_simplices(1) == 1
        assert tuple(c.grades[1][0]) == (1.0, 0.7)

    def test_scale_grade_is_exact_max_pairwise(self):
        rng = np.random.default_rng(0)
        sp = planar(rng.uniform(0, 2, (7, 2)), rng.uniform(0, 1, 7))
        c = build_function_rips(sp, 2)
        for row, g in zip(c.verts[2], c.grades[2]):
            diam = max(sp.dist[a, b] for a in row for b in row)
            assert g[0] == diam
            assert np.allclose(g[1:], sp.values[row].max(axis=0))

    def test_monotone_grading(self):
        rng = np.random.default_rng(1)
        sp = planar(rng.uniform(0, 2, (8, 2)), rng.uniform(0, 1, 8))
        c = build_function_rips(sp, 3)
        # constructor check path
        BifilteredComplex([v.copy() for v in c.verts],
                          [g.copy() for g in c.grades], c.max_dim, check=True)

    def test_infinite_distances_never_create_simplices(self):
        dist = np.array([[0.0, 1.0, np.inf],
                         [1.0, 0.0, np.inf],
                         [np.inf, np.inf, 0.0]])
        sp = SampledSpace(dist, np.zeros(3))
        c = build_function_rips(sp, 2)
        assert c.n_simplices(1) == 1
        assert c.n_simplices(2) == 0

    def test_max_scale_cap(self):
        sp = planar([[0, 0], [1, 0], [3, 0]], [0, 0, 0])
        c = build_function_rips(sp, 1, max_scale=2.0)
        assert c.n_simplices(1) == 2  # the length-3 edge is dropped

    def test_empty_space(self):
        sp = SampledSpace(np.zeros((0, 0)), np.zeros((0, 1)))
        c = build_function_rips(sp, 2)
        assert c.n_simplices(0) == 0


class TestFunctionCech:
    def test_edge_ball_radius_is_half_length(self):
        sp = planar([[0, 0], [2, 0]], [0, 0])
        c = build_function_cech_euclidean(sp, 1)
        assert c.grades[1][0][0] == pytest.approx(1.0)

    def test_equilateral_triangle_circumradius(self):
        sp = planar([[0, 0], [1, 0], [0.5, np.sqrt(3) / 2]], [0, 0, 0])
        c = build_function_cech_euclidean(sp, 2)
        # brute-force ball search oracle on a fine center grid
        pts = sp.coords
        grid = np.linspace(-0.2, 1.2, 141)
        centers = np.array([(x, y) for x in grid for y in grid])
        rad = np.linalg.norm(centers[:, None, :] - pts[None, :, :], axis=2).max(axis=1)
        assert c.grades[2][0][0] == pytest.approx(rad.min(), abs=1e-2)
        assert c.grades[2][0][0] == pytest.approx(1 / np.sqrt(3))

    def test_scale_between_half_diam_and_diam(self):
        rng = np.random.default_rng(2)
        sp = planar(rng.uniform(0, 2, (7, 2)), rng.uniform(0, 1, 7))
        cech = build_function_cech_euclidean(sp, 2)
        for row, g in zip(cech.verts[2], cech.grades[2]):
            diam = max(sp.dist[a, b] for a in row for b in row)
            assert diam / 2 - 1e-9 <= g[0] <= diam + 1e-9

    def test_sandwich_with_rips(self):
        # cech grade <= rips grade <= 2 * cech grade, simplexwise
        rng = np.random.default_rng(3)
        sp = planar(rng.uniform(0, 2, (8, 2)), rng.uniform(0, 1, 8))
        rips = build_function_rips(sp, 2)
        cech = build_function_cech_euclidean(sp, 2)
        for d in (1, 2):
            ri = {tuple(map(int, v)): g[0] for v, g in zip(rips.verts[d], rips.grades[d])}
            ci = {tuple(map(int, v)): g[0] for v, g in zip(cech.verts[d], cech.grades[d])}
            assert set(ri) == set(ci)
            for key in ri:
                assert ci[key] <= ri[key] + 1e-9
                assert ri[key] <= 2 * ci[key] + 1e-9

    def test_requires_coordinates(self):
        sp = SampledSpace(np.zeros((1, 1)), np.zeros(1))
        with pytest.raises(ValueError, match="coordinates"):
            build_function_cech_euclidean(sp, 1)


class TestRescaleHorizontal:
    def test_identity(self):
        sp = planar([[0, 0], [1, 0]], [0.3, 0.7])
        c = build_function_rips(sp, 1)
        c2 = rescale_horizontal(c, 1.0)
        assert np.array_equal(c2.grades[1], c.grades[1])

    def test_scales_first_coordinate_only(self):
        sp = planar([[0, 0], [1, 0]], [0.5, 0.5])
        c = build_function_rips(sp, 1)
        c2 = rescale_horizontal(c, 2.0)
        assert tuple(c2.grades[1][0]) == (2.0, 0.5)

    def test_double_then_halve_bit_exact(self):
        rng = np.random.default_rng(4)
        sp = planar(rng.uniform(0, 2, (6, 2)), rng.uniform(0, 1, 6))
        c = build_function_rips(sp, 2)
        back = rescale_horizontal(rescale_horizontal(c, 2.0), 0.5)
        for d in range(3):
            assert np.array_equal(back.grades[d], c.grades[d])
            assert np.array_equal(back.verts[d], c.verts[d])

    def test_rejects_nonpositive(self):
        sp = planar([[0, 0]], [0.0])
        with pytest.raises(ValueError):
            rescale_horizontal(build_function_rips(sp, 0), 0.0)


class TestBoundaryMatrices:
    def test_single_edge_column(self):
        sp = planar([[0, 0], [1, 0]], [0, 0])
        c = build_function_rips(sp, 1)
        d1, d2 = boundary_matrices(c, 1)
        assert d1.nrows == 2 and d1.ncols == 1
        assert d1.columns[0] == ((0, 1), (1, 1))
        assert d2.ncols == 0
        d1w = boundary_matrices(c, 1, field=5)[0]
        assert sorted(v for _, v in d1w.columns[0]) == [1, 4]  # +-1 mod 5

    @pytest.mark.parametrize("field", [2, 3, 5])
    def test_chain_condition(self, field):
        rng = np.random.default_rng(5)
        sp = planar(rng.uniform(0, 2, (7, 2)), rng.uniform(0, 1, 7))
        c = build_function_rips(sp, 3)
        for r in (1, 2):
            d_r, d_r1 = boundary_matrices(c, r, field)
            prod = (d_r.dense() @ d_r1.dense()) % field
            assert not prod.any()

    def test_four_cycle_rank(self):
        sp = planar([[0, 0], [1, 0], [1, 1], [0, 1]], [0, 0, 0, 0])
        c = build_function_rips(sp, 2)
        d1, _ = boundary_matrices(c, 1)
        from funrips.modalg.oracle import dense_rank_gf
        assert dense_rank_gf(d1.dense(), 2) == 3

    def test_degree_beyond_skeleton(self):
        sp = planar([[0, 0], [1, 0]], [0, 0])
        c = build_function_rips(sp, 1)
        with pytest.raises(ValueError, match="skeleton"):
            boundary_matrices(c, 2)

    def test_graded_validity_of_boundaries(self):
        from funrips.modalg.grmat import GradedMatrix
        rng = np.random.default_rng(8)
        sp = planar(rng.uniform(0, 2, (7, 2)), rng.uniform(0, 1, 7))
        c = build_function_rips(sp, 2)
        for r in (1, 2):
            d = boundary_matrices(c, r)[0]
            # re-validate through the checking constructor
            GradedMatrix(d.row_grades, d.col_grades, d.columns, d.field)


class TestDumpLoad:
    def test_round_trip(self):
        rng = np.random.default_rng(6)
        sp = planar(rng.uniform(0, 2, (6, 2)), rng.uniform(0, 1, 6))
        c = build_function_rips(sp, 2)
        text = dump_complex(c)
        c2 = load_complex(text)
        assert dump_complex(c2) == text
        for d in range(3):
            assert np.array_equal(c2.verts[d], c.verts[d])
            assert np.array_equal(c2.grades[d], c.grades[d])

    def test_line_format(self):
        sp = planar([[0, 0], [1, 0]], [0.25, 0.75])
        text = dump_complex(build_function_rips(sp, 1))
        lines = text.splitlines()
        assert lines[0] == "0;0;0.0 0.25"
        assert lines[1] == "0;1;0.0 0.75"
        assert lines[2] == "1;0 1;1.0 0.75"

    def test_load_rejects_broken_closure(self):
        with pytest.raises(ValueError, match="closed under faces"):
            load_complex("0;0;0.0 0.0\n1;0 1;1.0 0.0\n")

    def test_load_rejects_nonmonotone(self):
        text = "0;0;0.0 0.5\n0;1;0.0 0.5\n1;0 1;1.0 0.2\n"
        with pytest.raises(ValueError, match="monotone"):
            load_complex(text)


class TestCanonicalOrder:
    def test_dimension_then_grade_then_vertices(self):
        sp = planar([[0, 0], [1, 0], [0.5, 0.1]], [0.9, 0.1, 0.5])
        c = build_function_rips(sp, 2)
        for d in range(1, 3):
            g = c.grades[d]
            keys = [tuple(g[i]) + tuple(c.verts[d][i]) for i in range(len(g))]
            assert keys == sorted(keys)
