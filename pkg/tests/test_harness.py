import json
import math
import subprocess
import sys

import numpy as np
import pytest

from funrips.harness import sublevel_barcode_1d, two_circle_space
from funrips.harness.cli import main
from funrips.harness.experiments import (ExperimentConfig, _hausdorff_to_grid,
                                         run_brownian)
from funrips.harness.io import (read_barcode_csv, read_distance_matrix,
                                read_point_cloud, write_barcode_csv)

INF = math.inf


class TestSublevelBarcode1d:
    def test_monotone_sequence(self):
        assert sublevel_barcode_1d([0.0, 1.0, 2.0, 3.0]) == [(0.0, INF)]

    def test_hand_run_union_find(self):
        # local min 0 merges at saddle 1 into the -1 component
        assert sublevel_barcode_1d([0.0, 1.0, -1.0]) == [(-1.0, INF), (0.0, 1.0)]

    def test_symmetric_three_wells_two_equal_finite_bars(self):
        vals = [1.0, -1.0, 0.0, -2.0, 0.0, -1.0, 1.0]
        bars = sublevel_barcode_1d(vals)
        assert bars == [(-2.0, INF), (-1.0, 0.0), (-1.0, 0.0)]

    def test_equal_depth_wells_leftmost_wins_infinite(self):
        bars = sublevel_barcode_1d([1.0, -1.0, 0.5, -1.0, 1.0])
        assert bars == [(-1.0, 0.5), (-1.0, INF)]

    def test_bar_count_is_number_of_local_minima(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            vals = rng.uniform(0, 1, int(rng.integers(1, 40)))
            bars = sublevel_barcode_1d(vals)
            n = len(vals)
            minima = sum(
                1 for i in range(n)
                if (i == 0 or vals[i] < vals[i - 1])
                and (i == n - 1 or vals[i] < vals[i + 1]))
            assert len(bars) == minima

    def test_plateau_tie_leftmost_wins(self):
        bars = sublevel_barcode_1d([0.0, 0.0, 1.0, 0.0])
        assert bars == [(0.0, 1.0), (0.0, INF)]

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            sublevel_barcode_1d([])


class TestHausdorffToGrid:
    def test_matches_brute_force(self):
        rng = np.random.default_rng(1)
        m = 500
        pos = rng.uniform(0, 1, 37)
        grid = np.linspace(0, 1, m + 1)
        d = np.abs(grid[:, None] - pos[None, :])
        brute = max(d.min(axis=1).max(), d.min(axis=0).max())
        got = _hausdorff_to_grid(pos, m)
        assert brute <= got <= brute + 1.0 / m + 1e-12


class TestSingleCircleEstimator:
    def test_bar_within_2delta_of_target(self):
        # degree-1 slice of the smoothed estimator on a dense circle sample
        # stays within 2*delta of the single bar [1, inf)
        from funrips import (bottleneck, build_function_rips, sample_circle,
                             slice_vertical, smoothed_presentation)
        space = sample_circle(1.0, 150, seed=0)
        eps, rho = space.meta["eps"], space.meta["rho"]
        c = build_function_rips(space, 2, max_scale=rho * (1 + 1e-9))
        est = smoothed_presentation(c, 1)
        for delta in np.linspace(2 * eps, rho / 2, 6, endpoint=False):
            bars = slice_vertical(est, float(delta))
            assert bottleneck(bars, [(1.0, INF)], 10.0) <= 2 * delta

    def test_tiny_delta_gives_empty_estimator(self):
        from funrips import (build_function_rips, bottleneck, sample_circle,
                             slice_vertical, smoothed_presentation)
        space = sample_circle(1.0, 80, seed=1)
        c = build_function_rips(space, 2, max_scale=np.pi / 2)
        est = smoothed_presentation(c, 1)
        bars = slice_vertical(est, 1e-9)
        assert bars == []
        # the error is then the deletion cost of the target
        assert bottleneck(bars, [(1.0, INF)], 10.0) == (10.0 - 1.0) / 2


class TestTwoCircleSpace:
    def test_cross_distances_infinite(self):
        space = two_circle_space((1.0, 0.6), 20, seed=0)
        assert np.isinf(space.dist[0, 25])
        assert np.isfinite(space.dist[0, 5])
        assert len(space.meta["eps"]) == 2
        assert space.meta["rho"][0] == pytest.approx(np.pi / 2)

    def test_noise_bounded(self):
        a = two_circle_space((1.0, 0.6), 30, seed=1)
        b = two_circle_space((1.0, 0.6), 30, seed=1, zeta=0.05)
        assert np.abs(a.values - b.values).max() <= 0.05


class TestBrownianRunner:
    def test_full_grid_recovers_exactly(self):
        # sampling every grid point makes the estimator error vanish: at
        # delta = d_H(grid sample, grid) the doubled scale spans exactly one
        # grid step and the estimator is the lower-star path complex
        from funrips.geometry import brownian_path
        from funrips.harness.experiments import _line_rips_complex
        from funrips import bottleneck, slice_vertical, smoothed_presentation
        path = brownian_path(64, seed=14)
        pos = np.linspace(0, 1, 65)
        dh = _hausdorff_to_grid(pos, 64)
        c = _line_rips_complex(pos, path, cap=2 * dh * (1 + 1e-9))
        est = smoothed_presentation(c, 0)
        bars = slice_vertical(est, dh)
        err = bottleneck(bars, sublevel_barcode_1d(path), 10.0)
        assert err == 0.0

    def test_median_error_decreases_with_k(self):
        cfg = ExperimentConfig(name="brownian", sizes=(100, 200, 400, 800),
                               seeds=tuple(range(10)), brownian_m=20_000)
        rep = run_brownian(cfg)
        med = {}
        for k in cfg.sizes:
            med[k] = np.median([r["error"] for r in rep["rows"] if r["k"] == k])
        meds = [med[k] for k in cfg.sizes]
        assert all(a > b for a, b in zip(meds, meds[1:])), meds


def run_cli(args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "funrips.harness.cli", *args],
        capture_output=True, text=True, cwd=cwd)


@pytest.fixture
def cloud_csv(tmp_path):
    rng = np.random.default_rng(5)
    path = tmp_path / "cloud.csv"
    with open(path, "w") as fh:
        fh.write("x1,x2,f1\n")
        for _ in range(8):
            x, y = rng.uniform(0, 2, 2)
            fh.write(f"{x},{y},{rng.uniform(0, 1)}\n")
    return path


class TestIO:
    def test_point_cloud_round_trip(self, cloud_csv):
        coords, values = read_point_cloud(cloud_csv)
        assert coords.shape == (8, 2)
        assert values.shape == (8, 1)

    def test_values_required(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("x1,x2\n0,0\n")
        with pytest.raises(ValueError, match="f column"):
            read_point_cloud(p)

    def test_distance_matrix_with_inf(self, tmp_path):
        p = tmp_path / "d.txt"
        p.write_text("0 1 inf\n1 0 2\ninf 2 0\n")
        mat = read_distance_matrix(p)
        assert np.isinf(mat[0, 2])

    def test_barcode_csv_round_trip(self, tmp_path):
        bars = [(0.0, 2.0), (1.0, INF)]
        p = tmp_path / "b.csv"
        write_barcode_csv(bars, p)
        assert read_barcode_csv(p) == bars
        assert "inf" in p.read_text()


class TestCLI:
    def test_present_smoothed_writes_pres(self, cloud_csv, tmp_path):
        out = tmp_path / "est.pres"
        rc = main(["present", "smoothed", "--degree", "1",
                   "--in", str(cloud_csv), "--out", str(out)])
        assert rc == 0
        text = out.read_text()
        assert text.startswith("pres 1\nfield 2\nparams 2\n")

    def test_slice_writes_barcode_csv(self, cloud_csv, tmp_path):
        est = tmp_path / "est.pres"
        main(["present", "smoothed", "--degree", "0",
              "--in", str(cloud_csv), "--out", str(est)])
        bc = tmp_path / "bc.csv"
        rc = main(["slice", "--in", str(est), "--delta", "0.3",
                   "--out", str(bc)])
        assert rc == 0
        bars = read_barcode_csv(bc)
        assert all(b < d for b, d in bars)

    def test_filtration_build_dump(self, cloud_csv, tmp_path):
        out = tmp_path / "c.cplx"
        rc = main(["filtration", "build", "--in", str(cloud_csv),
                   "--max-dim", "1", "--out", str(out)])
        assert rc == 0
        assert out.read_text().startswith("0;")

    def test_betti_and_hilbert(self, cloud_csv, tmp_path):
        est = tmp_path / "est.pres"
        main(["present", "homology", "--degree", "1",
              "--in", str(cloud_csv), "--out", str(est)])
        b = tmp_path / "betti.csv"
        assert main(["betti", "--in", str(est), "--out", str(b)]) == 0
        assert b.read_text().startswith("degree,g1,g2")
        h = tmp_path / "h.csv"
        assert main(["hilbert", "--in", str(est),
                     "--grades", "0.5,0.5;2.0,2.0", "--out", str(h)]) == 0
        lines = h.read_text().strip().splitlines()
        assert lines[0] == "g1,g2,dim"
        assert len(lines) == 3

    def test_bottleneck_command(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_barcode_csv([(0.0, 2.0)], a)
        write_barcode_csv([], b)
        res = run_cli(["bottleneck", str(a), str(b)], tmp_path)
        assert res.returncode == 0
        assert float(res.stdout.strip()) == 1.0

    def test_matching_command(self, cloud_csv, tmp_path):
        est = tmp_path / "est.pres"
        main(["present", "smoothed", "--degree", "1",
              "--in", str(cloud_csv), "--out", str(est)])
        res = run_cli(["matching", str(est), str(est), "--lines", "12"],
                      tmp_path)
        assert res.returncode == 0
        assert float(res.stdout.strip()) == 0.0

    def test_explicit_distance_matrix_input(self, tmp_path):
        cloud = tmp_path / "pts.csv"
        cloud.write_text("f1\n0.1\n0.2\n0.3\n")
        dmat = tmp_path / "d.txt"
        dmat.write_text("0 1 inf\n1 0 inf\ninf inf 0\n")
        out = tmp_path / "h0.pres"
        rc = main(["present", "homology", "--degree", "0", "--in", str(cloud),
                   "--dist", str(dmat), "--max-dim", "1", "--out", str(out)])
        assert rc == 0
        # two components stay separate: 3 generators, 1 merge relation
        text = out.read_text()
        assert "rows 3" in text and "cols 1" in text

    def test_select_delta_curve_csv(self, cloud_csv, tmp_path):
        curve = tmp_path / "curve.csv"
        res = run_cli(["select-delta", "--rule", "delta_prime", "--k", "50",
                       "--degree", "0", "--target-dim", "1",
                       "--in", str(cloud_csv), "--curve-out", str(curve)],
                      tmp_path)
        assert res.returncode == 0
        assert curve.read_text().startswith("delta,dim\n")

    def test_select_delta_rules(self, cloud_csv, tmp_path):
        res = run_cli(["select-delta", "--rule", "delta_k", "--k", "100",
                       "--a", "1.0", "--b", "2.0"], tmp_path)
        assert res.returncode == 0
        want = 4.0 * (2.0 * math.log(100) / 100.0) ** 0.5
        assert float(res.stdout.strip()) == pytest.approx(want, abs=1e-12)
        res = run_cli(["select-delta", "--rule", "delta_hat",
                       "--in", str(cloud_csv)], tmp_path)
        assert res.returncode == 0
        assert float(res.stdout.strip()) >= 0.0

    def test_usage_error_exit_2(self, tmp_path):
        res = run_cli(["present"], tmp_path)
        assert res.returncode == 2

    def test_computation_error_exit_1(self, tmp_path):
        res = run_cli(["betti", "--in", str(tmp_path / "missing.pres")],
                      tmp_path)
        assert res.returncode == 1
        assert "error:" in res.stderr

    def test_experiment_deterministic_bytes(self, tmp_path):
        outs = []
        for name in ("r1.json", "r2.json"):
            out = tmp_path / name
            rc = main(["experiment", "two-circles", "--seeds", "7",
                       "--sizes", "120", "--out", str(out)])
            assert rc == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_experiment_report_schema(self, tmp_path):
        out = tmp_path / "rep.json"
        main(["experiment", "brownian", "--sizes", "100,200",
              "--seeds", "0", "--m", "5000", "--timing", "--out", str(out)])
        rep = json.loads(out.read_text())
        assert set(rep) >= {"config", "rows", "fit"}
        for row in rep["rows"]:
            assert {"k", "seed", "delta", "error", "eps",
                    "runtime_ms"} <= set(row)

    def test_custom_experiment_pipeline(self, cloud_csv, tmp_path):
        rep = tmp_path / "rep.json"
        pres = tmp_path / "est.pres"
        bc = tmp_path / "bars.csv"
        rc = main(["experiment", "custom", "--in", str(cloud_csv),
                   "--delta", "0.4", "--out-pres", str(pres),
                   "--out-barcode", str(bc), "--out", str(rep)])
        assert rc == 0
        assert pres.read_text().startswith("pres 1")
        assert bc.read_text().startswith("birth,death")

    def test_global_flags_accepted_before_and_after_subcommand(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["--seed", "3", "experiment", "circle",
                     "--sizes", "50", "--out", str(a)]) == 0
        assert main(["experiment", "circle", "--sizes", "50",
                     "--seed", "3", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_jobs_parallel_same_rows(self, tmp_path):
        # semantically identical output with a worker pool
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["experiment", "brownian", "--sizes", "100,200", "--seeds",
              "0,1", "--m", "5000", "--out", str(a)])
        main(["--jobs", "2", "experiment", "brownian", "--sizes", "100,200",
              "--seeds", "0,1", "--m", "5000", "--out", str(b)])
        ra = json.loads(a.read_text())
        rb = json.loads(b.read_text())
        ka = [(r["k"], r["seed"], r["delta"], r["error"]) for r in ra["rows"]]
        kb = [(r["k"], r["seed"], r["delta"], r["error"]) for r in rb["rows"]]
        assert ka == kb
