"""Command line behavior: formats, exit codes, determinism, reproduction."""

import json
import math

import numpy as np
import pytest

import magkit as mk
from magkit.cli import main

DEMO_CSV = "0,2,100\n2,0,100\n100,100,0\n"
TWO_POINT_CSV = "0,1\n1,0\n"


@pytest.fixture
def demo_csv(tmp_path):
    path = tmp_path / "demo.csv"
    path.write_text(DEMO_CSV)
    return path


def run(args, capsys):
    code = main([str(a) for a in args])
    return code, capsys.readouterr().out


class TestCompute:
    def test_demo_space_fields(self, demo_csv, capsys):
        code, out = run(["compute", "--input", demo_csv], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["n"] == 3
        assert doc["definiteness"] == "positive_definite"
        oracle = mk.magnitude(mk.three_point_demo())
        assert doc["magnitude"] == pytest.approx(oracle, rel=1e-12)
        assert len(doc["weighting"]) == 3
        assert doc["residuals"]["foster_sum"]["passed"]
        fractions = doc["weighting_fraction"]
        assert sum(fractions) == pytest.approx(1.0, abs=1e-12)

    def test_two_point_closed_form(self, tmp_path, capsys):
        path = tmp_path / "two.csv"
        path.write_text(TWO_POINT_CSV)
        code, out = run(["compute", "--input", path], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["magnitude"] == pytest.approx(1.0 + math.tanh(0.5), abs=1e-12)

    def test_scale_flag(self, tmp_path, capsys):
        path = tmp_path / "two.csv"
        path.write_text(TWO_POINT_CSV)
        code, out = run(["compute", "--input", path, "--t", "3"], capsys)
        doc = json.loads(out)
        assert doc["magnitude"] == pytest.approx(1.0 + math.tanh(1.5), abs=1e-12)

    def test_malformed_csv_exit_1(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("0,1\n2,0\n")
        code, out = run(["compute", "--input", path], capsys)
        assert code == 1
        assert json.loads(out)["error"] == "AsymmetricInput"

    def test_missing_file_exit_1(self, tmp_path, capsys):
        code, out = run(["compute", "--input", tmp_path / "nope.csv"], capsys)
        assert code == 1

    def test_full_precision_round_trip(self, tmp_path, capsys):
        path = tmp_path / "two.csv"
        path.write_text(TWO_POINT_CSV)
        _, out = run(["compute", "--input", path], capsys)
        value = json.loads(out)["magnitude"]
        assert value == 1.0 + math.tanh(0.5)  # bit-exact round trip


class TestEmbedSweepIdentities:
    def test_embed_keys(self, demo_csv, capsys):
        code, out = run(["embed", "--input", demo_csv], capsys)
        assert code == 0
        doc = json.loads(out)
        assert set(doc) == {"points", "circumradius", "circumcenter_barycentric"}
        assert len(doc["points"]) == 3
        assert len(doc["points"][0]) == 2

    def test_sweep_csv_header(self, demo_csv, capsys):
        code, out = run(
            ["sweep", "--input", demo_csv, "--t-min", "0.1", "--t-max", "1",
             "--grid", "8"], capsys,
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "t,magnitude,q,R_squared,asymptote,definiteness"
        assert len(lines) > 2

    def test_sweep_json_format(self, demo_csv, capsys):
        code, out = run(
            ["sweep", "--input", demo_csv, "--t-min", "0.5", "--t-max", "1",
             "--grid", "4", "--format", "json"], capsys,
        )
        doc = json.loads(out)
        assert isinstance(doc, list) and doc[0]["definiteness"] == "positive_definite"

    def test_identities_report(self, demo_csv, capsys):
        code, out = run(["identities", "--input", demo_csv], capsys)
        assert code == 0
        doc = json.loads(out)
        assert all(v["passed"] for v in doc["residuals"].values())
        assert doc["interlacing"]["chain_ok"]


class TestSubspaceCommands:
    def test_subspace_remove_outlier(self, demo_csv, capsys):
        code, out = run(["subspace", "--input", demo_csv, "--remove", "2"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["subset"] == [0, 1]
        assert doc["magnitude"] == pytest.approx(1.0 + math.tanh(1.0), rel=1e-12)
        assert doc["recomputed_magnitude"] == pytest.approx(doc["magnitude"], rel=1e-9)

    def test_subspace_keep_flag(self, demo_csv, capsys):
        code, out = run(["subspace", "--input", demo_csv, "--subset", "0,1"], capsys)
        doc = json.loads(out)
        assert doc["subset"] == [0, 1]

    def test_subspace_requires_exactly_one_selector(self, demo_csv, capsys):
        code, _ = run(["subspace", "--input", demo_csv], capsys)
        assert code == 1

    def test_delete_chain_steps(self, demo_csv, capsys):
        code, out = run(["delete-chain", "--input", demo_csv, "--remove", "2,0"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert [step["subset"] for step in doc["steps"]] == [[0, 1], [1]]
        assert doc["steps"][-1]["magnitude"] == pytest.approx(1.0)

    def test_indefinite_input_exit_2(self, tmp_path, capsys):
        d = np.full((5, 5), 2.0)
        np.fill_diagonal(d, 0.0)
        for a in range(3):
            for b in range(3, 5):
                d[a, b] = d[b, a] = 1.0
        path = tmp_path / "k32.csv"
        path.write_text("\n".join(",".join(str(v) for v in row) for row in d) + "\n")
        code, out = run(
            ["subspace", "--input", path, "--t", "0.1", "--remove", "0"], capsys
        )
        assert code == 2
        assert json.loads(out)["error"] == "NotPositiveDefinite"


class TestSpdSubmodular:
    def test_spd_near_discrete_four_points(self, tmp_path, capsys):
        d = np.full((4, 4), 500.0)
        np.fill_diagonal(d, 0.0)
        path = tmp_path / "disc.csv"
        path.write_text("\n".join(",".join(str(v) for v in row) for row in d) + "\n")
        code, out = run(["spd", "--input", path], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["certificate"]["verdict"] is True
        assert all(doc["certificate"]["characterizations"].values())
        assert doc["semialgebraic"] is True

    def test_submodular_inverse_empty_violations(self, tmp_path, capsys):
        rng = np.random.default_rng(5)
        pts = rng.normal(size=(6, 3)) * 2.0
        space = mk.from_points_euclidean(pts)
        t = 1.0
        while not mk.spd_certificate(mk.scale(space, t)).verdict:
            t *= 1.5
        d = mk.scale(space, t).dist
        path = tmp_path / "spd.csv"
        path.write_text(
            "\n".join(",".join(format(v, ".17g") for v in row) for row in d) + "\n"
        )
        code, out = run(
            ["submodular", "--input", path, "--kind", "inverse", "--alpha", "-2"],
            capsys,
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["violations"] == []
        assert doc["summary"]["violation_count"] == 0

    def test_submodular_shifted(self, tmp_path, capsys):
        path = tmp_path / "two.csv"
        path.write_text(TWO_POINT_CSV)
        code, out = run(
            ["submodular", "--input", path, "--kind", "shifted", "--alpha", "-1",
             "--t", "25"], capsys,
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["submodular_ok"] and doc["increasing_ok"]


class TestReproduce:
    def test_fig1_curve(self, capsys):
        code, out = run(["reproduce", "--target", "fig1"], capsys)
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "t,magnitude,exact_q,approx_q,relative_error"
        # check a sampled row: relative error equals exp(-t)
        for line in lines[1:]:
            cells = line.split(",")
            t = float(cells[0])
            if t >= 3.0:
                assert float(cells[4]) <= math.exp(-t) * 1.01

    def test_fig2_symmetry(self, capsys):
        code, out = run(["reproduce", "--target", "fig2"], capsys)
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("t,magnitude,w_frac_1")
        for line in lines[1:]:
            cells = [float(v) for v in line.split(",")]
            # points 1 and 2 are exchangeable, their curves coincide
            assert cells[2] == pytest.approx(cells[3], rel=1e-9)
            assert cells[5] == pytest.approx(cells[6], rel=1e-9)

    def test_example_2_3_values(self, capsys):
        code, out = run(["reproduce", "--target", "example-2-3"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["max_centered_deviation"] <= 1e-3
        np.testing.assert_allclose(
            doc["similarity"], doc["reference_similarity"], atol=1e-12
        )

    def test_example_fb_2pt_values(self, capsys):
        code, out = run(["reproduce", "--target", "example-fb-2pt"], capsys)
        assert code == 0
        docs = json.loads(out)
        assert [d["delta"] for d in docs] == [0.1, 0.5, 0.9]
        for doc in docs:
            assert doc["max_block_deviation"] <= 1e-12
            assert doc["product_residual"] <= 1e-12

    def test_unknown_target_rejected(self, capsys):
        code, _ = run(["reproduce", "--target", "fig9"], capsys)
        assert code == 1  # argparse choice failure maps to input error


class TestDeterminism:
    def test_byte_identical_outputs(self, demo_csv, tmp_path, capsys):
        out_a = tmp_path / "a.json"
        out_b = tmp_path / "b.json"
        assert main(["compute", "--input", str(demo_csv), "--output", str(out_a)]) == 0
        assert main(["compute", "--input", str(demo_csv), "--output", str(out_b)]) == 0
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_sweep_deterministic(self, demo_csv, tmp_path):
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        args = ["sweep", "--input", str(demo_csv), "--t-min", "0.1", "--t-max", "2",
                "--grid", "8", "--seed", "3"]
        assert main(args + ["--output", str(out_a)]) == 0
        assert main(args + ["--output", str(out_b)]) == 0
        assert out_a.read_bytes() == out_b.read_bytes()
