import json
import math
import os

import pytest

from poincare_boundary_lab import cli
from poincare_boundary_lab import curves as cv


def run(argv, tmp_path, monkeypatch=None):
    return cli.main(["--output-dir", str(tmp_path)] + argv)


def latest_report(tmp_path, sub):
    files = sorted(p for p in os.listdir(tmp_path) if p.startswith(sub))
    assert files, f"no report for {sub}"
    with open(os.path.join(tmp_path, files[-1]), "rb") as f:
        return f.read()


class TestMetric:
    def test_pseudo_hyperbolic_example(self, tmp_path, capsys):
        code = run(["metric", "--kind", "ph", "--z", "0.5,0", "--w", "-0.5,0"],
                   tmp_path)
        out = capsys.readouterr().out.strip()
        assert code == 0
        assert out.startswith("0.8")

    def test_spherical_infinity(self, tmp_path, capsys):
        code = run(["metric", "--kind", "s", "--z", "0,0", "--w", "inf"], tmp_path)
        assert code == 0
        assert capsys.readouterr().out.strip().startswith("2")

    def test_bad_complex_is_usage_error(self, tmp_path):
        assert run(["metric", "--kind", "ph", "--z", "zebra", "--w", "0,0"],
                   tmp_path) == 2


class TestExitCodes:
    def test_unknown_subcommand(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            run(["no-such-command"], tmp_path)
        assert exc.value.code == 2

    def test_equiv_not_equivalent_is_4(self, tmp_path):
        code = run(["equiv", "--curve1", "radius:0", "--curve2", "horocycle:0",
                    "--max-level", "12"], tmp_path)
        assert code == 4

    def test_equiv_equivalent_is_0(self, tmp_path):
        code = run(["equiv", "--curve1", "radius:0", "--curve2",
                    "chord:0:0.5236", "--max-level", "10"], tmp_path)
        assert code == 0

    def test_endpoint_mismatch_is_2(self, tmp_path):
        code = run(["equiv", "--curve1", "radius:0", "--curve2", "radius:1"],
                   tmp_path)
        assert code == 2

    def test_decay_violated_is_4(self, tmp_path):
        code = run(["decay", "--function", "saginjan_h", "--curve", "radius:0",
                    "--profile", "log:1", "--level", "10"], tmp_path)
        assert code == 4

    def test_decay_satisfied_is_0(self, tmp_path):
        code = run(["decay", "--function", "square_exp", "--curve", "radius:0",
                    "--profile", "super:1", "--level", "10"], tmp_path)
        assert code == 0

    def test_loosening_tolerance_is_2(self, tmp_path):
        code = run(["--set-tolerance", "algebraic=1e-6", "metric",
                    "--kind", "ph", "--z", "0,0", "--w", "0.5,0"], tmp_path)
        assert code == 2


class TestReports:
    def test_json_report_written(self, tmp_path):
        run(["metric", "--kind", "h", "--z", "0,0", "--w", "0.5,0"], tmp_path)
        payload = json.loads(latest_report(tmp_path, "metric"))
        assert payload["subcommand"] == "metric"
        assert payload["value"] == pytest.approx(math.log(3.0))
        assert "seed" in payload

    def test_csv_report(self, tmp_path):
        code = run(["--format", "csv", "normality", "--function", "identity",
                    "--curve", "radius:0", "--deflection", "0.3",
                    "--max-level", "6"], tmp_path)
        assert code == 0
        text = latest_report(tmp_path, "normality").decode()
        header = text.splitlines()[0]
        assert "level" in header and "value" in header and "seed" in header

    def test_deterministic_given_seed(self, tmp_path):
        args = ["--seed", "5", "cluster", "--function", "identity",
                "--region", "radius-angle:0.4", "--shells", "2:8"]
        run(args, tmp_path)
        run(args, tmp_path)
        files = sorted(p for p in os.listdir(tmp_path) if p.startswith("cluster"))
        with open(os.path.join(tmp_path, files[0]), "rb") as f:
            a = f.read()
        with open(os.path.join(tmp_path, files[1]), "rb") as f:
            b = f.read()
        assert a == b

    def test_no_report_flag(self, tmp_path):
        run(["--no-report", "metric", "--kind", "ph", "--z", "0,0",
             "--w", "0.1,0"], tmp_path)
        assert not os.listdir(tmp_path)


class TestConfig:
    def test_config_file_and_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("seed=9\nmax_level=6\nformat=json\n")
        code = run(["--config", str(cfg), "frechet", "--curve1", "radius:0",
                    "--curve2", "hypercycle:0:0.3"], tmp_path)
        assert code == 0
        payload = json.loads(latest_report(tmp_path, "frechet"))
        assert payload["seed"] == 9
        assert payload["level"] == 6

    def test_env_output_dir(self, tmp_path, monkeypatch, capsys):
        target = tmp_path / "env-dir"
        monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(target))
        code = cli.main(["metric", "--kind", "ph", "--z", "0,0", "--w", "0.2,0"])
        assert code == 0
        assert any(p.startswith("metric") for p in os.listdir(target))

    def test_bad_config_key(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("volume=11\n")
        assert run(["--config", str(cfg), "metric", "--kind", "ph",
                    "--z", "0,0", "--w", "0.1,0"], tmp_path) == 2


class TestCurveExchange:
    def test_produced_and_consumed(self, tmp_path):
        # lemma4 report carries a curve in the exchange format; feed it back
        code = run(["lemma4", "--r", "0.5", "--n-zigzags", "2"], tmp_path)
        assert code == 0
        payload = json.loads(latest_report(tmp_path, "lemma4"))
        exchange = payload["curve2_exchange"]
        assert exchange["endpoint_angle"] == 0.0
        curve_file = tmp_path / "curve.json"
        curve_file.write_text(json.dumps(exchange))
        code = run(["frechet", "--curve1", "radius:0",
                    "--curve2", f"@{curve_file}", "--level", "8"], tmp_path)
        assert code == 0

    def test_round_trip_matches_module(self, tmp_path):
        chord = cv.canonical_curve("chord", 0.0, 0.4)
        payload = cv.curve_to_exchange(chord, 7)
        back = cv.curve_from_exchange(json.loads(json.dumps(payload)))
        assert back.endpoint_angle == 0.0


class TestOtherSubcommands:
    def test_gallery(self, tmp_path, capsys):
        code = run(["gallery", "--name", "saginjan_h", "--at", "0.5,0"], tmp_path)
        assert code == 0
        assert "0.13533" in capsys.readouterr().out

    def test_gallery_unknown_name(self, tmp_path):
        assert run(["gallery", "--name", "mystery"], tmp_path) == 2

    def test_stolz_map_point(self, tmp_path, capsys):
        code = run(["stolz-map", "--alpha", "0.7853981633974483",
                    "--z", "0.5,0"], tmp_path)
        assert code == 0

    def test_stolz_map_outside_domain(self, tmp_path):
        assert run(["stolz-map", "--alpha", "0.5", "--z", "0,0.9"], tmp_path) == 2

    def test_lemma6_pass(self, tmp_path):
        assert run(["lemma6", "--alpha", "0.7853981633974483",
                    "--beta", "0.5235987755982988", "--samples", "4000"],
                   tmp_path) == 0

    def test_pseq_local_sup(self, tmp_path, capsys):
        code = run(["pseq", "--function", "pole_series", "--mode", "local-sup",
                    "--sequence", "poles:8"], tmp_path)
        assert code == 0
        assert "diverging" in capsys.readouterr().out

    def test_family(self, tmp_path):
        assert run(["family", "--function", "identity", "--target", "1,0",
                    "--r1", "0.9", "--depths", "1:16"], tmp_path) == 0
        assert run(["family", "--function", "identity", "--target", "0,0",
                    "--r1", "0.5", "--depths", "1:8"], tmp_path) == 4
