import filecmp
import json

import numpy as np

from twmd import io as tio
from twmd.cli import cmd_benchmark, cmd_process, cmd_simulate, main
from twmd.config import PipelineConfig
from twmd.sfcw import EchoMatrix, MotionScene, RadarParams, Scatterer, synthesize_echo


def small_config(**over):
    d = {
        "seed": 1234,
        "radar": {"f0_hz": 380e6, "delta_f_hz": 5e6, "n_freq": 32, "prf_hz": 113.0},
        "dataset": {"classes": [0, 9], "samples_per_class": 3, "duration_s": 1.5},
        "clutter": {"method": "none"},
        "tfr": {"method": "rmax"},
        "classifier": {"n_trials": 4},
    }
    d.update(over)
    return PipelineConfig.from_json_dict(d)


def opposite_phase_echo(m=120):
    """N=2 echo whose 2-point IDFT yields rows g and -g exactly."""
    params = RadarParams(n_freq=2, prf=113.0)
    t = np.arange(m) / params.prf
    g = np.exp(2j * np.pi * 20.0 * t)
    data = np.zeros((2, m), dtype=complex)
    data[1] = 2.0 * g
    return EchoMatrix(data=data, params=params)


def two_ridge_echo():
    """Two approaching/receding scatterers in distinct range bins."""
    params = RadarParams(f0=2.35e9, delta_f=5e6, n_freq=32, prf=113.0)
    scene = MotionScene(
        scatterers=(
            Scatterer(base_range=5.0, radial_velocity=1.0),
            Scatterer(base_range=9.0, radial_velocity=-1.5, reflectivity=0.8),
        ),
        duration_s=3.0,
    )
    return synthesize_echo(scene, params)


def bright_rows_per_half(img, threshold=150):
    """Rows with a bright pixel in the negative / positive Doppler halves."""
    half = img.shape[1] // 2
    neg = int(np.sum(img[:, :half].max(axis=1) >= threshold))
    pos = int(np.sum(img[:, half + 1 :].max(axis=1) >= threshold))
    return neg, pos


class TestSimulate:
    def test_writes_dataset_and_manifest(self, tmp_path):
        config = small_config()
        entries = cmd_simulate(config, tmp_path / "ds")
        files = sorted(p.name for p in (tmp_path / "ds").glob("*.rmx"))
        assert len(entries) == 6
        assert len(files) == 6
        manifest = tio.load_manifest(tmp_path / "ds" / "manifest.json")
        assert [e["path"] for e in manifest] == files
        hist = {}
        for e in manifest:
            hist[e["class_label"]] = hist.get(e["class_label"], 0) + 1
        assert hist == {0: 3, 9: 3}

    def test_ten_classes_by_four_samples(self, tmp_path):
        config = small_config(dataset={"samples_per_class": 4, "duration_s": 1.5})
        entries = cmd_simulate(config, tmp_path / "ds")
        assert len(entries) == 40
        manifest = tio.load_manifest(tmp_path / "ds" / "manifest.json")
        assert len(manifest) == 40
        counts = {}
        for e in manifest:
            counts[e["class_label"]] = counts.get(e["class_label"], 0) + 1
        assert counts == {c: 4 for c in range(10)}

    def test_out_dir_from_config(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        small_config(out_dir=str(tmp_path / "from_config")).save(cfg_path)
        assert main(["simulate", "--config", str(cfg_path)]) == 0
        assert (tmp_path / "from_config" / "manifest.json").is_file()
        cfg_no_out = tmp_path / "cfg2.json"
        small_config().save(cfg_no_out)
        assert main(["simulate", "--config", str(cfg_no_out)]) == 2

    def test_reruns_are_byte_identical(self, tmp_path):
        config = small_config()
        cmd_simulate(config, tmp_path / "a")
        cmd_simulate(config, tmp_path / "b")
        for name in [e.name for e in (tmp_path / "a").iterdir()]:
            assert filecmp.cmp(tmp_path / "a" / name, tmp_path / "b" / name, shallow=False)

    def test_worker_count_does_not_change_bytes(self, tmp_path):
        config = small_config()
        cmd_simulate(config, tmp_path / "w1", workers=1)
        cmd_simulate(config, tmp_path / "w4", workers=4)
        for name in [e.name for e in (tmp_path / "w1").iterdir()]:
            assert filecmp.cmp(tmp_path / "w1" / name, tmp_path / "w4" / name, shallow=False)

    def test_cli_entry_point(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        small_config().save(cfg_path)
        code = main(["simulate", "--config", str(cfg_path), "--out", str(tmp_path / "out")])
        assert code == 0
        assert "wrote 6 echo files" in capsys.readouterr().out

    def test_invalid_config_exits_2(self, tmp_path, capsys):
        cfg_path = tmp_path / "bad.json"
        cfg_path.write_text('{"seed": 1, "bogus": true}')
        code = main(["simulate", "--config", str(cfg_path), "--out", str(tmp_path / "out")])
        assert code == 2
        assert "error" in capsys.readouterr().err


class TestProcess:
    def test_rmax_fixture_shows_two_ridges(self, tmp_path):
        echo_path = tmp_path / "two.rmx"
        tio.save_echo(echo_path, two_ridge_echo())
        config = small_config()
        result = cmd_process(config, [str(echo_path)], tmp_path / "out")
        assert result["failures"] == []
        img = tio.load_pgm(tmp_path / "out" / "two_rmax.pgm")
        neg, pos = bright_rows_per_half(img)
        assert neg >= img.shape[0] // 4
        assert pos >= img.shape[0] // 4

    def test_ra_stft_cancellation_fixture_all_zero_csv(self, tmp_path):
        echo_path = tmp_path / "opp.rmx"
        tio.save_echo(echo_path, opposite_phase_echo())
        config = small_config(tfr={"method": "ra-stft"})
        result = cmd_process(config, [str(echo_path)], tmp_path / "out")
        assert result["failures"] == []
        table = np.loadtxt(tmp_path / "out" / "opp_ra-stft.csv", delimiter=",")
        assert table.shape == (89, 64)
        assert not table.any()
        # the same data still carries energy in the range-max view
        config2 = small_config(tfr={"method": "rmax"})
        cmd_process(config2, [str(echo_path)], tmp_path / "out2")
        rmax_table = np.loadtxt(tmp_path / "out2" / "opp_rmax.csv", delimiter=",")
        assert rmax_table.max() > 0

    def test_manifest_input_and_metadata(self, tmp_path):
        config = small_config(clutter={"method": "hpf"}, dataset={"classes": [9], "samples_per_class": 2, "duration_s": 1.5})
        cmd_simulate(config, tmp_path / "ds")
        result = cmd_process(config, [str(tmp_path / "ds" / "manifest.json")], tmp_path / "out")
        assert result["n_inputs"] == 2
        assert result["failures"] == []
        meta = json.loads((tmp_path / "out" / "class09_000_rmax.json").read_text())
        assert meta["method"] == "rmax"
        assert meta["transient_cols"] == 56
        assert meta["clutter"]["method"] == "hpf"

    def test_missing_input_exits_2_without_partial_outputs(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        small_config().save(cfg_path)
        out = tmp_path / "out"
        code = main(
            ["process", "--config", str(cfg_path), "--input", str(tmp_path / "nope.rmx"), "--out", str(out)]
        )
        assert code == 2
        assert not out.exists()

    def test_corrupt_input_exits_1(self, tmp_path, capsys):
        bad = tmp_path / "corrupt.rmx"
        bad.write_bytes(b"not radar data at all")
        cfg_path = tmp_path / "cfg.json"
        small_config().save(cfg_path)
        code = main(["process", "--config", str(cfg_path), "--input", str(bad), "--out", str(tmp_path / "out")])
        assert code == 1
        assert "corrupt.rmx" in capsys.readouterr().err

    def test_deterministic_across_workers(self, tmp_path):
        config = small_config()
        cmd_simulate(config, tmp_path / "ds")
        manifest = str(tmp_path / "ds" / "manifest.json")
        cmd_process(config, [manifest], tmp_path / "o1", workers=1)
        cmd_process(config, [manifest], tmp_path / "o4", workers=4)
        names = sorted(p.name for p in (tmp_path / "o1").iterdir())
        assert names == sorted(p.name for p in (tmp_path / "o4").iterdir())
        for name in names:
            assert filecmp.cmp(tmp_path / "o1" / name, tmp_path / "o4" / name, shallow=False)

    def test_method_and_gate_overrides(self, tmp_path):
        echo_path = tmp_path / "two.rmx"
        tio.save_echo(echo_path, two_ridge_echo())
        cfg_path = tmp_path / "cfg.json"
        small_config().save(cfg_path)
        code = main(
            [
                "process",
                "--config",
                str(cfg_path),
                "--input",
                str(echo_path),
                "--out",
                str(tmp_path / "out"),
                "--method",
                "tmax",
                "--range-gate",
                "2",
                "20",
            ]
        )
        assert code == 0
        table = np.loadtxt(tmp_path / "out" / "two_tmax.csv", delimiter=",")
        assert table.shape == (18, 64)  # gated bins x doppler

    def test_save_cube(self, tmp_path):
        echo_path = tmp_path / "two.rmx"
        tio.save_echo(echo_path, two_ridge_echo())
        config = small_config()
        cmd_process(config, [str(echo_path)], tmp_path / "out", save_cube=True)
        cube = tio.load_cube(tmp_path / "out" / "two_rmax.rdc")
        assert cube.data.shape[0] == 32


class TestBenchmark:
    def test_report_structure_and_schema(self, tmp_path):
        from twmd.classify import validate_eval_report

        config = small_config()
        cmd_simulate(config, tmp_path / "ds")
        result = cmd_benchmark(config, tmp_path / "ds", narrowband=True)
        assert set(result["methods"]) == {"narrowband", "ra-stft", "cratfr", "rmax"}
        for report in result["methods"].values():
            validate_eval_report(report)
        assert result["narrowband_emulation"] is not None
        assert result["config"] == config.to_json_dict()

    def test_cli_writes_report(self, tmp_path, capsys):
        config = small_config()
        cmd_simulate(config, tmp_path / "ds")
        cfg_path = tmp_path / "cfg.json"
        config.save(cfg_path)
        report_path = tmp_path / "report.json"
        code = main(
            ["benchmark", "--config", str(cfg_path), "--dataset", str(tmp_path / "ds"), "--out", str(report_path)]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "rmax" in out
        report = json.loads(report_path.read_text())
        assert set(report["methods"]) == {"ra-stft", "cratfr", "rmax"}
        confusion = np.loadtxt(tmp_path / "report_rmax_confusion.csv", delimiter=",")
        assert confusion.shape == (2, 2)
        np.testing.assert_allclose(confusion.sum(axis=1), 1.0, atol=1e-9)


class TestUtilityCommands:
    def test_filter_design(self, tmp_path, capsys):
        out = tmp_path / "taps.csv"
        code = main(["filter-design", "--order", "112", "--cutoff", "3", "--fs", "113", "--out", str(out)])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "index,tap"
        assert len(lines) == 114
        taps = np.array([float(l.split(",")[1]) for l in lines[1:]])
        assert abs(taps.sum()) <= 10 ** (-50 / 20)

    def test_inspect(self, tmp_path, capsys):
        echo_path = tmp_path / "two.rmx"
        tio.save_echo(echo_path, two_ridge_echo())
        code = main(["inspect", str(echo_path)])
        assert code == 0
        out = capsys.readouterr().out
        assert '"format": "echo"' in out

    def test_inspect_bad_file_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.bin"
        bad.write_bytes(b"ZZZZ")
        assert main(["inspect", str(bad)]) == 2
