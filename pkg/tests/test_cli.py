import json
import socket
import subprocess
import sys
import time

import httpx
import pytest

from sixbox.cli import main


def run_cli(*argv, capsys=None):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr() if capsys else ("", "")
    return code, out, err


class TestGenerate:
    def test_all_black_box(self, tmp_path, capsys):
        out = tmp_path / "b0.txt"
        code, _, _ = run_cli("generate", "--box", 0, "--n", 10, "--out", out, capsys=capsys)
        assert code == 0
        assert out.read_text() == "0\n" * 10

    def test_all_white_box(self, tmp_path, capsys):
        out = tmp_path / "b5.txt"
        run_cli("generate", "--box", 5, "--n", 3, "--out", out, capsys=capsys)
        assert out.read_text() == "1\n1\n1\n"

    def test_repeat_invocation_is_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        run_cli("generate", "--box", 1, "--n", 1000, "--seed", 9, "--out", a, capsys=capsys)
        run_cli("generate", "--box", 1, "--n", 1000, "--seed", 9, "--out", b, capsys=capsys)
        assert a.read_bytes() == b.read_bytes()

    def test_env_seed_and_flag_priority(self, tmp_path, capsys, monkeypatch):
        env_out, flag_out, default_out = (tmp_path / n for n in ("e.txt", "f.txt", "d.txt"))
        monkeypatch.setenv("SIXBOX_SEED", "123")
        run_cli("generate", "--box", 2, "--n", 50, "--out", env_out, capsys=capsys)
        run_cli("generate", "--box", 2, "--n", 50, "--seed", 123, "--out", flag_out, capsys=capsys)
        assert env_out.read_text() == flag_out.read_text()
        monkeypatch.delenv("SIXBOX_SEED")
        run_cli("generate", "--box", 2, "--n", 50, "--seed", 0, "--out", default_out, capsys=capsys)
        run_cli("generate", "--box", 2, "--n", 50, "--out", env_out, capsys=capsys)
        assert env_out.read_text() == default_out.read_text()

    def test_bad_box_fails(self, tmp_path, capsys):
        code, _, err = run_cli(
            "generate", "--box", 9, "--n", 5, "--out", tmp_path / "x.txt", capsys=capsys
        )
        assert code == 1
        assert "error" in err


class TestAnalyze:
    def test_output_files(self, tmp_path, capsys):
        seq_file = tmp_path / "seq.txt"
        out_dir = tmp_path / "report"
        run_cli("generate", "--box", 1, "--n", 250, "--seed", 5, "--out", seq_file, capsys=capsys)
        code, _, _ = run_cli("analyze", seq_file, "--out-dir", out_dir, capsys=capsys)
        assert code == 0
        names = sorted(p.name for p in out_dir.iterdir())
        assert names == [
            "odds.csv",
            "summary.csv",
            "trajectory_full.csv",
            "trajectory_run_001.csv",
            "trajectory_run_002.csv",
            "trajectory_run_003.csv",
        ]
        full = (out_dir / "trajectory_full.csv").read_text().splitlines()
        assert len(full) == 251
        run3 = (out_dir / "trajectory_run_003.csv").read_text().splitlines()
        assert len(run3) == 51

    def test_json_format(self, tmp_path, capsys):
        seq_file = tmp_path / "seq.txt"
        out_dir = tmp_path / "report"
        run_cli("generate", "--box", 2, "--n", 30, "--seed", 6, "--out", seq_file, capsys=capsys)
        run_cli("analyze", seq_file, "--out-dir", out_dir, "--format", "json", capsys=capsys)
        summary = json.loads((out_dir / "summary.json").read_text())
        assert set(summary) == {
            "summary",
            "posterior",
            "predictiveWhite",
            "frequencyWhite",
            "laplaceWhite",
            "odds",
        }
        points = json.loads((out_dir / "trajectory_full.json").read_text())
        assert len(points) == 30
        assert points[-1]["step"] == 30

    def test_all_black_hundred(self, tmp_path, capsys):
        seq_file = tmp_path / "b0.txt"
        seq_file.write_text("0\n" * 100)
        out_dir = tmp_path / "report"
        run_cli("analyze", seq_file, "--out-dir", out_dir, "--format", "json", capsys=capsys)
        summary = json.loads((out_dir / "summary.json").read_text())
        gap = 1.0 - summary["posterior"][0]
        assert gap == pytest.approx(2.037036e-10, rel=1e-2)
        assert summary["posterior"][5] == 0
        assert summary["laplaceWhite"] == pytest.approx(1 / 102, rel=1e-12)

    def test_run_local_predictive_at_step_17(self, tmp_path, capsys):
        # runs are analyzed independently, so a run whose own first 17
        # draws are 16 Blacks and a White must show the jump at step 17
        # regardless of the 200 draws before it
        seq_file = tmp_path / "seq.txt"
        prefix = ("0\n" * 7 + "1\n" + "0\n" * 12) * 10
        run3 = "0\n" * 16 + "1\n" + "0\n" * 73 + "1\n" * 10
        seq_file.write_text(prefix + run3)
        out_dir = tmp_path / "report"
        run_cli("analyze", seq_file, "--out-dir", out_dir, "--format", "json", capsys=capsys)
        run3_points = json.loads((out_dir / "trajectory_run_003.json").read_text())
        step17 = run3_points[16]
        assert step17["step"] == 17
        assert step17["predictiveWhite"] == pytest.approx(0.203948, abs=1e-6)

    def test_custom_prior(self, tmp_path, capsys):
        seq_file = tmp_path / "seq.txt"
        seq_file.write_text("0\n")
        out_dir = tmp_path / "report"
        code, _, _ = run_cli(
            "analyze", seq_file, "--prior", "0,1,0,0,0,0", "--out-dir", out_dir,
            "--format", "json", capsys=capsys,
        )
        assert code == 0
        summary = json.loads((out_dir / "summary.json").read_text())
        assert summary["posterior"][1] == 1.0
        assert summary["predictiveWhite"] == pytest.approx(0.2, rel=1e-12)

    def test_bad_prior_rejected(self, tmp_path, capsys):
        seq_file = tmp_path / "seq.txt"
        seq_file.write_text("0\n")
        code, _, err = run_cli(
            "analyze", seq_file, "--prior", "0,0,0,0,0,0",
            "--out-dir", tmp_path / "r", capsys=capsys,
        )
        assert code == 1
        assert "prior" in err

    def test_parse_error_reports_line(self, tmp_path, capsys):
        seq_file = tmp_path / "seq.txt"
        seq_file.write_text("0\n1\n7\n")
        code, _, err = run_cli(
            "analyze", seq_file, "--out-dir", tmp_path / "r", capsys=capsys
        )
        assert code == 1
        assert ":3:" in err

    def test_empty_file_distinct_error(self, tmp_path, capsys):
        seq_file = tmp_path / "seq.txt"
        seq_file.write_text("")
        code, _, err = run_cli(
            "analyze", seq_file, "--out-dir", tmp_path / "r", capsys=capsys
        )
        assert code == 1
        assert "no draw values" in err


class TestStdoutTables:
    def test_anatomy_csv(self, capsys):
        code, out, _ = run_cli("anatomy", 100, 18, capsys=capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "box,posterior,binomial_likelihood,sequence_likelihood"
        box1 = lines[2].split(",")
        # exact rational value is 2.9642774844752947e-21
        assert box1[3] == "2.964277484e-21"

    def test_anatomy_json(self, capsys):
        _, out, _ = run_cli("anatomy", 17, 1, "--format", "json", capsys=capsys)
        data = json.loads(out)
        assert data["perBox"][1]["sequenceLikelihood"] == pytest.approx(5.629500e-03, rel=1e-6)

    def test_odds_all_ones_without_data(self, capsys):
        _, out, _ = run_cli("odds", 0, 0, capsys=capsys)
        rows = out.splitlines()
        assert len(rows) == 7
        assert rows[3].split(",")[1:] == ["1.000000000e+00"] * 6

    def test_demo_gaussian(self, capsys):
        _, out, _ = run_cli("demo-gaussian", 0, 12, capsys=capsys)
        assert out.splitlines()[1].split(",")[2] == "3.989422804e-13"

    def test_demo_gaussian_json_default_decimals(self, capsys):
        _, out, _ = run_cli("demo-gaussian", "1.479427401471", "--format", "json", capsys=capsys)
        data = json.loads(out)
        assert data["decimals"] == 12
        assert data["probability"] == pytest.approx(1.34e-13, rel=1e-2)

    def test_approx_table(self, capsys):
        _, out, _ = run_cli("approx", 5, capsys=capsys)
        lines = out.splitlines()
        assert len(lines) == 7
        assert lines[1].split(",")[0] == "0"


class TestConfig:
    def test_config_file_sets_format_and_flags_win(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"outputFormat": "json", "m": 5}))
        _, out, _ = run_cli("odds", 0, 0, "--config", cfg, capsys=capsys)
        json.loads(out)  # config applied
        _, out, _ = run_cli("odds", 0, 0, "--config", cfg, "--format", "csv", capsys=capsys)
        assert out.startswith("box,")

    def test_config_seed(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"seed": 77}))
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        run_cli("generate", "--box", 1, "--n", 40, "--config", cfg, "--out", a, capsys=capsys)
        run_cli("generate", "--box", 1, "--n", 40, "--seed", 77, "--out", b, capsys=capsys)
        assert a.read_text() == b.read_text()

    def test_bad_config_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("[1, 2]")
        code, _, err = run_cli("odds", 0, 0, "--config", cfg, capsys=capsys)
        assert code == 1
        assert "config" in err


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


class TestServe:
    def test_serves_health_and_static(self, tmp_path):
        port = _free_port()
        static = tmp_path / "ui"
        static.mkdir()
        (static / "index.html").write_text("<html>game</html>")
        proc = subprocess.Popen(
            [
                sys.executable,
                "-m",
                "sixbox.cli",
                "serve",
                "--port",
                str(port),
                "--static-dir",
                str(static),
            ],
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
        )
        try:
            deadline = time.time() + 15
            last_error = None
            while time.time() < deadline:
                try:
                    resp = httpx.get(f"http://127.0.0.1:{port}/healthz", timeout=1)
                    break
                except httpx.TransportError as exc:
                    last_error = exc
                    time.sleep(0.2)
            else:
                pytest.fail(f"server never came up: {last_error}")
            assert resp.status_code == 200
            index = httpx.get(f"http://127.0.0.1:{port}/", timeout=5)
            assert index.status_code == 200
            assert "game" in index.text
            created = httpx.post(
                f"http://127.0.0.1:{port}/sessions",
                json={"mode": "chosen-secret", "box": 1},
                timeout=5,
            )
            assert created.status_code == 201
        finally:
            proc.terminate()
            proc.wait(timeout=10)

    def test_occupied_port_fails_fast(self):
        with socket.socket() as sock:
            sock.bind(("127.0.0.1", 0))
            sock.listen(1)
            port = sock.getsockname()[1]
            proc = subprocess.run(
                [sys.executable, "-m", "sixbox.cli", "serve", "--port", str(port)],
                capture_output=True,
                timeout=30,
            )
        assert proc.returncode != 0

    def test_missing_static_dir_fails(self, capsys):
        code, _, err = run_cli(
            "serve", "--static-dir", "/nonexistent/ui", capsys=capsys
        )
        assert code == 1
        assert "static" in err
