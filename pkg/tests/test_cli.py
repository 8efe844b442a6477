"""End-to-end tests of the command-line interface and its exit-code contract."""

import json
import subprocess
import sys

from mahlerq.cli import main


def run_cli(*argv, capsys=None):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestEnumerate:
    def test_table_with_counts_line(self, capsys):
        code, out, _ = run_cli("enumerate", "--n", "3", capsys=capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 4
        assert lines[-1] == "simple=3 weighted=5/3"

    def test_json_array(self, capsys):
        code, out, _ = run_cli("enumerate", "--n", "4", "--format", "json", capsys=capsys)
        assert code == 0
        payload = json.loads(out)
        assert len(payload) == 14
        assert payload[0]["k"] == [2, 3, 7, 42]
        assert payload[0]["lcm"] == 42

    def test_n1_usage_error(self, capsys):
        code, _, err = run_cli("enumerate", "--n", "1", capsys=capsys)
        assert code == 2
        assert "n" in err


class TestSeries:
    def test_local_map_22(self, capsys):
        code, out, _ = run_cli(
            "series", "--model", "2,2", "--order", "4", "--which", "Q", capsys=capsys
        )
        assert code == 0
        assert out.split() == ["0", "1", "2", "5", "14"]

    def test_g0_236(self, capsys):
        code, out, _ = run_cli(
            "series", "--model", "2,3,6", "--order", "3", "--which", "g0", capsys=capsys
        )
        assert code == 0
        assert out.split()[:2] == ["1", "60"]

    def test_direct_weights_accepted(self, capsys):
        code, out, _ = run_cli(
            "series", "--weights", "6:3,2,1", "--order", "2", "--which", "g0",
            capsys=capsys,
        )
        assert code == 0
        assert out.split() == ["1", "60", "13860"]

    def test_invalid_model_exits_2(self, capsys):
        code, _, err = run_cli(
            "series", "--model", "2,5", "--order", "3", capsys=capsys
        )
        assert code == 2
        assert "sum" in err

    def test_json_format(self, capsys):
        code, out, _ = run_cli(
            "series", "--model", "2,2", "--order", "3", "--which", "zQ",
            "--format", "json", capsys=capsys,
        )
        assert json.loads(out) == ["0", "1", "-2", "3"]


class TestPf:
    def test_333(self, capsys):
        code, out, _ = run_cli("pf", "--model", "3,3,3", capsys=capsys)
        assert code == 0
        assert "reduced: C=27 a=[1/3, 2/3] b=[0, 0]" in out
        assert "pf2_applicable: true" in out

    def test_236(self, capsys):
        code, out, _ = run_cli("pf", "--model", "2,3,6", capsys=capsys)
        assert "C=432" in out and "a=[1/6, 5/6]" in out

    def test_n5_case_json(self, capsys):
        code, out, _ = run_cli(
            "pf", "--model", "2,5,10,10,10", "--format", "json", capsys=capsys
        )
        payload = json.loads(out)
        assert payload["reduced"]["a"] == ["1/10", "3/10", "7/10", "9/10"]
        assert payload["pf2_applicable"] is True


class TestVerify:
    def test_333_table(self, capsys):
        code, out, _ = run_cli(
            "verify", "--model", "3,3,3", "--order", "10", capsys=capsys
        )
        assert code == 0
        assert "checks:" in out
        first_row = out.splitlines()[1].split()
        assert first_row[:5] == ["1", "9", "-9", "-9", "9"]

    def test_quintic_b5(self, capsys):
        code, out, _ = run_cli(
            "verify", "--model", "5,5,5,5,5", "--order", "5", "--format", "csv",
            capsys=capsys,
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "m,b,bhat,c,chat,b_over_m,chat_over_m,flags"
        assert lines[5].startswith("5,25050301099750,")

    def test_22_all_zero(self, capsys):
        code, out, _ = run_cli(
            "verify", "--model", "2,2", "--order", "12", "--format", "json",
            capsys=capsys,
        )
        payload = json.loads(out)
        assert all(row["b"] == "0" and row["c"] == "0" for row in payload["rows"])

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "report.json"
        code, _, _ = run_cli(
            "verify", "--model", "3,3,3", "--order", "4", "--out", str(target),
            capsys=capsys,
        )
        assert code == 0
        payload = json.loads(target.read_text())
        assert payload["rows"][0]["b"] == "9"

    def test_flags_column_marks_fractions(self, capsys):
        code, out, _ = run_cli(
            "verify", "--model", "3,3,3", "--order", "2", "--format", "csv",
            capsys=capsys,
        )
        rows = out.splitlines()
        assert rows[2].endswith("bhat;c")  # -9/2 and -63/2 at m=2


class TestBatch:
    def test_compute_then_cache(self, tmp_path, capsys):
        cache = tmp_path / "cache"
        code, out, _ = run_cli(
            "batch", "--n", "3", "--order", "6", "--cache", str(cache), capsys=capsys
        )
        assert code == 0
        assert "0 cached, 3 computed" in out
        assert len(list(cache.glob("*.json"))) == 3

        code, out, _ = run_cli(
            "batch", "--n", "3", "--order", "6", "--cache", str(cache), capsys=capsys
        )
        assert code == 0
        assert "3 cached, 0 computed" in out

    def test_parallel_is_byte_identical(self, tmp_path, capsys):
        one = tmp_path / "one"
        four = tmp_path / "four"
        run_cli("batch", "--n", "3", "--order", "5", "--cache", str(one), capsys=capsys)
        run_cli(
            "batch", "--n", "3", "--order", "5", "--jobs", "4", "--cache", str(four),
            capsys=capsys,
        )
        for path in sorted(one.glob("*.json")):
            assert path.read_bytes() == (four / path.name).read_bytes()

    def test_cache_env_var(self, tmp_path, capsys, monkeypatch):
        cache = tmp_path / "envcache"
        monkeypatch.setenv("MAHLER_CACHE", str(cache))
        code, _, _ = run_cli("batch", "--n", "2", "--order", "4", capsys=capsys)
        assert code == 0
        assert len(list(cache.glob("*.json"))) == 1

    def test_unwritable_cache_exits_2(self, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("a file, not a directory")
        code, _, err = run_cli(
            "batch", "--n", "2", "--order", "4", "--cache", str(blocker), capsys=capsys
        )
        assert code == 2

    def test_summary_counts_fractional_models(self, tmp_path, capsys):
        code, out, _ = run_cli(
            "batch", "--n", "3", "--order", "4", "--cache", str(tmp_path / "c"),
            capsys=capsys,
        )
        # (3,3,3) has bhat_2 = -9/2: one model with a fractional entry
        assert "models=3 all_integer=2 with_fractional=1" in out

    def test_cache_equals_fresh_report(self, tmp_path, capsys):
        from mahlerq import Model, integrality_report
        from mahlerq.cli import cache_path, report_json_text

        cache = tmp_path / "cache"
        run_cli("batch", "--n", "3", "--order", "5", "--cache", str(cache), capsys=capsys)
        model = Model.from_kvector((2, 4, 4))
        cached = cache_path(cache, model, 5).read_text()
        assert cached == report_json_text(integrality_report(model, 5))


class TestMeasure:
    def test_psi_2(self, capsys):
        code, out, _ = run_cli(
            "measure", "--model", "2,2", "--psi", "2", "--order", "64", capsys=capsys
        )
        assert code == 0
        value = float(out.splitlines()[0].split("=")[1])
        import math

        assert abs(value - math.log((2 + math.sqrt(3)) / 2)) < 1e-9

    def test_outside_disk_exits_4(self, capsys):
        code, _, err = run_cli(
            "measure", "--model", "3,3,3", "--psi", "0.1", capsys=capsys
        )
        assert code == 4
        assert "convergence" in err

    def test_bad_usage_exits_2(self, capsys):
        code, _, _ = run_cli("measure", "--model", "2,2", capsys=capsys)  # no --psi
        assert code == 2


class TestConsoleEntry:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "mahlerq", "--version"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.strip() == "0.1.0"
