import json

import numpy as np
import pytest

from wente_index.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestReport:
    def test_json_payload(self, capsys):
        code, out, _ = run_cli(
            capsys, "report", "--surface", "3/2", "--m", "181", "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["schema_version"] == 1
        (report,) = payload["reports"]
        assert report["index_estimate"] == [10, 11]
        assert report["m_used"] == 181
        assert payload["config"]["surface"] == "3/2"

    def test_repeated_runs_byte_identical(self, capsys):
        args = ("report", "--surface", "4/3", "--m", "25", "--grid", "256")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second

    def test_default_m_is_reference_size(self, capsys):
        code, out, _ = run_cli(capsys, "report", "--surface", "4/3", "--grid", "256")
        payload = json.loads(out)
        assert payload["reports"][0]["m_used"] == 81

    def test_method_both_reports_discrepancy(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "report", "--surface", "4/3", "--m", "81", "--grid", "128", "--method", "both",
        )
        assert code == 0
        report = json.loads(out)["reports"][0]
        assert report["method_discrepancy"] <= 1e-9

    def test_unreduced_fraction_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["report", "--surface", "9/9"])
        assert info.value.code == 2

    def test_text_format(self, capsys):
        code, out, _ = run_cli(
            capsys, "report", "--surface", "3/2", "--m", "41", "--grid", "256", "--format", "text"
        )
        assert "index estimate" in out
        assert "3/2" in out

    def test_fan_out_keeps_catalog_order(self, capsys):
        # 25 completes a shell for both lattice parities
        code, out, _ = run_cli(
            capsys, "report", "--surface", "all", "--m", "25", "--grid", "256", "--jobs", "2"
        )
        assert code == 0
        payload = json.loads(out)
        from wente_index.surface import CATALOG

        labels = [r["surface"] for r in payload["reports"]]
        assert labels == [f"{ell}/{n}" for ell, n, _ in CATALOG]


class TestBounds:
    def test_all_surfaces(self, capsys):
        code, out, _ = run_cli(capsys, "bounds", "--format", "json")
        payload = json.loads(out)
        assert len(payload["rows"]) == 19
        row = next(r for r in payload["rows"] if r["surface"] == "73/72")
        assert (row["sandwich_lower"], row["sandwich_upper"]) == (1962, 2353)

    def test_csv_format(self, capsys):
        code, out, _ = run_cli(capsys, "bounds", "--surface", "3/2", "--format", "csv")
        lines = out.strip().splitlines()
        assert len(lines) == 2
        assert "sandwich_lower" in lines[0]


class TestTables:
    def test_table2_all_rows_pass(self, capsys):
        code, out, _ = run_cli(capsys, "table2", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["all_pass"] is True
        assert len(payload["rows"]) == 19

    def test_table3_single_row(self, capsys):
        code, out, _ = run_cli(capsys, "table3", "--surface", "4/3", "--format", "json")
        payload = json.loads(out)
        (row,) = payload["rows"]
        assert row["pass"]["galerkin_k"] is True
        assert row["computed"]["galerkin_k"] == 10


class TestSubspace:
    def test_published_set_w43(self, capsys):
        code, out, _ = run_cli(
            capsys, "subspace", "--surface", "4/3", "--grid", "256", "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["negative_definite"] is True
        assert payload["implied_lower"] == 9
        matrix = np.array(payload["matrix"])
        assert matrix.shape == (10, 10)
        assert matrix[0, 8] == pytest.approx(-3.23, abs=0.05)
        rounded = np.array(payload["matrix_3sf"])
        assert rounded[0, 0] == pytest.approx(-5.17, abs=0.005)

    def test_empty_indices_usage_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["subspace", "--surface", "3/2", "--indices", ""])
        assert info.value.code == 2

    def test_explicit_indices(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "subspace", "--surface", "3/2", "--indices", "1,2,3", "--grid", "256",
            "--format", "json",
        )
        payload = json.loads(out)
        assert payload["indices"] == [1, 2, 3]
        assert payload["negative_definite"] is True


class TestCache:
    def test_cold_and_warm_runs_identical(self, capsys, tmp_path):
        args = (
            "report", "--surface", "3/2", "--m", "41", "--grid", "256",
            "--cache-dir", str(tmp_path),
        )
        _, cold, _ = run_cli(capsys, *args)
        assert list(tmp_path.glob("*.wntpot"))
        _, warm, _ = run_cli(capsys, *args)
        assert cold == warm

    def test_inspect_and_clear(self, capsys, tmp_path):
        run_cli(
            capsys,
            "report", "--surface", "3/2", "--m", "41", "--grid", "256",
            "--cache-dir", str(tmp_path),
        )
        code, out, _ = run_cli(capsys, "cache", "inspect", "--cache-dir", str(tmp_path))
        payload = json.loads(out)
        assert len(payload["rows"]) == 1
        assert payload["rows"][0]["surface"] == "3/2"
        code, out, _ = run_cli(capsys, "cache", "clear", "--cache-dir", str(tmp_path))
        assert code == 0
        assert not list(tmp_path.glob("*.wntpot"))

    def test_env_var_cache_dir(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("WENTE_CACHE_DIR", str(tmp_path))
        run_cli(capsys, "report", "--surface", "3/2", "--m", "41", "--grid", "256")
        assert list(tmp_path.glob("*.wntpot"))

    def test_cache_without_dir_is_usage_error(self, capsys, monkeypatch):
        monkeypatch.delenv("WENTE_CACHE_DIR", raising=False)
        with pytest.raises(SystemExit) as info:
            main(["cache", "inspect"])
        assert info.value.code == 2
