import json
import subprocess
import sys

import numpy as np
import pytest

from measureval.cli import main, read_measurements
from measureval.exceptions import DataError
from measureval.simulation import RejectionEstimate, SimulationConfig, estimate_rejection_ratio


def write_run(path, values, header="# values in cm^3"):
    path.write_text(header + "\n" + "\n".join(repr(float(v)) for v in values) + "\n")
    return path


@pytest.fixture
def reference(tmp_path):
    # ten values with mean 21.35 and sd exactly 0.01 (to rounding)
    z = np.array([-1.5, -1, -0.5, -0.25, 0, 0, 0.25, 0.5, 1, 1.5])
    z = z / z.std(ddof=1)
    return write_run(tmp_path / "ref.csv", 21.35 + 0.01 * z)


class TestReadMeasurements:
    def test_comments_and_blank_lines(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("# header\n\n21.35\n  21.36  \n# note\n21.34,\n")
        assert read_measurements(p).tolist() == [21.35, 21.36, 21.34]

    def test_non_numeric_names_line(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("21.35\n# ok\nabc\n")
        with pytest.raises(DataError, match=r"bad.csv:3: not a number"):
            read_measurements(p)

    def test_two_columns_rejected(self, tmp_path):
        p = tmp_path / "two.csv"
        p.write_text("21.35,21.36\n")
        with pytest.raises(DataError, match=":1:"):
            read_measurements(p)

    def test_non_finite_rejected(self, tmp_path):
        p = tmp_path / "nan.csv"
        p.write_text("21.35\nnan\n")
        with pytest.raises(DataError, match=":2:"):
            read_measurements(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError, match="missing.csv"):
            read_measurements(tmp_path / "missing.csv")


class TestEvaluate:
    def test_all_accept(self, reference, tmp_path, capsys):
        test = write_run(tmp_path / "t.csv", [21.34, 21.35, 21.36])
        code = main(["evaluate", str(reference), str(test), "--criterion", "mean",
                     "--criterion", "variance", "--criterion", "combined"])
        assert code == 0
        assert "overall: ACCEPT" in capsys.readouterr().out

    def test_biased_run_rejected(self, reference, tmp_path, capsys):
        test = write_run(tmp_path / "t.csv", [21.36, 21.37, 21.38])
        code = main(["evaluate", str(reference), str(test), "--alpha", "0.05", "--criterion", "mean"])
        out = capsys.readouterr().out
        assert code == 2
        assert "REJECT" in out
        assert "21.364891" in out

    def test_single_value_is_an_error(self, reference, tmp_path, capsys):
        test = write_run(tmp_path / "t.csv", [21.35])
        assert main(["evaluate", str(reference), str(test)]) == 1
        assert "at least 2" in capsys.readouterr().err

    def test_corrupt_file(self, reference, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("21.35\n21.x\n")
        assert main(["evaluate", str(reference), str(bad)]) == 1
        err = capsys.readouterr().err
        assert "bad.csv:2" in err

    def test_classical_needs_true_value(self, reference, tmp_path):
        test = write_run(tmp_path / "t.csv", [21.34, 21.35, 21.36])
        assert main(["evaluate", str(reference), str(test), "--criterion", "classical"]) == 1
        assert main(["evaluate", str(reference), str(test), "--criterion", "classical",
                     "--mu-true", "21.35"]) == 0

    def test_json_report(self, reference, tmp_path):
        test = write_run(tmp_path / "t.csv", [21.34, 21.35, 21.36])
        out = tmp_path / "report.json"
        code = main(["evaluate", str(reference), str(test), "--criterion", "mean", "--criterion",
                     "welch", "--criterion", "combined", "--tail", "two-sided", "--json",
                     "--output", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        assert set(report) >= {"reference", "test", "verdicts", "alpha", "timestamp"}
        assert [v["criterion"] for v in report["verdicts"]] == ["mean", "welch", "combined"]
        for v in report["verdicts"]:
            assert set(v) >= {"criterion", "accepted", "statistic", "interval", "alpha", "df", "critical"}
        assert len(report["verdicts"][2]["components"]) == 2
        assert report["reference"]["count"] == 10

    def test_usage_error_exit_code(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["evaluate"])
        assert info.value.code == 1


class TestSimulate:
    def test_alpha_half(self, capsys):
        code = main(["simulate", "--criterion", "mean", "--mu-test", "21.35", "--sigma-test", "0.01",
                     "--alpha", "0.5", "--reps", "10000"])
        assert code == 0
        row = capsys.readouterr().out.strip().splitlines()[-1].split()
        assert abs(float(row[3]) - 0.5) <= 0.015

    def test_json_roundtrip_is_exact(self, tmp_path):
        out = tmp_path / "sim.json"
        assert main(["simulate", "--mu-test", "21.36", "--reps", "20000", "--seed", "5", "--json",
                     "--output", str(out)]) == 0
        doc = json.loads(out.read_text())
        row = doc["rows"][0]
        cfg = SimulationConfig(**row["config"])
        assert RejectionEstimate(**row["estimate"]) == estimate_rejection_ratio(cfg)

    def test_table_three_is_deterministic(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        main(["simulate", "--table", "3", "--seed", "7", "--output", str(a)])
        main(["simulate", "--table", "3", "--seed", "7", "--output", str(b)])
        assert a.read_bytes() == b.read_bytes()
        lines = a.read_text().splitlines()
        assert len(lines) == 5
        assert all(len(cell.split(".")[1]) == 6 for cell in lines[-1].split()[3:])

    def test_thread_env_does_not_change_output(self, tmp_path, monkeypatch):
        outputs = []
        for threads in ("1", "8"):
            monkeypatch.setenv("MEASUREVAL_THREADS", threads)
            p = tmp_path / f"t{threads}.txt"
            main(["simulate", "--criterion", "welch", "--reps", "70000", "--seed", "3", "--output", str(p)])
            outputs.append(p.read_bytes())
        assert outputs[0] == outputs[1]

    def test_invalid_parameters(self, capsys):
        assert main(["simulate", "--sigma-test", "0"]) == 1
        assert main(["simulate", "--alpha", "2"]) == 1


class TestCritical:
    def test_t_two_sided(self, capsys):
        assert main(["critical", "t", "--alpha", "0.05", "--df", "9", "--two-sided"]) == 0
        assert capsys.readouterr().out.strip() == "2.262157"

    def test_f_upper(self, capsys):
        assert main(["critical", "f", "--alpha", "0.05", "--df1", "2", "--df2", "9", "--upper"]) == 0
        assert capsys.readouterr().out.strip() == "4.256495"

    def test_f_two_sided_prints_both_bounds(self, capsys):
        assert main(["critical", "f", "--alpha", "0.05", "--df1", "2", "--df2", "9", "--two-sided"]) == 0
        lo, hi = map(float, capsys.readouterr().out.split())
        assert lo < 1 < hi

    def test_bad_alpha(self, capsys):
        assert main(["critical", "t", "--alpha", "1.5", "--df", "9"]) == 1

    def test_missing_df(self, capsys):
        assert main(["critical", "t", "--alpha", "0.05"]) == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "measureval", "critical", "t", "--alpha", "0.01", "--df", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "9.924843"
