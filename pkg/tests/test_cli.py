import json
import subprocess
import sys

from strongnil.cli import main
from strongnil.fixtures import run_fixture_suite
from strongnil.maps import PolyMap


def run_cli(*args, env_extra=None):
    import os

    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "strongnil", *args],
        capture_output=True,
        text=True,
        env=env,
    )


def test_analyze_matrix_h4_fixture():
    proc = run_cli("analyze-matrix", "--fixture", "H4")
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    assert payload["regular"] == 2
    assert payload["strong"] == 3
    assert payload["blocks"] == [1, 2, 1]


def test_analyze_zero_matrix_from_file(tmp_path):
    path = tmp_path / "zero.json"
    path.write_text(
        json.dumps({"n": 3, "m": 3, "M": [["0", "0", "0"]] * 3}), encoding="utf-8"
    )
    proc = run_cli("analyze-matrix", "--input", str(path))
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    assert payload["regular"] == 1
    assert payload["strong"] == 1
    assert payload["blocks"] == [3]


def test_check_qt_fixture():
    proc = run_cli("check-qt", "--fixture", "QT3")
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    assert payload["is_quasi_translation"] is True
    qt = payload["qt_index2"]
    assert qt["s"] == 1
    assert all(qt["statements"].values()) and qt["anchor"] and qt["all_agree"]


def test_triangularize_certificate_schema():
    proc = run_cli("triangularize", "--fixture", "H6")
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    assert payload["index"] == 3
    assert payload["blocks"] == [2, 3, 1]
    assert len(payload["T"]) == 6
    assert len(payload["subdiagonal"]) == 2
    assert len(payload["subdiagonal"][0]) == 3  # rows of A_1 = second block size
    assert len(payload["subdiagonal"][0][0]) == 2  # cols of A_1 = first block size


def test_triangularize_not_strongly_nilpotent():
    proc = run_cli("analyze-matrix", "--fixture", "NC3")
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    assert payload["strongly_nilpotent"] is False
    assert payload["regular"] == 3
    assert "pair_trace_obstruction" in payload


def test_dual_fixture_index():
    proc = run_cli("analyze-matrix", "--fixture", "DUAL", "--m", "4")
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    assert payload["ring"] == "Q[eps]"
    assert payload["regular"] == 5
    assert "strong" not in payload


def test_equivalence_command():
    proc = run_cli("equivalence", "--fixture", "H4", "--r", "3")
    payload = json.loads(proc.stdout)
    assert payload["agree"] is True
    assert payload["statements"] == {"1": True, "2": True, "3": True, "4": True}
    proc = run_cli("equivalence", "--fixture", "H4", "--r", "2", "--statement", "1")
    payload = json.loads(proc.stdout)
    assert payload["holds"] is False


def test_analyze_map_h5_with_d():
    proc = run_cli("analyze-map", "--fixture", "H5", "--d", "3")
    payload = json.loads(proc.stdout)
    assert payload["regular"] == 3
    assert payload["strong"] == 4
    assert payload["blocks"] == [1, 1, 2, 1]
    assert payload["equivalence"]["agree"] is True


def test_nc_check_command():
    proc = run_cli("nc-check")
    payload = json.loads(proc.stdout)
    assert payload["nilpotency_index"] == 3
    assert payload["strongly_nilpotent"] is False
    assert payload["pair_trace_nonzero"] is True


def test_fixture_suite_passes():
    proc = run_cli("fixtures")
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    assert payload["all_ok"] is True
    names = {row["name"] for row in payload["results"]}
    assert {"H4", "H6", "H5(d=2)", "H5(d=3)", "H5(d=4)", "NC3", "QT3", "R1"} <= names
    assert {"DUAL(m=2)", "DUAL(m=3)", "DUAL(m=4)"} <= names


def test_fixture_suite_with_seed_is_deterministic():
    a = run_cli("fixtures", "--seed", "7")
    b = run_cli("fixtures", "--seed", "7")
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_corrupted_fixture_detected_in_process():
    # Flip one sign in the last component of the dimension-4 map.
    corrupted = PolyMap.from_strings(4, ["0", "x1^2", "x1^3", "3*x2*x1^2 + 2*x3*x1"])
    result = run_fixture_suite(overrides={"H4": corrupted})
    assert not result.all_ok
    bad = [row for row in result.rows if not row["ok"]]
    assert [row["name"] for row in bad] == ["H4"]


def test_parse_error_exit_code(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(
        json.dumps({"n": 2, "m": 2, "M": [["x1 +", "0"], ["0", "0"]]}),
        encoding="utf-8",
    )
    proc = run_cli("analyze-matrix", "--input", str(path))
    assert proc.returncode == 1
    assert "error" in proc.stderr


def test_schema_error_exit_code(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 2, "M": []}), encoding="utf-8")
    proc = run_cli("analyze-matrix", "--input", str(path))
    assert proc.returncode == 1


def test_missing_input_exit_code():
    proc = run_cli("analyze-matrix")
    assert proc.returncode == 1


def test_unknown_fixture_exit_code():
    proc = run_cli("analyze-matrix", "--fixture", "NOPE")
    assert proc.returncode == 1


def test_both_input_sources_rejected(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"n": 1, "m": 1, "M": [["0"]]}), encoding="utf-8")
    proc = run_cli("analyze-matrix", "--fixture", "H4", "--input", str(path))
    assert proc.returncode == 1


def test_r_must_be_positive():
    proc = run_cli("equivalence", "--fixture", "H4", "--r", "0")
    assert proc.returncode == 1


def test_term_budget_exit_code():
    proc = run_cli(
        "analyze-matrix", "--fixture", "H4", env_extra={"STRONGNIL_MAX_TERMS": "1"}
    )
    assert proc.returncode == 3
    assert "cap" in proc.stderr


def test_max_r_rejected_on_rational_ring():
    proc = run_cli("analyze-matrix", "--fixture", "H4", "--max-r", "10")
    assert proc.returncode == 1


def test_max_r_truncates_dual_search():
    proc = run_cli("analyze-matrix", "--fixture", "DUAL", "--m", "3", "--max-r", "2")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["regular"] is None


def test_text_format_renders():
    proc = run_cli("analyze-matrix", "--fixture", "H4", "--format", "text")
    assert proc.returncode == 0
    assert "strong: 3" in proc.stdout
    assert "|" in proc.stdout  # block separators of the conjugated matrix


def test_json_output_round_trips():
    proc = run_cli("analyze-map", "--fixture", "QT3")
    payload = json.loads(proc.stdout)
    assert json.loads(json.dumps(payload)) == payload


def test_in_process_main_matches_subprocess(capsys):
    code = main(["analyze-matrix", "--fixture", "H4"])
    captured = capsys.readouterr()
    assert code == 0
    assert json.loads(captured.out)["strong"] == 3
