import json
import subprocess
import sys

from cdgacalc.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_cohomology_table_output(capsys):
    code, out, err = run_cli(capsys, "cohomology", "--space", "P2", "--r", "2",
                             "--c", "1", "--max-degree", "6")
    assert code == 0 and not err
    lines = out.strip().splitlines()
    assert lines[0] == "model: A2(P2, c=x)"
    dims = [int(line.split()[1]) for line in lines[2:]]
    assert dims == [1, 1, 2, 3, 1, 4, 5]


def test_cohomology_json_output(capsys):
    code, out, _ = run_cli(capsys, "cohomology", "--space", "P1", "--r", "2",
                           "--max-degree", "4", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert doc["result"]["dims"] == [1, 2, 2, 3, 4]
    assert doc["computed_range"]["max_degree"] == 4
    assert all(len(row) == 3 for row in doc["result"]["entries"])


def test_cohomology_csv_output(capsys):
    code, out, _ = run_cli(capsys, "cohomology", "--space", "P1", "--r", "1",
                           "--max-degree", "3", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "degree,weight,dim"
    assert lines[1] == "0,0,1"


def test_output_deterministic_across_runs_and_threads(capsys):
    outputs = []
    for threads in ("1", "1", "3"):
        code, out, _ = run_cli(capsys, "cohomology", "--space", "P1xP1",
                               "--r", "2", "--c", "[1:1]", "--max-degree", "5",
                               "--format", "json", "--threads", threads)
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1] == outputs[2]


def test_configuration_model_flag(capsys):
    code, out, _ = run_cli(capsys, "cohomology", "--space", "P1", "--r", "3",
                           "--model", "C", "--max-degree", "4")
    assert code == 0
    dims = [int(line.split()[1]) for line in out.strip().splitlines()[2:]]
    assert dims == [1, 0, 0, 1, 0]


def test_twisted_model_flag(capsys):
    code, out, _ = run_cli(capsys, "cohomology", "--space", "P2", "--r", "1",
                           "--model", "AL", "--d", "2", "--max-degree", "4")
    assert code == 0
    dims = [int(line.split()[1]) for line in out.strip().splitlines()[2:]]
    assert dims == [1, 1, 1, 2, 1]


def test_euler_command(capsys):
    code, out, _ = run_cli(capsys, "euler", "--space", "P1", "--r", "2",
                           "--model", "C", "--w-max", "6")
    assert code == 0
    assert "1 + w^2" in out


def test_series_commands(capsys):
    code, out, _ = run_cli(capsys, "series", "--space", "P2", "--kind", "rho",
                           "--max", "12")
    assert code == 0 and out.strip().splitlines()[-1] == "0"
    code, out, _ = run_cli(capsys, "series", "--space", "P1", "--kind", "pr",
                           "--r", "2", "--max", "6", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1] == "0,1"
    assert out.splitlines()[3] == "2,-2"


def test_invariants_command(capsys):
    code, out, _ = run_cli(capsys, "invariants", "--space", "P1", "--r", "2",
                           "--max-degree", "4", "--subgroup", "full")
    assert code == 0
    dims = [int(line.split()[1]) for line in out.strip().splitlines()[2:]]
    assert dims == [1, 2, 1, 1, 3]
    code, out, _ = run_cli(capsys, "invariants", "--space", "P1", "--r", "2",
                           "--max-degree", "4", "--subgroup", "21",
                           "--character", "sign")
    assert code == 0
    dims = [int(line.split()[1]) for line in out.strip().splitlines()[2:]]
    assert dims == [0, 0, 1, 2, 1]


def test_verify_command(capsys):
    code, out, _ = run_cli(capsys, "verify", "--space", "P1", "--r", "2",
                           "--max-degree", "6")
    assert code == 0
    assert "ok: d^2 = 0" in out


def test_bad_space_exits_2(capsys):
    code, out, err = run_cli(capsys, "cohomology", "--space", "nope",
                             "--r", "2", "--max-degree", "4")
    assert code == 2
    assert err.startswith("cdgacalc: error:")
    assert len(err.strip().splitlines()) == 1


def test_invalid_custom_file_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "name": "bad", "n": 1,
        "basis": [{"label": "1", "degree": 0}, {"label": "u", "degree": 1},
                  {"label": "v", "degree": 1}, {"label": "w", "degree": 2}],
        "unit": "1", "fundamental": "w",
        "products": [{"left": "u", "right": "v", "value": []}],
    }))
    code, out, err = run_cli(capsys, "cohomology", "--space",
                             f"custom:{bad}", "--r", "1", "--max-degree", "2")
    assert code == 2
    assert "pairing" in err


def test_custom_space_matches_builtin(tmp_path, capsys):
    doc = {
        "name": "clone", "n": 1,
        "basis": [{"label": "1", "degree": 0}, {"label": "h", "degree": 2}],
        "unit": "1", "fundamental": "h",
        "products": [{"left": "h", "right": "h", "value": []}],
    }
    path = tmp_path / "p1.json"
    path.write_text(json.dumps(doc))
    _, out_custom, _ = run_cli(capsys, "cohomology", "--space",
                               f"custom:{path}", "--r", "2", "--c", "1",
                               "--max-degree", "5", "--format", "csv")
    _, out_builtin, _ = run_cli(capsys, "cohomology", "--space", "P1",
                                "--r", "2", "--c", "1", "--max-degree", "5",
                                "--format", "csv")
    assert out_custom == out_builtin


def test_env_thread_override(monkeypatch, capsys):
    monkeypatch.setenv("CDGACALC_THREADS", "2")
    code, out, _ = run_cli(capsys, "cohomology", "--space", "P1", "--r", "1",
                           "--max-degree", "3", "--format", "json")
    assert code == 0
    monkeypatch.setenv("CDGACALC_THREADS", "zap")
    code, _, err = run_cli(capsys, "cohomology", "--space", "P1", "--r", "1",
                           "--max-degree", "3")
    assert code == 2 and "CDGACALC_THREADS" in err


def test_cohomology_skew_product_example(capsys):
    code, out, _ = run_cli(capsys, "cohomology", "--space", "P1xP1",
                           "--r", "2", "--c", "[1:0]", "--max-degree", "10",
                           "--format", "json")
    assert code == 0
    dims = json.loads(out)["result"]["dims"]
    assert dims[9] == 19 and dims[10] == 17


def test_table1_exits_zero_when_all_match(capsys):
    code, out, _ = run_cli(capsys, "table1")
    assert code == 0
    assert "all 44 entries match" in out


def test_module_entrypoint_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "cdgacalc.cli", "series", "--space", "P1",
         "--kind", "pu-degree", "--max", "4"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip().endswith("1 + t")
