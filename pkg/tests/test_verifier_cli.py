import json

import pytest

from verifier import COMMANDS, build_parser, main

QUICK = [
    "--samples", "2000",
    "--restarts", "4",
    "--directions", "5",
    "--random-forms", "50",
    "--random-frames", "50",
    "--grid-points", "1000",
    "--quiet",
]


def run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path), *QUICK])


def load_report(path):
    with open(path / "report.json") as file:
        return json.load(file)


def checks_by_name(report, section):
    return {check["name"]: check for check in report["checks"] if check["section"] == section}


def test_parser_knows_every_command():
    parser = build_parser()
    for command in COMMANDS:
        args = parser.parse_args([command, "--family", "so", "--p", "1", "--q", "2"])
        assert args.command == command


def test_verify_real_hyperbolic(tmp_path):
    assert run(tmp_path, "verify", "--family", "so", "--p", "1", "--q", "2", "--seed", "7") == 0
    report = load_report(tmp_path)
    assert report["passed"]
    assert report["seed"] == 7
    assert report["algebra"]["label"] == "so(1,4)"
    coercivity = report["sections"]["coercivity"]
    assert coercivity["constant"] == pytest.approx(1.0, abs=1e-5)
    assert report["sections"]["curvature"]["table_fit"]["fitted_ricci"] == pytest.approx(-3.0, rel=1e-6)
    comparison = report["sections"]["comparison"]
    assert comparison["a_s_normalized_margin"] >= -1e-6
    assert isinstance(comparison["a_s_absolute_margin"], float)
    for name in ("report.json", "timings.json", "algebra.json", "table1.csv", "profiles/direction_000.csv"):
        assert (tmp_path / name).exists(), name


def test_verify_from_algebra_config(tmp_path):
    assert run(tmp_path, "verify", "--config", "algebras/sp_1_1.json") == 0
    table_fit = load_report(tmp_path)["sections"]["curvature"]["table_fit"]
    assert table_fit["fitted_min_k"] == pytest.approx(-4.0)
    assert table_fit["fitted_ricci"] == pytest.approx(-12.0, rel=1e-6)
    header = (tmp_path / "table1.csv").read_text().splitlines()[0]
    assert header == "type,algebra,sec_curvature,ricci_curvature,table_sec_curvature,table_ricci_curvature"


def test_report_is_reproducible(tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"
    args = ["identities", "--family", "sp", "--m", "1", "--n", "2", "--seed", "3"]
    assert run(first, *args) == 0
    assert run(second, *args) == 0
    assert (first / "report.json").read_bytes() == (second / "report.json").read_bytes()


def test_harmonic_subcommand_runs_its_prerequisites(tmp_path):
    assert run(tmp_path, "harmonic", "--family", "so", "--p", "2", "--q", "2") == 0
    report = load_report(tmp_path)
    assert set(report["sections"]) == {"algebra", "harmonic"}
    harmonic = checks_by_name(report, "harmonic")
    assert harmonic["invariant_solutions"]["value"] == 0
    assert harmonic["negative_control"]["passed"]
    assert not (tmp_path / "algebra.json").exists()


def test_table_sections_need_q_at_least_two(tmp_path, capsys):
    assert run(tmp_path, "verify", "--family", "so", "--p", "2", "--q", "1") == 2
    assert "q >= 2" in capsys.readouterr().err
    assert not (tmp_path / "report.json").exists()


def test_algebra_subcommand_allows_small_q(tmp_path):
    assert run(tmp_path, "algebra", "--family", "so", "--p", "3", "--q", "1") == 0
    document = json.loads((tmp_path / "algebra.json").read_text())
    assert document["algebra"]["label"] == "so(3,2)"


@pytest.mark.parametrize("args", [
    ["verify", "--family", "su", "--p", "1", "--q", "2"],
    ["verify", "--p", "1", "--q", "2"],
    ["verify", "--family", "so", "--p", "0", "--q", "2"],
    ["verify", "--family", "so", "--p", "1", "--q", "1"],
    ["verify", "--family", "so", "--p", "1", "--q", "2", "--tol-scale", "0"],
    ["verify", "--config", "algebras/missing.json"],
])
def test_usage_errors_exit_with_two(tmp_path, args):
    assert run(tmp_path, *args) == 2


def test_logfile_is_written(tmp_path):
    logfile = tmp_path / "run.log"
    assert run(tmp_path, "algebra", "--family", "sp", "--m", "1", "--n", "1", "--logfile", str(logfile)) == 0
    text = logfile.read_text()
    assert "Starting algebra for sp(1,1)" in text
    assert "exit code 0" in text


def test_quiet_run_sends_library_messages_to_the_logfile(tmp_path, capsys):
    logfile = tmp_path / "run.log"
    assert run(tmp_path, "coercivity", "--family", "so", "--p", "1", "--q", "2", "--logfile", str(logfile)) == 0
    assert capsys.readouterr().err == ""
    text = logfile.read_text()
    assert "curvature survey minK=" in text
    assert "table fit scale=" in text
    assert "growth report: C=" in text


@pytest.mark.slow
@pytest.mark.parametrize("config", ["so_2_4", "so_3_4", "sp_1_2", "sp_2_2"])
def test_verify_presets(tmp_path, config):
    assert main(["verify", "--config", f"algebras/{config}.json", "--out", str(tmp_path), "--quiet",
                 "--samples", "20000", "--restarts", "10", "--directions", "20"]) == 0
