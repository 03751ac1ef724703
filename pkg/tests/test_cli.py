import csv
import io
import json
import logging
import pathlib
import types

import pytest
import requests

from pda_pow.tools.cli import EXIT_COMPUTATION_ERROR, EXIT_USAGE_ERROR, pda_pow
from tests.common import TABLE_1, TABLE_4_BITCOIN, matches_displayed, matches_table_3

CONFIG_URL = "https://example.com/configs/system.yaml"


@pytest.fixture(autouse=True)
def reset_logging():
    yield
    # The command line handler writes to the captured stderr of the test that created it.
    logging.getLogger().handlers.clear()


def _run(capsys, args: list[str]) -> str:
    pda_pow(args)
    return capsys.readouterr().out


def _exit_code(args: list[str]) -> int:
    with pytest.raises(SystemExit) as exc_info:
        pda_pow(args)
    return exc_info.value.code


@pytest.mark.parametrize(
    ("args", "expected"),
    [
        (["--n", "5", "--k", "4", "--alpha", "5"], "6.38e-7"),
        (["--n", "6", "--k", "4", "--alpha", "2", "--reduced"], "2.52e-5"),
        (["--n", "6", "--k", "4", "--alpha", "2", "--full"], "2.52e-5"),
        (["--n", "5", "--k", "2", "--alpha", "none"], "4e-2"),
        (["--n", "3", "--k", "2", "--powers", "1,2,3", "--player", "2"], "0.25"),
    ],
)
def test_consecutive(capsys, args, expected):
    output = _run(capsys, ["consecutive", *args])
    assert output.endswith("\n")
    assert matches_displayed(float(output), expected), (output, expected)


def test_consecutive_single_player(capsys):
    assert float(_run(capsys, ["consecutive", "--n", "1", "--k", "6", "--alpha", "2"])) == 1.0


def test_consecutive_precision(capsys):
    assert _run(capsys, ["consecutive", "--n", "5", "--k", "2", "--precision", "2"]) == "4.0e-2\n"


def test_consecutive_config_file(capsys, tmp_path: pathlib.Path):
    path = tmp_path / "system.yaml"
    path.write_text("n: 7\nk: 6\nalpha: 2\n")
    # 7^6 states is above the automatic threshold, so the reduced chain is used.
    output = _run(capsys, ["consecutive", "--config", str(path), "--tol", "1e-14"])
    assert matches_table_3(float(output), 7, 6), output


def test_consecutive_output_file(capsys, tmp_path: pathlib.Path):
    path = tmp_path / "results" / "probability.txt"
    assert _run(capsys, ["consecutive", "--n", "5", "--k", "3", "--out", str(path)]) == ""
    assert path.read_text() == "8.00e-3\n"


def _mock_get(monkeypatch, response: types.SimpleNamespace) -> list[tuple[str, dict[str, str]]]:
    requests_made = []

    def get(url, headers):
        requests_made.append((url, headers))
        return response

    monkeypatch.setattr(requests, "get", get)
    return requests_made


def test_consecutive_config_url(capsys, monkeypatch, tmp_path: pathlib.Path):
    requests_made = _mock_get(monkeypatch, types.SimpleNamespace(status_code=200, text="n: 5\nk: 4\nalpha: 5\n"))
    token_path = tmp_path / "token"
    token_path.write_text("secret\n")
    output = _run(capsys, ["consecutive", "--config", CONFIG_URL, "--config_auth_token_file", str(token_path)])
    assert matches_displayed(float(output), TABLE_1[5.0][4]), output
    assert requests_made == [
        (CONFIG_URL, {"Accept": "application/vnd.github.v3.raw", "Authorization": "token secret"})
    ]


def test_consecutive_config_url_not_found(monkeypatch):
    requests_made = _mock_get(monkeypatch, types.SimpleNamespace(status_code=404, reason=b"Not Found", text=""))
    assert _exit_code(["consecutive", "--config", CONFIG_URL]) == EXIT_COMPUTATION_ERROR
    assert requests_made == [(CONFIG_URL, {"Accept": "application/vnd.github.v3.raw"})]


def test_validate_only(capsys):
    assert _run(capsys, ["consecutive", "-v", "--n", "5", "--k", "4", "--alpha", "5"]) == ""


@pytest.mark.parametrize(
    "args",
    [
        ["bogus"],
        ["consecutive", "--n", "0"],
        ["consecutive", "--n", "two"],
        ["consecutive", "--n", "2", "--alpha", "0"],
        ["consecutive", "--n", "2", "--alpha", "-1"],
        ["consecutive", "--n", "2", "--k", "0"],
        ["consecutive", "--n", "3", "--powers", "1,2"],
        ["consecutive", "--n", "2", "--player", "5"],
        ["consecutive", "--n", "2", "--powers", "1,2", "--reduced"],
        ["consecutive", "--n", "2", "--full", "--reduced"],
        ["consecutive", "--n", "2", "--bogus", "3"],
        ["consecutive", "--config", "missing.yaml"],
        ["simulate", "--n", "2", "--k", "3", "--blocks", "2"],
        ["simulate", "--n", "2", "--player", "2"],
        ["table", "--table", "table2"],
        ["table", "--table", "table1", "table.n_values=[4]"],
        ["nakamoto", "--q", "1.5"],
        ["nakamoto", "--z", "0"],
    ],
)
def test_usage_errors(args):
    assert _exit_code(args) == EXIT_USAGE_ERROR


def test_convergence_failure():
    args = ["consecutive", "--n", "3", "--k", "3", "--alpha", "5", "--full", "chain.max_iterations=1"]
    assert _exit_code(args) == EXIT_COMPUTATION_ERROR


def test_state_budget_exceeded():
    args = ["consecutive", "--n", "4", "--k", "6", "--full", "chain.state_budget=1000"]
    assert _exit_code(args) == EXIT_COMPUTATION_ERROR


def test_nakamoto(capsys):
    assert _run(capsys, ["nakamoto", "--q", "0.1", "--z", "1"]) == "2.046e-1\n"
    output = _run(capsys, ["nakamoto", "--q", "0.1", "--z", "3"])
    assert matches_displayed(float(output), TABLE_4_BITCOIN[2]), output
    assert _run(capsys, ["nakamoto", "--q", "0.5", "--z", "6"]) == "1.000e0\n"


def test_reduce_info(capsys):
    assert json.loads(_run(capsys, ["reduce-info", "--n", "7", "--k", "6"])) == {
        "n": 7,
        "k": 6,
        "standard_states": 117649,
        "reduced_states": 203,
        "reduction_factor": 117649 / 203,
    }


def test_table_csv(capsys):
    rows = list(csv.reader(io.StringIO(_run(capsys, ["table", "--table", "table4-bitcoin"]))))
    assert rows[0] == ["Mechanism \\ k", "1", "2", "3", "4", "5", "6"]
    assert rows[1][0] == "Bitcoin PoW"
    assert all(matches_displayed(float(value), displayed) for value, displayed in zip(rows[1][1:], TABLE_4_BITCOIN))
    assert len(rows) == 2


def test_table_pda_rows(capsys):
    rows = list(csv.reader(io.StringIO(_run(capsys, ["table", "--table", "table4-bitcoin", "--pda-rows"]))))
    assert [row[0] for row in rows[1:4]] == ["Bitcoin PoW", "PDA PoW: 2-exponential", "PDA PoW: 5-exponential"]
    assert rows[2][1:] == ["n/a"] * 6
    assert rows[-1][0].startswith("# ")


def test_table_json(capsys):
    output = _run(
        capsys, ["table", "--table", "table3", "--format", "json", "table.n_values=[2,3]", "table.k_values=[1,2]"]
    )
    data = json.loads(output)
    assert [row["label"] for row in data["rows"]] == ["2", "3"]
    for row, n in zip(data["rows"], (2, 3)):
        assert all(matches_table_3(value, n, k) for k, value in enumerate(row["values"], 1))


def test_table_markdown_file(capsys, tmp_path: pathlib.Path):
    path = tmp_path / "table.md"
    args = ["table", "--table", "table1", "--format", "markdown", "table.k_values=[2]", "--out", str(path)]
    assert _run(capsys, args) == ""
    lines = path.read_text().splitlines()
    assert lines[0] == "**Probability of consecutive winning. n=5.**"
    assert lines[2] == "| Difficulty function \\ k | 2 |"
    assert lines[4] == "| No difficulty | 4.00e-2 |"


def test_simulate(capsys):
    lines = _run(capsys, ["simulate", "--n", "2", "--k", "2", "--alpha", "2", "--blocks", "20000", "--seed", "3"])
    report_line, comparison = lines.splitlines()
    report = json.loads(report_line)
    assert report["blocks"] == 20000
    assert report["seed"] == 3
    assert report["burn_in"] == 20
    assert sum(report["win_counts"]) == 20000
    fields = dict(field.split("=") for field in comparison.split())
    assert fields["seed"] == "3"
    assert fields["m"] == "2"
    assert fields["analytic"] == "1.923e-1"
    assert abs(float(fields["z"])) < 5


def test_simulate_runs(capsys):
    args = ["simulate", "--n", "3", "--k", "2", "--blocks", "5000", "--seed", "10", "--runs", "2", "--race-mode"]
    lines = _run(capsys, args).splitlines()
    assert len(lines) == 4
    reports = [json.loads(line) for line in lines[:2]]
    assert [report["seed"] for report in reports] == [10, 11]
    assert all(report["race_mode"] for report in reports)
    assert lines[2].startswith("seed=10 m=2 ")
    assert lines[3].startswith("seed=11 m=2 ")


def test_simulate_without_exact_value(capsys):
    args = ["simulate", "--n", "3", "--k", "3", "--powers", "1,1,2", "--blocks", "100", "chain.state_budget=10"]
    lines = _run(capsys, args).splitlines()
    assert len(lines) == 1
    assert json.loads(lines[0])["blocks"] == 100
