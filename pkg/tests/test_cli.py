"""End-to-end runs of the command-line interface."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import click
import pytest
from click.testing import CliRunner, Result

from zonalcycle.__main__ import main


def invoke(runner: CliRunner, *args: str) -> Result:
    return runner.invoke(main, list(args), catch_exceptions=False)


def reports_of(result: Result) -> dict[str, dict[str, Any]]:
    envelope = json.loads(result.stdout)
    assert envelope["schema"] == 1
    return {report["check"]: report for report in envelope["reports"]}


def test_entry_point_registers_every_command() -> None:
    assert isinstance(main, click.Group)
    assert set(main.commands) == {
        "verify-constant",
        "verify-beta",
        "braid",
        "encode",
        "diagrams",
        "asymptotic",
        "gram",
    }


def test_help(runner: CliRunner) -> None:
    result = invoke(runner, "--help")
    assert result.exit_code == 0
    for command in ("verify-constant", "verify-beta", "braid", "encode", "diagrams"):
        assert command in result.stdout


def test_diagrams(runner: CliRunner) -> None:
    result = invoke(runner, "diagrams", "--n", "4")
    assert result.exit_code == 0
    reports = reports_of(result)
    assert reports["bijection"]["computed"] == "24"
    assert reports["length"]["status"] == "pass"
    assert len(reports["length"]["details"]["rows"]) == 24


def test_diagrams_csv_table(runner: CliRunner) -> None:
    result = invoke(runner, "--format", "csv", "diagrams", "--n", "3")
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "marked,permutation,length,left_arrows,inversions"
    assert len(lines) == 7


def test_size_guard_is_a_usage_error(runner: CliRunner) -> None:
    result = invoke(runner, "diagrams", "--n", "9")
    assert result.exit_code == 2
    assert "--unsafe-large" in result.stderr


def test_verify_beta(runner: CliRunner) -> None:
    result = invoke(runner, "verify-beta")
    assert result.exit_code == 0
    reports = reports_of(result)
    assert len(reports) == 6
    assert reports["beta k=0.5"]["expected"] == pytest.approx(3.14159265358979)
    assert all(r["status"] == "pass" for r in reports.values())


def test_verify_beta_failure_exits_one(runner: CliRunner) -> None:
    result = invoke(runner, "verify-beta", "--k", "1.5")
    assert result.exit_code == 1
    (report,) = reports_of(result).values()
    assert report["status"] == "fail"
    assert "DomainError" in report["details"]["error"]


def test_verify_beta_needs_two_points(runner: CliRunner) -> None:
    assert invoke(runner, "verify-beta", "--z", "0,1,2").exit_code == 2


@pytest.mark.parametrize(("n", "k", "nodes"), [("1", "0.5", "32"), ("2", "1", "8")])
def test_verify_constant(runner: CliRunner, n: str, k: str, nodes: str) -> None:
    result = invoke(runner, "verify-constant", "--n", n, "--k", k, "--nodes", nodes)
    assert result.exit_code == 0, result.stdout
    reports = reports_of(result)
    assert set(reports) == {
        "constant",
        "z-independence",
        "dirichlet-product",
        "tau-pointwise",
        "tau-jacobian",
    }
    assert reports["constant"]["details"]["scheme"] == "gauss-jacobi-tensor"


def test_verify_constant_nonconvergence_warns(runner: CliRunner) -> None:
    result = invoke(runner, "verify-constant", "--n", "2", "--k", "0.5", "--nodes", "4")
    assert result.exit_code == 1
    constant = reports_of(result)["constant"]
    assert constant["status"] == "warn"
    assert set(constant["details"]) == {"coarse", "fine"}


@pytest.mark.parametrize(
    "args",
    [
        ("verify-constant", "--z", "2,1"),
        ("verify-constant", "--z", "a,b"),
        ("verify-constant", "--n", "4"),
        ("verify-constant", "--nodes", "1"),
    ],
)
def test_verify_constant_usage_errors(runner: CliRunner, args: tuple[str, ...]) -> None:
    assert invoke(runner, *args).exit_code == 2


def test_braid(runner: CliRunner) -> None:
    result = invoke(
        runner, "braid", "--n", "1", "--check-string-formulas", "--vector-rep"
    )
    assert result.exit_code == 0, result.stdout
    reports = reports_of(result)
    assert reports["eigenvalue slot=1"]["computed"] == "-1"
    for check in (
        "intertwining",
        "diagonal-prefactor",
        "square slot=1",
        "even-word",
        "string-formulas",
        "yang-baxter",
        "projector-decomposition",
        "vector-pairs",
        "q-antisymmetric",
    ):
        assert reports[check]["status"] == "pass"


def test_braid_slot_range(runner: CliRunner) -> None:
    assert invoke(runner, "braid", "--n", "1", "--slot", "2").exit_code == 2


def test_encode(runner: CliRunner) -> None:
    result = invoke(runner, "encode", "--n", "1")
    assert result.exit_code == 0, result.stdout
    reports = reports_of(result)
    assert reports["term-count"]["computed"] == "2"
    assert reports["singular form=1"]["computed"] is True
    assert reports["form-duality"]["details"]["denominator_power"] == 1


def test_asymptotic(runner: CliRunner) -> None:
    result = invoke(runner, "asymptotic", "--check-singular")
    assert result.exit_code == 0, result.stdout
    reports = reports_of(result)
    assert reports["asymptotic"]["expected"] == pytest.approx(1.5707963267949)
    assert reports["path-count"]["computed"] == "2"
    assert reports["chain-vertex-singular"]["status"] == "pass"


def test_asymptotic_two_steps(runner: CliRunner) -> None:
    result = invoke(
        runner, "asymptotic", "--s", "3", "--pairing", "1", "--pairing", "2"
    )
    assert result.exit_code == 0, result.stdout
    assert reports_of(result)["asymptotic"]["inputs"]["pairings"] == ["1", "2"]


def test_asymptotic_errors(runner: CliRunner) -> None:
    assert invoke(runner, "asymptotic", "--pairing", "0").exit_code == 1
    three = ("--pairing", "1") * 3
    assert invoke(runner, "asymptotic", "--s", "3", *three).exit_code == 2
    assert invoke(runner, "asymptotic", "--pairing", "x").exit_code == 2


def test_gram(runner: CliRunner) -> None:
    result = invoke(runner, "gram", "--n", "2")
    assert result.exit_code == 0, result.stdout
    reports = reports_of(result)
    assert reports["dimension vector"]["computed"] == "3"
    assert reports["dimension string"]["computed"] == "3"


def test_text_format(runner: CliRunner) -> None:
    result = invoke(runner, "--format", "text", "diagrams", "--n", "2")
    assert result.exit_code == 0
    assert "bijection" in result.stdout


def test_out_file(runner: CliRunner, tmp_path: Path) -> None:
    out = tmp_path / "reports.json"
    result = invoke(runner, "--out", str(out), "diagrams", "--n", "2")
    assert result.exit_code == 0
    assert result.stdout == ""
    assert json.loads(out.read_text(encoding="utf-8"))["command"] == "diagrams"


def test_config_file(runner: CliRunner, tmp_path: Path) -> None:
    config = tmp_path / "config.yml"
    config.write_text("guards:\n  diagrams_n: 2\n", encoding="utf-8")
    result = invoke(runner, "--config-path", str(config), "diagrams", "--n", "3")
    assert result.exit_code == 2
