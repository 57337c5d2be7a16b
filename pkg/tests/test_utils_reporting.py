import json
import math

import numpy as np
import pytest

from src import reporting, utils
from src.exceptions import ConfigError


@pytest.mark.parametrize(
    "text, expected",
    [
        ("pi/4", math.pi / 4),
        ("3*pi/8", 3 * math.pi / 8),
        ("-pi/2", -math.pi / 2),
        ("0.5pi", 0.5 * math.pi),
        ("pi", math.pi),
        ("1.178", 1.178),
        (0.25, 0.25),
    ],
)
def test_parse_angle_accepts_pi_literals(text, expected):
    assert utils.parse_angle(text) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("text", ["abc", "pi/0", "nan", "inf"])
def test_parse_angle_rejects_garbage(text):
    with pytest.raises(ConfigError):
        utils.parse_angle(text)


def test_tolerances_cli_beats_env(monkeypatch):
    monkeypatch.setenv(utils.TOL_ENV, "1e-7")
    tol, ztol, source = utils.configure_tolerances(cli_tol=1e-6)
    assert tol == 1e-6
    assert ztol == utils.DEFAULT_ZERO_TOL
    assert source == "cli"
    assert utils.physicality_tol() == 1e-6


def test_tolerances_from_env(monkeypatch):
    monkeypatch.setenv(utils.ZERO_TOL_ENV, "1e-10")
    tol, ztol, source = utils.configure_tolerances()
    assert tol == utils.DEFAULT_PHYSICALITY_TOL
    assert ztol == 1e-10
    assert source == "env"


def test_invalid_env_tolerance_is_ignored_and_logged(monkeypatch):
    monkeypatch.setenv(utils.TOL_ENV, "loose")
    tol, _ztol, source = utils.configure_tolerances()
    assert tol == utils.DEFAULT_PHYSICALITY_TOL
    assert source == "default"
    with open(reporting.LOG_FILE_NAME, encoding="utf-8") as handle:
        assert "Ignoring invalid DISSIWIRE_TOL" in handle.read()


def test_cli_tolerance_too_loose_is_rejected():
    with pytest.raises(ConfigError):
        utils.configure_tolerances(cli_tol=0.5)


def test_output_dir_precedence(tmp_path, monkeypatch):
    path, source = utils.configure_output_dir(str(tmp_path / "cli"))
    assert source == "cli"
    assert path.endswith("cli")
    monkeypatch.setenv(utils.OUTPUT_DIR_ENV, str(tmp_path / "env"))
    path, source = utils.configure_output_dir()
    assert source == "env"
    assert path.endswith("env")
    monkeypatch.delenv(utils.OUTPUT_DIR_ENV)
    path, source = utils.configure_output_dir()
    assert source == "default"
    assert path.endswith(utils.DEFAULT_OUTPUT_DIR)


def test_format_number_round_trips():
    for value in (0.1, 1.0 / 3.0, 1e-17, 123456789.123):
        assert float(utils.format_number(value)) == value


def test_write_log_prefixes_level(tmp_path):
    target = tmp_path / "custom.log"
    reporting.write_log(["[WARNING] careful", "plain entry"], str(target))
    lines = target.read_text(encoding="utf-8").splitlines()
    assert lines[0].endswith("[WARNING] careful")
    assert lines[1].endswith("[INFO] plain entry")


def test_json_report_encodes_numpy(tmp_path):
    payload = reporting.build_payload(
        "steady",
        {"n_sites": 2, "kind": "ideal"},
        {"covariance": np.eye(2), "pure": np.bool_(True), "count": np.int64(3), "rate": np.float64(0.5)},
    )
    target = tmp_path / "steady.json"
    reporting.write_json_report(payload, str(target))
    loaded = json.loads(target.read_text(encoding="utf-8"))
    assert loaded["schema_version"] == "1.0"
    assert loaded["command"] == "steady"
    assert list(loaded["config"]) == ["kind", "n_sites"]
    assert loaded["covariance"] == [[1.0, 0.0], [0.0, 1.0]]
    assert loaded["pure"] is True
    assert loaded["count"] == 3


def test_csv_report_echoes_config(tmp_path):
    target = tmp_path / "table.csv"
    rows = [{"index": 1, "rate": 0.5, "zero": False}, {"index": 2, "rate": 0.1, "zero": True}]
    reporting.write_csv_report(rows, ["index", "rate", "zero"], {"theta": 0.75, "seed": None}, str(target))
    lines = target.read_text(encoding="utf-8").splitlines()
    assert lines[:3] == ["# schema_version=1.0", "# seed=", "# theta=0.75"]
    assert lines[3] == "index,rate,zero"
    assert lines[4:] == ["1,0.5,false", "2,0.1,true"]
