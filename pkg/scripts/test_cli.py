"""
Tests de la línea de comandos
"""
import io
import json
import re
import shlex
from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from loguru import logger

from app.api.schemas import GateCommand, SpectrumCommand
from app.main import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main, parse_args
from app.physics.errors import UsageError
from app.physics.pulses import PulseSchedule, SigmaPulse

README = Path(__file__).resolve().parents[1] / "README.md"


@pytest.fixture(autouse=True)
def reset_logger():
    yield
    logger.remove()


def readme_commands():
    text = README.read_text(encoding="utf-8")
    return [shlex.split(line)[3:] for line in re.findall(r"^python -m app\.main .+$", text, re.M)]


def matrix_from_pairs(pairs):
    return np.array([[re + 1j * im for re, im in row] for row in pairs])


# ===================================
# ANÁLISIS DE ARGUMENTOS
# ===================================
def test_parse_spectrum_defaults():
    cmd = parse_args(["spectrum"])
    assert isinstance(cmd, SpectrumCommand)
    assert (cmd.theta, cmd.levels, cmd.format) == (0.0, 6, "csv")


def test_parse_gate_wall():
    cmd = parse_args(["gate", "--theta-plus", "1.0", "--v-plus", "0.5", "--log-level", "debug"])
    assert isinstance(cmd, GateCommand)
    assert cmd.theta_plus == 1.0 and cmd.v_plus == 0.5
    assert cmd.log_level == "DEBUG"


@pytest.mark.parametrize("argv", [
    ["spectrum", "--theta", "banana"],
    ["spectrum", "--levels", "65"],
    ["gate"],
    ["gate", "--mu", "1.0", "--schedule", "s.json"],
    ["gate", "--mu", "4.0"],
    ["compile", "--target", "H", "--format", "csv"],
    ["scatter", "--k", "1"],
    ["frobnicate"],
    ["spectrum", "--omega", "-1"],
    ["spectrum", "--omega", "inf"],
    ["gate", "--mu", "1", "--nu", "nan"],
    ["gate", "--theta-plus", "1", "--v-plus", "inf"],
    ["scatter", "--mu", "1", "--k", "nan"],
])
def test_parse_rejects_bad_usage(argv):
    with pytest.raises(UsageError):
        parse_args(argv)


def test_main_usage_exit_code(capsys):
    assert main(["spectrum", "--theta", "banana"]) == EXIT_USAGE
    assert capsys.readouterr().out == ""


def test_non_finite_phase_is_usage_error(capsys):
    assert main(["gate", "--mu", "1", "--nu", "nan"]) == EXIT_USAGE
    assert capsys.readouterr().out == ""


# ===================================
# VERBOS
# ===================================
def test_spectrum_neumann_levels(capsys):
    assert main(["spectrum", "--theta", "0", "--levels", "4"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "theta,n,energy,eta"
    frame = pd.read_csv(io.StringIO(out))
    assert np.allclose(frame["energy"], [0.5, 2.5, 4.5, 6.5], rtol=1e-10)
    assert np.allclose(frame["eta"], 0.0, atol=1e-9)


def test_spectrum_sweep_json(capsys):
    assert main(["spectrum", "--sweep", "3", "--levels", "2", "--format", "json"]) == EXIT_OK
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 6
    assert rows[-1]["eta"] == pytest.approx(1.0, abs=1e-9)


def test_gate_not(capsys):
    assert main(["gate", "--mu", str(np.pi)]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert np.allclose(matrix_from_pairs(report["matrix"]), [[0, 1], [1, 0]], atol=1e-12)
    assert report["leakage"] < 1e-9
    assert report["fidelity_vs_ideal"] == pytest.approx(1.0)


def test_gate_generic_wall_has_no_ideal(capsys):
    half = str(np.pi / 2)
    assert main(["gate", "--theta-plus", half, "--theta-minus", half]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["fidelity_vs_ideal"] is None
    assert report["leakage"] > 1e-3


def test_compile_round_trip_is_byte_identical(tmp_path):
    path = tmp_path / "h.json"
    assert main(["compile", "--target", "H", "--output", str(path)]) == EXIT_OK
    text = path.read_text(encoding="utf-8")
    schedule = PulseSchedule.from_json(text)
    assert len(schedule.pulses) == 1 and isinstance(schedule.pulses[0], SigmaPulse)
    assert schedule.pulses[0].mu == pytest.approx(np.pi / 2)
    assert schedule.to_json() == text


def test_compile_rejects_non_unitary(capsys):
    assert main(["compile", "--target", "[[1, 1], [0, 1]]"]) == EXIT_USAGE


def test_gate_missing_schedule_is_usage_error(tmp_path):
    assert main(["gate", "--schedule", str(tmp_path / "missing.json")]) == EXIT_USAGE


def test_verify_coarse_grid_is_numerical_failure(tmp_path):
    path = tmp_path / "not.json"
    path.write_text(PulseSchedule(omega=1.0, pulses=[SigmaPulse(mu=np.pi)]).to_json(), encoding="utf-8")
    assert main(["verify", "--schedule", str(path), "--grid-points", "256"]) == EXIT_FAILURE


def test_scatter_is_energy_independent(capsys):
    assert main(["scatter", "--mu", str(np.pi / 2)]) == EXIT_OK
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(frame.columns) == ["k", "T", "R"]
    assert np.allclose(frame["T"], 0.5, atol=1e-12)
    assert np.allclose(frame["T"] + frame["R"], 1.0, atol=1e-12)


@pytest.mark.slow
def test_scatter_oracle_default_wavenumbers(capsys):
    assert main(["scatter", "--mu", str(np.pi / 3), "--oracle"]) == EXIT_OK
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(frame["k"]) == [0.5, 1.0, 5.0, 20.0]
    assert np.allclose(frame["T_oracle"], frame["T"], atol=1e-2)


def test_outputs_are_deterministic(capsys):
    argv = ["spectrum", "--theta", "1.1", "--levels", "5"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


# ===================================
# README
# ===================================
def test_readme_has_examples():
    assert len(readme_commands()) >= 5


@pytest.mark.slow
def test_readme_examples_exit_zero(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    for argv in readme_commands():
        assert main(argv) == EXIT_OK, " ".join(argv)
    assert json.loads(Path("report.json").read_text(encoding="utf-8"))["max_deviation"] < 1e-2
