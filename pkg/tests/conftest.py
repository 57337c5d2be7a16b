import numpy as np
import pytest

from src import reporting, utils


@pytest.fixture(autouse=True)
def isolated_artifacts(tmp_path, monkeypatch):
    """Keep the log and every output file inside the test's tmp_path."""
    monkeypatch.setattr(reporting, "LOG_FILE_NAME", str(tmp_path / "dissiwire.log"))
    monkeypatch.setenv(utils.OUTPUT_DIR_ENV, str(tmp_path / "out"))
    monkeypatch.delenv(utils.TOL_ENV, raising=False)
    monkeypatch.delenv(utils.ZERO_TOL_ENV, raising=False)
    utils.configure_output_dir()
    utils.configure_tolerances()
    yield
    monkeypatch.delenv(utils.TOL_ENV, raising=False)
    monkeypatch.delenv(utils.ZERO_TOL_ENV, raising=False)
    utils.configure_tolerances()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def out_dir(tmp_path):
    return tmp_path / "out"
