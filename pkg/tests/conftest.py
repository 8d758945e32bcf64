import os
from pathlib import Path

import pytest

import synth_data

UNSW_ENV = "UNSW_NB15_TRAIN_CSV"


def unsw_csv_path() -> Path | None:
    """Path to the user-supplied UNSW-NB15 training CSV, when configured."""
    candidate = os.environ.get(UNSW_ENV)
    if candidate and Path(candidate).is_file():
        return Path(candidate)
    return None


@pytest.fixture(scope="session")
def synth_csv(tmp_path_factory) -> Path:
    """2,000-row synthetic flow CSV shared by module tests."""
    path = tmp_path_factory.mktemp("data") / "flows_2000.csv"
    synth_data.write_csv(path, 2000, seed=7)
    return path


@pytest.fixture(scope="session")
def small_csv(tmp_path_factory) -> Path:
    """400-row synthetic flow CSV for CLI round trips."""
    path = tmp_path_factory.mktemp("data") / "flows_400.csv"
    synth_data.write_csv(path, 400, seed=11)
    return path
