import sys

import numpy as np
import pytest

from gafs.dataset import Dataset
from gafs.synth import planted_dataset, toxicity_shaped_dataset, write_csv


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # Surface the acceptance verdict lines even though pytest captures the
    # per-test stdout where they were originally printed.
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "VERDICTS", ()) if mod else ()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def planted():
    return planted_dataset(seed=0)


@pytest.fixture(scope="session")
def tox():
    return toxicity_shaped_dataset(seed=0)


@pytest.fixture(scope="session")
def tox_csv(tmp_path_factory, tox):
    path = tmp_path_factory.mktemp("data") / "toxicity.csv"
    write_csv(tox, path)
    return str(path)


@pytest.fixture
def tiny_dataset():
    # feature 0 fully determines the label; features 1-2 are noise
    rng = np.random.default_rng(3)
    x0 = np.concatenate([rng.uniform(0, 1, 12), rng.uniform(2, 3, 8)])
    X = np.column_stack([x0, rng.normal(size=20), rng.normal(size=20)])
    y = (x0 > 1.5).astype(np.int64)
    return Dataset(features=X, labels=y,
                   feature_names=("informative", "noise_a", "noise_b"),
                   class_names=("low", "high"))
