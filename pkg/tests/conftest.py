from __future__ import annotations

import numpy as np
import pytest
from click.testing import CliRunner


@pytest.fixture
def np_random() -> np.random.Generator:
    return np.random.default_rng(20240614)


@pytest.fixture
def runner() -> CliRunner:
    # reports go to stdout, rich diagnostics to stderr
    return CliRunner(mix_stderr=False)
