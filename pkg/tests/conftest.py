import io

import numpy as np
import pytest

import vomasim  # noqa: F401  registers the bundled models
from vomasim.vomas.console import ConsoleAgent


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240501)


@pytest.fixture
def console_stream() -> io.StringIO:
    return io.StringIO()


@pytest.fixture
def console(console_stream) -> ConsoleAgent:
    return ConsoleAgent(stream=console_stream)


@pytest.fixture
def quiet_console() -> ConsoleAgent:
    return ConsoleAgent(quiet=True)
