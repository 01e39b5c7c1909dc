"""
Shared fixtures and the session-wide check of the manufactured forcings.
"""

import pytest

from modules.logger import logger
from modules.manufactured import forcing_oracle
from modules.manufactured import manufactured_case


FORCING_SAMPLES = 200
FORCING_TOLERANCE = 1.0e-6


@pytest.fixture(scope="session", autouse=True)
def forcing_transcription_gate() -> None:  # type: ignore
    """
    Stop the session if a closed-form forcing disagrees with finite differences.
    """
    for name in ("sol1", "sol2", "sol3"):
        result, case = manufactured_case.manufactured_case(name, 1.0)
        assert result
        assert case is not None

        residual = forcing_oracle.verify_forcing(case, FORCING_SAMPLES)
        if residual > FORCING_TOLERANCE:
            pytest.exit(f"Forcing of {name} is wrong: residual {residual:.3e}", returncode=1)


@pytest.fixture(scope="session")
def test_logger() -> logger.Logger:  # type: ignore
    """
    Logger that does not write files.
    """
    result, instance = logger.Logger.create("test", False)
    assert result
    assert instance is not None

    yield instance  # type: ignore
