"""Pytest configuration and shared fixtures for the mediator-witness tests."""

import sys
from pathlib import Path

import pytest

# Add src directory to path for imports
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))


@pytest.fixture(scope="session")
def example_trace():
    """Bell_AM then SWAP_MB from rho_H."""
    from heisenberg_sim.protocol import run_example_protocol

    return run_example_protocol()


@pytest.fixture(scope="session")
def stabilizer_model():
    """The bundled stabilizer-qubit model (Clifford closure computed once)."""
    from model_files.loader import bundled_model

    return bundled_model("stabilizer_qubit").model


@pytest.fixture
def classical_bit_model():
    from model_files.loader import bundled_model

    return bundled_model("classical_bit").model


@pytest.fixture
def classical_trit_model():
    from model_files.loader import bundled_model

    return bundled_model("classical_trit").model


@pytest.fixture
def settings():
    """Default settings, isolated from any MEDIATOR_* environment."""
    from config import Settings

    return Settings(_env_file=None)


@pytest.fixture
def model_file(tmp_path):
    """Write a model document to a temporary file and return its path."""
    import json

    def write(document, name="model.json"):
        path = tmp_path / name
        text = document if isinstance(document, str) else json.dumps(document)
        path.write_text(text)
        return path

    return write
