import numpy as np
import pytest
import structlog

from groverlab.config import settings


@pytest.fixture(autouse=True)
def _restore_structlog_config():
    """main() binds structlog to the current sys.stderr, which pytest closes after capturing tests"""
    saved = structlog.get_config()
    yield
    structlog.configure(**saved)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def random_state(rng):
    """Factory for normalised random states"""
    def _make(num_qubits: int) -> np.ndarray:
        dim = 1 << num_qubits
        amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        return amps / np.linalg.norm(amps)
    return _make


@pytest.fixture
def debug_settings(monkeypatch):
    monkeypatch.setattr(settings, "debug", True)
    return settings


@pytest.fixture
def random_unitary(rng):
    """Factory for random unitaries via QR of a complex Gaussian matrix"""
    def _make(dim: int) -> np.ndarray:
        q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
        return q * (np.diag(r) / np.abs(np.diag(r)))
    return _make
