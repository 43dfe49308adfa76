import pytest

from groverlab.core.circuit import Circuit
from groverlab.exceptions.custom_exceptions import ParameterOutOfRangeException, SizeLimitException
from groverlab.services import compiler_service
from groverlab.services.verification_service import CHECKS, check_oracle_identity, verify_all

CHECK_NAMES = [
    "toffoli_exact",
    "mcx_ladder",
    "oracle_identity",
    "diffusion_identity",
    "reflection_involutions",
    "work_restoration",
    "level_equivalence",
]


def _drop_last_gate():
    gates = compiler_service.toffoli_gates(0, 1, 2)
    return Circuit(num_qubits=3, ops=tuple(gates[:-1]))


@pytest.mark.parametrize("n, target", [(1, 0), (2, 3), (3, 5), (4, 9)])
def test_all_checks_pass(n, target):
    report = verify_all(n, target)
    assert [check.name for check in report.checks] == CHECK_NAMES
    assert report.passed, report.failed_checks


def test_largest_supported_size():
    assert verify_all(5, 17).passed


def test_corrupted_toffoli_is_reported(monkeypatch):
    monkeypatch.setattr(compiler_service, "lower_toffoli", _drop_last_gate)
    report = verify_all(3, 5)
    assert not report.passed
    assert report.failed_checks == ["toffoli_exact"]


def test_check_registry_matches_names():
    assert [name for name, _ in CHECKS] == CHECK_NAMES


def test_oracle_check_detail():
    passed, detail = check_oracle_identity(3, 2)
    assert passed
    assert detail.startswith("max deviation")


def test_size_guard():
    with pytest.raises(SizeLimitException, match="matrix verification limited to n ≤ 5"):
        verify_all(6, 0)


def test_target_out_of_range():
    with pytest.raises(ParameterOutOfRangeException):
        verify_all(3, 8)
