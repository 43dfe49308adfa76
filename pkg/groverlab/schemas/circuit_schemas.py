"""
Pydantic records describing circuits and their checks
"""

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class LoweringLevel(str, Enum):
    """How far multi-controlled X gates are decomposed"""
    OPERATOR = "operator"
    TOFFOLI = "toffoli"
    UNIVERSAL = "universal"

    def work_qubits(self, num_controls: int) -> int:
        """Work qubits a lowered X with num_controls controls occupies"""
        if self is LoweringLevel.OPERATOR:
            return 0
        return max(num_controls - 2, 0)


class GateCensus(BaseModel):
    """Gate counts per mnemonic"""
    counts: Dict[str, int] = Field(default_factory=dict)
    elementary: int = 0
    non_elementary: int = 0

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def count(self, mnemonic: str) -> int:
        return self.counts.get(mnemonic, 0)

    def summary(self) -> str:
        """Single line summary used by the compile footer"""
        parts = [f"{name}={value}" for name, value in self.counts.items()]
        parts.append(f"elementary={self.elementary}")
        parts.append(f"non_elementary={self.non_elementary}")
        return " ".join(parts)


class CheckResult(BaseModel):
    """Outcome of one equivalence check"""
    name: str
    passed: bool
    detail: Optional[str] = None


class VerificationReport(BaseModel):
    """Outcome of the verification suite"""
    n: int
    target: int
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed_checks(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]
