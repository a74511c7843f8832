from __future__ import annotations

from dataclasses import asdict, dataclass, field

PASS = "pass"
FAIL = "fail"
DEGENERATE = "degenerate"


@dataclass
class PropertyReport:
    """Verdict of a certificate check.

    ``worst_residual`` is the largest violation found, ``witness`` names the
    item that produced it and ``details`` lists every checked item.
    """

    verdict: str
    worst_residual: float
    witness: str = ""
    details: list = field(default_factory=list)
    tolerance: float | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        return asdict(self)


def merge_verdicts(verdicts) -> str:
    verdicts = list(verdicts)
    if FAIL in verdicts:
        return FAIL
    if DEGENERATE in verdicts:
        return DEGENERATE
    return PASS
