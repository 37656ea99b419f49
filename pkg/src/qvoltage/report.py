from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass
class Report:
    """Named max-norm residuals checked against one tolerance.

    ``flags`` hold checks that are pass/fail by nature (positivity, shape
    agreement) rather than a residual compared with ``tol``.
    """

    name: str
    tol: float
    residuals: dict[str, float] = field(default_factory=dict)
    flags: dict[str, bool] = field(default_factory=dict)
    info: dict[str, Any] = field(default_factory=dict)

    def add(self, key: str, value: float) -> None:
        self.residuals[key] = float(value)

    def flag(self, key: str, ok: bool) -> None:
        self.flags[key] = bool(ok)

    def merge(self, other: "Report", prefix: str | None = None) -> None:
        pre = f"{prefix or other.name}."
        for k, v in other.residuals.items():
            self.residuals[pre + k] = v
        for k, v in other.flags.items():
            self.flags[pre + k] = v

    @property
    def failures(self) -> list[str]:
        bad = [k for k, v in self.residuals.items() if not v < self.tol]
        bad += [k for k, v in self.flags.items() if not v]
        return bad

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def worst(self) -> tuple[str, float] | None:
        if not self.residuals:
            return None
        key = max(self.residuals, key=lambda k: self.residuals[k])
        return key, self.residuals[key]

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "tol": self.tol,
            "passed": self.passed,
            "residuals": dict(sorted(self.residuals.items())),
            "flags": dict(sorted(self.flags.items())),
            "failures": self.failures,
            **({"info": self.info} if self.info else {}),
        }

    def __str__(self) -> str:
        lines = [f"{self.name}: {'PASS' if self.passed else 'FAIL'} (tol={self.tol:g})"]
        for k, v in sorted(self.residuals.items()):
            mark = "ok" if v < self.tol else "FAIL"
            lines.append(f"  {k:<40s} {v:.3e}  {mark}")
        for k, v in sorted(self.flags.items()):
            lines.append(f"  {k:<40s} {'ok' if v else 'FAIL'}")
        return "\n".join(lines)


def maxabs(x) -> float:
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0
