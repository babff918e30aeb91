"""Verification report record shared by every verifier."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

DEFAULT_TOL = 1e-9


@dataclass
class VerificationReport:
    """Outcome of checking one inequality instance.

    ``deficit`` is oriented so that the inequality holds iff ``deficit >= 0``;
    ``passed`` records ``deficit >= -tolerance``. ``log_constant`` is ``ln C`` for
    the constant of the Brascamp-Lieb inequality being checked.
    """

    setting: str
    lhs: float
    rhs: float
    deficit: float
    tolerance: float = DEFAULT_TOL
    log_constant: float = 0.0
    status: str = "ok"
    params: dict[str, Any] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    trial: int | None = None
    timing: float | None = None

    @property
    def passed(self) -> bool:
        if self.status == "condition-violated":
            return False
        return bool(self.deficit >= -self.tolerance)

    def with_tolerance(self, tol: float) -> "VerificationReport":
        out = VerificationReport(**{**self.__dict__})
        out.tolerance = tol
        return out

    def to_dict(self, timing=True) -> dict[str, Any]:
        d = {
            "setting": self.setting,
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "deficit": _num(self.deficit),
            "pass": self.passed,
            "tolerance": self.tolerance,
            "log_constant": self.log_constant,
            "status": self.status,
            "params": self.params,
            "extra": {k: _num(v) if isinstance(v, float) else v for k, v in self.extra.items()},
            "seed": self.seed,
            "trial": self.trial,
        }
        if timing:
            d["timing"] = self.timing
        return d


def _num(x):
    # JSON has no infinities
    x = float(x)
    if math.isfinite(x):
        return x
    return "inf" if x > 0 else ("-inf" if x < 0 else "nan")


def log_ratio_report(setting, log_lhs, log_rhs, tol=DEFAULT_TOL, **kw) -> VerificationReport:
    """Report for ``lhs <= rhs`` given both sides in log form; deficit is ``ln rhs - ln lhs``."""
    extra = kw.pop("extra", {})
    extra = {"log_lhs": float(log_lhs), "log_rhs": float(log_rhs), **extra}
    return VerificationReport(
        setting,
        lhs=_safe_exp(log_lhs),
        rhs=_safe_exp(log_rhs),
        deficit=float(log_rhs - log_lhs),
        tolerance=tol,
        extra=extra,
        **kw,
    )


def _safe_exp(x):
    return math.exp(x) if x < 700 else math.inf
