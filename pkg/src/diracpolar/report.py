"""Small container for named residual checks."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class IdentityReport:
    """Named max-abs residuals from a batch of identity checks."""

    entries: dict[str, float] = field(default_factory=dict)

    def add(self, name: str, residual: float) -> None:
        self.entries[name] = float(residual)

    def max_residual(self) -> float:
        return max(self.entries.values()) if self.entries else 0.0

    def worst(self) -> tuple[str, float]:
        name = max(self.entries, key=self.entries.get)
        return name, self.entries[name]

    def passed(self, tol: float) -> bool:
        return self.max_residual() < tol

    def merged(self, other: "IdentityReport", prefix: str = "") -> "IdentityReport":
        out = IdentityReport(dict(self.entries))
        for k, v in other.entries.items():
            out.entries[prefix + k] = v
        return out

    def rows(self) -> list[tuple[str, float]]:
        return list(self.entries.items())
