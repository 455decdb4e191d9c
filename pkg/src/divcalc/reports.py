"""Verification report containers shared by the calculus and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckReport:
    """Outcome of one verification: verdict plus labeled steps."""

    name: str
    verdict: str  # PASS | FAIL | INFO | OUT-OF-SCOPE
    details: list[tuple[str, str]] = field(default_factory=list)

    def add(self, label: str, value) -> None:
        self.details.append((label, str(value)))

    @property
    def passed(self) -> bool:
        return self.verdict in ("PASS", "INFO")

    def __str__(self):
        lines = [f"{self.name}: {self.verdict}"]
        for label, value in self.details:
            lines.append(f"  {label}: {value}")
        return "\n".join(lines)
