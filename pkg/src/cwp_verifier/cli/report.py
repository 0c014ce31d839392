"""Command reports: findings plus enough context to reproduce them."""

import hashlib
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from cwp_verifier import __version__
from cwp_verifier.statechart.machine import Finding, Severity

TOOL_NAME = "cwp-verifier"

EXIT_OK = 0
EXIT_TOOL_ERROR = 1
EXIT_FINDINGS = 2


class ReportFormat(Enum):
    TEXT = "text"
    LINES = "lines"


def digest_bytes(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


@dataclass
class Report:
    """Ordered findings of one command run.

    Two runs over the same inputs with the same clock render to the same
    bytes: nothing time- or host-dependent is recorded.
    """

    command: str
    inputs: list[tuple[str, str]] = field(default_factory=list)
    findings: list[Finding] = field(default_factory=list)
    version: str = __version__

    def add_input(self, label: str, data: bytes) -> None:
        self.inputs.append((label, digest_bytes(data)))

    def add(self, severity: Severity, code: str, subject: str, message: str) -> None:
        self.findings.append(Finding(severity, code, subject, message))

    def extend(self, findings: Iterable[Finding]) -> None:
        self.findings.extend(findings)

    def count(self, severity: Severity) -> int:
        return sum(1 for f in self.findings if f.severity is severity)

    @property
    def has_errors(self) -> bool:
        return self.count(Severity.ERROR) > 0

    @property
    def exit_code(self) -> int:
        return EXIT_FINDINGS if self.has_errors else EXIT_OK

    def summary(self) -> str:
        return (
            f"{self.count(Severity.ERROR)} error(s), "
            f"{self.count(Severity.WARNING)} warning(s), "
            f"{self.count(Severity.NOTE)} note(s)"
        )

    def to_text(self) -> str:
        lines = [f"{TOOL_NAME} {self.version} {self.command}"]
        lines += [f"input {label} {digest}" for label, digest in self.inputs]
        lines += [f"{f.severity.value} {f.code} {f.subject}: {f.message}" for f in self.findings]
        lines.append(f"summary: {self.summary()}")
        return "\n".join(lines) + "\n"

    def to_lines(self) -> str:
        """One tab-separated finding per line: severity, code, subject, message."""
        return "".join(
            "\t".join(_clean(v) for v in (f.severity.value, f.code, f.subject, f.message)) + "\n"
            for f in self.findings
        )

    def render(self, fmt: ReportFormat = ReportFormat.TEXT) -> str:
        return self.to_lines() if fmt is ReportFormat.LINES else self.to_text()


def _clean(value: str) -> str:
    return value.replace("\t", " ").replace("\n", " ")
