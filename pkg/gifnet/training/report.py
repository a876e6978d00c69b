"""Per-step training reports and the line-delimited report log."""

from dataclasses import dataclass
from pathlib import Path

from gifnet.errors import DatasetError
from gifnet.losses import LossValue
from gifnet.training.config import Role


@dataclass
class StepReport:
    """Outcome of one optimization step."""

    step: int
    role: Role
    loss: LossValue
    lambda_values: list[float]

    @property
    def total(self) -> float:
        return self.loss.parts["total"]

    def to_line(self) -> str:
        """``step<TAB>role<TAB>total<TAB>pub<TAB>pri<TAB>lambda0,lambda1,...``.

        Floats are written in shortest round-trip form so that the logged
        ``pub + pri`` reproduces ``total`` exactly.
        """
        parts = self.loss.parts
        lambdas = ",".join(repr(v) for v in self.lambda_values)
        return "\t".join(
            [
                str(self.step),
                self.role.value,
                repr(parts["total"]),
                repr(parts["pub"]),
                repr(parts["pri"]),
                lambdas,
            ],
        )


@dataclass(frozen=True)
class LogRecord:
    """One parsed report-log line."""

    step: int
    role: Role
    total: float
    pub: float
    pri: float
    lambda_values: tuple[float, ...]


def parse_log_line(line: str) -> LogRecord:
    """Parse a line written by :meth:`StepReport.to_line`.

    Raises:
        DatasetError: If the line is malformed
    """
    fields = line.rstrip("\n").split("\t")
    if len(fields) != 6:
        raise DatasetError(f"Malformed report line ({len(fields)} fields): {line!r}")
    try:
        return LogRecord(
            step=int(fields[0]),
            role=Role(fields[1]),
            total=float(fields[2]),
            pub=float(fields[3]),
            pri=float(fields[4]),
            lambda_values=tuple(float(v) for v in fields[5].split(",") if v),
        )
    except ValueError as exc:
        raise DatasetError(f"Malformed report line: {line!r}") from exc


def read_log(path: str | Path) -> list[LogRecord]:
    """Parse every line of a report log."""
    with open(path, encoding="utf-8") as f:
        return [parse_log_line(line) for line in f if line.strip()]
