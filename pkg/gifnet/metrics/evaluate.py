"""Batch evaluation of fused images against their sources."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from gifnet.errors import EvaluationError
from gifnet.imaging import list_images, load_image
from gifnet.metrics.quality import metric_ag, metric_ei, metric_scd, metric_vif

# Configure logging
logger = logging.getLogger(__name__)

METRIC_NAMES = ("ei", "ag", "vif", "scd")
MEAN_ID = "MEAN"


@dataclass(frozen=True)
class MetricRow:
    """Metrics of one fused image (or their means)."""

    id: str
    ei: float
    ag: float
    vif: float
    scd: float

    def values(self) -> tuple[float, float, float, float]:
        return self.ei, self.ag, self.vif, self.scd

    def to_line(self) -> str:
        return "\t".join([self.id, *(f"{v:.6f}" for v in self.values())])


def evaluate_triple(
    fused: np.ndarray,
    src_a: np.ndarray,
    src_b: np.ndarray,
    id: str = "",
) -> MetricRow:
    """All four metrics of one (fused, a, b) triple."""
    return MetricRow(
        id=id,
        ei=metric_ei(fused),
        ag=metric_ag(fused),
        vif=metric_vif(fused, src_a, src_b),
        scd=metric_scd(fused, src_a, src_b),
    )


@dataclass
class MetricReport:
    """Per-image metric rows plus their arithmetic means."""

    rows: list[MetricRow] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.rows)

    @property
    def aggregate(self) -> MetricRow:
        """Row of means over all per-image rows.

        Raises:
            EvaluationError: If the report is empty
        """
        if not self.rows:
            raise EvaluationError("Cannot aggregate an empty metric report")
        means = np.mean([row.values() for row in self.rows], axis=0)
        return MetricRow(MEAN_ID, *(float(m) for m in means))

    def to_tsv(self) -> str:
        """Header, one line per image sorted by id, then the MEAN line."""
        lines = ["\t".join(("id", *METRIC_NAMES))]
        lines += [row.to_line() for row in sorted(self.rows, key=lambda r: r.id)]
        lines.append(self.aggregate.to_line())
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> Path:
        """Write the report as UTF-8 TSV."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_tsv(), encoding="utf-8")
        return path

    @classmethod
    def read(cls, path: str | Path) -> "MetricReport":
        """Parse a TSV written by :meth:`write`; the MEAN line is recomputed, not read.

        Raises:
            EvaluationError: If the file is malformed
        """
        text = Path(path).read_text(encoding="utf-8").splitlines()
        if not text or text[0].split("\t") != ["id", *METRIC_NAMES]:
            raise EvaluationError(f"'{path}' is not a metric report")
        rows = []
        for line in text[1:]:
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 1 + len(METRIC_NAMES):
                raise EvaluationError(f"Malformed report line in '{path}': {line!r}")
            if fields[0] == MEAN_ID:
                continue
            try:
                rows.append(MetricRow(fields[0], *(float(v) for v in fields[1:])))
            except ValueError as exc:
                raise EvaluationError(f"Malformed report line in '{path}': {line!r}") from exc
        return cls(rows)


def evaluate_dir(
    fused_dir: str | Path,
    src_a_dir: str | Path,
    src_b_dir: str | Path,
    workers: int = 1,
) -> MetricReport:
    """Evaluate every fused image against the same-stem sources.

    Args:
        fused_dir: Directory of fused images
        src_a_dir: Directory of first sources
        src_b_dir: Directory of second sources
        workers: Number of evaluation threads

    Returns:
        MetricReport with one row per stem

    Raises:
        EvaluationError: If there are no images or the stems do not match
    """
    fused = list_images(fused_dir)
    src_a = list_images(src_a_dir)
    src_b = list_images(src_b_dir)
    if not fused:
        raise EvaluationError(f"No images found in {fused_dir}")

    stems = set(fused)
    unmatched = (stems ^ set(src_a)) | (stems ^ set(src_b))
    if unmatched:
        raise EvaluationError(
            f"Unmatched image stems across directories: {', '.join(sorted(unmatched)[:5])}",
        )

    def evaluate_one(stem: str) -> MetricRow:
        return evaluate_triple(
            load_image(fused[stem]),
            load_image(src_a[stem]),
            load_image(src_b[stem]),
            id=stem,
        )

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        rows = list(pool.map(evaluate_one, sorted(stems)))

    logger.info(f"Evaluated {len(rows)} fused images from {fused_dir}")
    return MetricReport(rows)
