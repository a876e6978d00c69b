"""Dataset manifest reading and writing.

The manifest is a UTF-8 line-oriented text file::

    seed=<int>
    sigma=<float>
    mask=<kind>
    <id>\t<vis>\t<ir>\t<near>\t<far>

Paths are relative to the directory holding the manifest.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path

from gifnet.data.synth import MaskKind
from gifnet.errors import DatasetError

# Configure logging
logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.txt"
_HEADER_KEYS = ("seed", "sigma", "mask")


@dataclass(frozen=True)
class ManifestEntry:
    """Relative paths of one joint sample."""

    id: str
    vis: str
    ir: str
    near: str
    far: str

    def to_line(self) -> str:
        """Format the entry as a manifest line."""
        return "\t".join((self.id, self.vis, self.ir, self.near, self.far))


@dataclass
class DatasetManifest:
    """Index of an RGB-focused joint dataset."""

    root: Path
    entries: list[ManifestEntry] = field(default_factory=list)
    seed: int = 0
    blur_sigma: float = 3.0
    mask_kind: MaskKind = MaskKind.CENTERED_DISK

    def __len__(self) -> int:
        """Number of samples."""
        return len(self.entries)

    def resolve(self, relative: str) -> Path:
        """Absolute path of a file referenced by the manifest."""
        return self.root / relative

    def validate(self) -> None:
        """Check that ids are unique and every referenced file exists.

        Raises:
            DatasetError: On duplicate ids or missing files
        """
        seen: set[str] = set()
        for entry in self.entries:
            if entry.id in seen:
                raise DatasetError(f"Duplicate sample id '{entry.id}' in manifest")
            seen.add(entry.id)
            for rel in (entry.vis, entry.ir, entry.near, entry.far):
                if not self.resolve(rel).is_file():
                    raise DatasetError(
                        f"Manifest entry '{entry.id}' references missing file {rel}",
                    )

    def write(self, path: str | Path | None = None) -> Path:
        """Write the manifest; defaults to ``<root>/manifest.txt``.

        Returns:
            The path written
        """
        path = Path(path) if path is not None else self.root / MANIFEST_NAME
        lines = [
            f"seed={self.seed}",
            f"sigma={self.blur_sigma!r}",
            f"mask={self.mask_kind.value}",
        ]
        lines.extend(entry.to_line() for entry in self.entries)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        logger.debug(f"Wrote manifest with {len(self.entries)} entries to {path}")
        return path

    @classmethod
    def read(cls, path: str | Path, validate: bool = True) -> "DatasetManifest":
        """Parse a manifest file.

        Args:
            path: Manifest file
            validate: Whether to check ids and file existence

        Returns:
            The parsed manifest, rooted at the manifest's directory

        Raises:
            DatasetError: If the file is missing or malformed
        """
        path = Path(path)
        if not path.is_file():
            raise DatasetError(f"No such manifest file: {path}")

        header: dict[str, str] = {}
        entries: list[ManifestEntry] = []
        for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
            line = raw.rstrip("\r")
            if not line.strip():
                continue
            if "\t" not in line and "=" in line and not entries:
                key, _, value = line.partition("=")
                if key not in _HEADER_KEYS:
                    raise DatasetError(f"{path}:{lineno}: unknown header '{key}'")
                header[key] = value
                continue
            fields = line.split("\t")
            if len(fields) != 5:
                raise DatasetError(
                    f"{path}:{lineno}: expected 5 tab-separated fields, got {len(fields)}",
                )
            entries.append(ManifestEntry(*fields))

        missing = [k for k in _HEADER_KEYS if k not in header]
        if missing:
            raise DatasetError(f"{path}: missing header lines {', '.join(missing)}")

        try:
            manifest = cls(
                root=path.parent,
                entries=entries,
                seed=int(header["seed"]),
                blur_sigma=float(header["sigma"]),
                mask_kind=MaskKind(header["mask"]),
            )
        except ValueError as e:
            raise DatasetError(f"{path}: invalid header value: {e}") from e

        if validate:
            manifest.validate()
        return manifest
