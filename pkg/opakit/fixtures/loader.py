import hashlib
import logging
from pathlib import Path
from typing import Dict, List, Optional, Union

from ..core.errors import FixtureIntegrityError

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent / "data"
CHECKSUM_FILE = "checksums.sha256"

Section = Dict[str, str]


def read_checksums(data_dir: Union[str, Path] = DATA_DIR) -> Dict[str, str]:
    """Map file name -> expected sha256 from the checksum manifest."""
    path = Path(data_dir) / CHECKSUM_FILE
    if not path.exists():
        raise FixtureIntegrityError(f"Checksum manifest {path} is missing")
    expected: Dict[str, str] = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        digest, _, name = line.partition("  ")
        expected[name.strip()] = digest.strip()
    return expected


def verify_checksums(data_dir: Union[str, Path] = DATA_DIR) -> List[str]:
    """
    Check every fixture file against the manifest.

    Returns:
        The verified file names

    Raises:
        FixtureIntegrityError: On a missing file, an unlisted file or a digest mismatch
    """
    data_dir = Path(data_dir)
    expected = read_checksums(data_dir)
    present = sorted(p.name for p in data_dir.glob("*.txt"))
    unlisted = [name for name in present if name not in expected]
    if unlisted:
        raise FixtureIntegrityError(f"Fixture files without checksums: {', '.join(unlisted)}")
    for name, digest in sorted(expected.items()):
        path = data_dir / name
        if not path.exists():
            raise FixtureIntegrityError(f"Fixture file {name} is missing")
        actual = hashlib.sha256(path.read_bytes()).hexdigest()
        if actual != digest:
            raise FixtureIntegrityError(f"Checksum mismatch for {name}: expected {digest}, got {actual}")
    logger.debug("Verified %d fixture files", len(expected))
    return sorted(expected)


def parse_sections(text: str, source: str = "<text>") -> Dict[str, Section]:
    """
    Parse "[section]" headers followed by "key = value" lines.

    Blank lines and lines starting with # are skipped.

    Raises:
        ValueError: For a key outside a section or a line without "="
    """
    sections: Dict[str, Section] = {}
    current: Optional[Section] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = sections.setdefault(line[1:-1].strip(), {})
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{source}:{number}: expected 'key = value'")
        if current is None:
            raise ValueError(f"{source}:{number}: key outside a section")
        current[key.strip()] = value.strip()
    return sections


class FixtureStore:
    """Verified fixture files, parsed on first use."""

    def __init__(self, data_dir: Union[str, Path] = DATA_DIR, verify: bool = True) -> None:
        self.data_dir = Path(data_dir)
        self.files = verify_checksums(self.data_dir) if verify else sorted(
            p.name for p in self.data_dir.glob("*.txt")
        )
        self._cache: Dict[str, Dict[str, Section]] = {}

    def load(self, name: str) -> Dict[str, Section]:
        """Sections of data/<name>.txt."""
        if name not in self._cache:
            filename = f"{name}.txt"
            if filename not in self.files:
                raise KeyError(f"Unknown fixture file {filename}")
            path = self.data_dir / filename
            self._cache[name] = parse_sections(path.read_text(encoding="utf-8"), filename)
        return self._cache[name]

    def section(self, name: str, section: str) -> Section:
        return self.load(name)[section]


__all__ = ["DATA_DIR", "FixtureStore", "parse_sections", "read_checksums", "verify_checksums"]
