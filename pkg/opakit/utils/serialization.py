import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence, Union

import numpy as np
from numpy.typing import NDArray

from ..core.mpoly import MPoly
from ..core.scalar import ExactScalar, QuadExt, to_exact
from ..core.text import format_scalar, parse_scalar

SCHEMA = "opakit/1"


def to_jsonable(value: Any) -> Any:
    """
    Convert results to plain JSON values.

    Exact scalars become their text form, complex doubles become [re, im],
    non-finite floats become strings and objects with to_dict are expanded.
    """
    if value is None or isinstance(value, (bool, str, int)):
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, (ExactScalar, QuadExt, Fraction)):
        return format_scalar(to_exact(value))
    if isinstance(value, complex):
        return [to_jsonable(value.real), to_jsonable(value.imag)]
    if isinstance(value, MPoly):
        return str(value)
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise TypeError(f"Cannot serialize {type(value).__name__}")


class ReportSaver:
    """
    Handles saving and loading of run reports.

    Supports:
    - JSON reports tagged with the schema version, config and result
    - CSV tables (face profiles, data arrays)
    """

    @staticmethod
    def to_json(config: Dict[str, Any], result: Any) -> str:
        """
        Deterministic JSON text for one run.

        Args:
            config: The run configuration
            result: Result object, dict or list
        """
        document = {"schema": SCHEMA, "config": to_jsonable(config), "result": to_jsonable(result)}
        return json.dumps(document, sort_keys=True, indent=2, allow_nan=False) + "\n"

    @staticmethod
    def save_json(config: Dict[str, Any], result: Any, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(ReportSaver.to_json(config, result), encoding="utf-8")
        return path

    @staticmethod
    def load_json(path: Union[str, Path]) -> Dict[str, Any]:
        """
        Load a saved report.

        Raises:
            ValueError: If the schema tag is missing or unknown
        """
        path = Path(path)
        with path.open("r", encoding="utf-8") as f:
            document = json.load(f)
        if document.get("schema") != SCHEMA:
            raise ValueError(f"Unknown report schema: {document.get('schema')!r}")
        return document

    @staticmethod
    def csv_text(rows: Iterable[Sequence[Any]], header: Optional[Sequence[str]] = None) -> str:
        lines = []
        if header:
            lines.append(",".join(header))
        for row in rows:
            lines.append(",".join(_csv_cell(v) for v in row))
        return "\n".join(lines) + "\n"

    @staticmethod
    def save_csv(
        rows: Iterable[Sequence[Any]], path: Union[str, Path], header: Optional[Sequence[str]] = None
    ) -> Path:
        """
        Save a table as CSV.

        Args:
            rows: Table rows
            path: Path where to save the table
            header: Optional column names
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(ReportSaver.csv_text(rows, header), encoding="utf-8")
        return path

    @staticmethod
    def load_csv_array(path: Union[str, Path], exact: Optional[bool] = None) -> NDArray[Any]:
        """
        Read a rectangular CSV of numbers into an array.

        Entries such as 1/2 or s2 load as exact scalars; any decimal entry makes
        the whole array a float array. Lines starting with # are skipped.

        Raises:
            ValueError: If the table is ragged or an entry does not parse
        """
        path = Path(path)
        cells = np.loadtxt(path, dtype=str, delimiter=",", comments="#", ndmin=2)
        values = np.empty(cells.shape, dtype=object)
        for idx, text in np.ndenumerate(cells):
            values[idx] = parse_scalar(text.strip())
        all_exact = all(isinstance(v, ExactScalar) for v in values.flat)
        if exact or (exact is None and all_exact):
            if not all_exact:
                raise ValueError(f"{path} contains decimal entries; cannot load it exactly")
            return values
        return np.array([[complex(_as_complex(v)) for v in row] for row in values], dtype=np.complex128)


def _as_complex(value: Any) -> complex:
    if isinstance(value, ExactScalar):
        return value.to_complex()
    return complex(value)


def _csv_cell(value: Any) -> str:
    # cells must not contain commas, so complex values use the "a+b*i" form
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, complex):
        if value.imag == 0:
            return repr(value.real)
        sign = "-" if value.imag < 0 else "+"
        return f"{value.real!r}{sign}{abs(value.imag)!r}*i"
    if isinstance(value, np.generic):
        return _csv_cell(value.item())
    if isinstance(value, (ExactScalar, QuadExt, Fraction)):
        exact = to_exact(value)
        if exact.is_real():
            return format_scalar(exact)
        return f"({exact.re})+({exact.im})*i"
    return str(value)


__all__ = ["SCHEMA", "ReportSaver", "to_jsonable"]
