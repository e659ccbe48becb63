"""
Report and matrix writers.
Canonical JSON (sorted keys, 2-space indent, trailing newline) keeps two runs
with the same seed byte-identical.
"""

import csv
import io
import json
from pathlib import Path
from typing import Any, Union

from src.domain.errors import DomainError
from src.domain.verification import ReportDocument
from src.families.modular_action import TransformMatrix

MATRIX_FORMATS = ("json", "csv")


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def report_json(report: ReportDocument) -> str:
    return canonical_json(report.to_dict())


def write_report(report: ReportDocument, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report_json(report), encoding="utf-8")
    return path


def load_report(path: Union[str, Path]) -> ReportDocument:
    return ReportDocument.model_validate(json.loads(Path(path).read_text(encoding="utf-8")))


def format_complex(value: complex) -> str:
    """re+imi with round-trip float text."""
    value = complex(value)
    sign = "-" if value.imag < 0 else "+"
    return f"{value.real!r}{sign}{abs(value.imag)!r}i"


def matrix_json(matrix: TransformMatrix) -> str:
    return canonical_json(matrix.to_dict())


def matrix_csv(matrix: TransformMatrix) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([b.label() for b in matrix.basis])
    for row in matrix.entries:
        writer.writerow([format_complex(e) for e in row])
    return buffer.getvalue()


def render_matrix(matrix: TransformMatrix, fmt: str = "json") -> str:
    fmt = fmt.lower()
    if fmt == "json":
        return matrix_json(matrix)
    if fmt == "csv":
        return matrix_csv(matrix)
    raise DomainError(f"matrix format must be one of {MATRIX_FORMATS}, got {fmt!r}")


def write_matrix(matrix: TransformMatrix, path: Union[str, Path], fmt: str = "json") -> Path:
    text = render_matrix(matrix, fmt)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path
