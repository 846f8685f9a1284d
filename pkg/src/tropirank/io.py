"""Problem-file parsing and result rendering for the command line."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .tropcore import NEG_INF, TropMatrix, TropScalar, TropVector, parse_entry


class ProblemFileError(Exception):
    """The problem file is unreadable or does not follow the schema."""


@dataclass(frozen=True)
class ProblemFile:
    A: TropMatrix
    B: TropMatrix
    C: TropMatrix | None
    labels: tuple[str, ...] | None


def _matrix(raw, name: str) -> TropMatrix:
    if not isinstance(raw, list) or not raw or not all(isinstance(r, list) for r in raw):
        raise ProblemFileError(f"{name} must be a non-empty array of arrays")
    n = len(raw)
    if any(len(r) != n for r in raw):
        raise ProblemFileError(f"{name} must be square")
    try:
        return TropMatrix([[parse_entry(v) for v in row] for row in raw])
    except ValueError as exc:
        raise ProblemFileError(f"{name}: {exc}") from exc


def parse_problem(doc) -> ProblemFile:
    if not isinstance(doc, dict):
        raise ProblemFileError("problem document must be a JSON object")
    unknown = set(doc) - {"A", "B", "C", "labels"}
    if unknown:
        raise ProblemFileError(f"unknown keys: {', '.join(sorted(unknown))}")
    for key in ("A", "B"):
        if key not in doc:
            raise ProblemFileError(f"missing required matrix {key}")
    A, B = _matrix(doc["A"], "A"), _matrix(doc["B"], "B")
    C = _matrix(doc["C"], "C") if doc.get("C") is not None else None
    n = A.rows
    for name, M in (("B", B), ("C", C)):
        if M is not None and M.rows != n:
            raise ProblemFileError(f"{name} has order {M.rows}, expected {n}")
    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
            raise ProblemFileError("labels must be an array of strings")
        if len(labels) != n:
            raise ProblemFileError(f"{len(labels)} labels for {n} alternatives")
        labels = tuple(labels)
    return ProblemFile(A, B, C, labels)


def load_problem(path: str | Path) -> ProblemFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return parse_problem(doc)


def read_matrix_csv(path: str | Path, name: str) -> list[list[str]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [[cell.strip() for cell in row] for row in csv.reader(fh) if any(c.strip() for c in row)]
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return rows


def load_csv_problem(paths: list[str], labels: list[str] | None = None) -> ProblemFile:
    if len(paths) not in (2, 3):
        raise ProblemFileError("--matrix-csv takes two or three files (A, B and optional C)")
    doc = {name: read_matrix_csv(p, name) for name, p in zip("ABC", paths)}
    if labels:
        doc["labels"] = labels
    return parse_problem(doc)


def fmt(x: float) -> float:
    """Round to 12 significant digits for stable output."""
    if x == 0 or not math.isfinite(x):
        return x
    return float(f"{x:.12g}")


def num(s: TropScalar | float, log: bool = False):
    """Render a semifield value on the ratio scale, or as its log (zero -> null)."""
    logval = s.logval if isinstance(s, TropScalar) else float(s)
    if log:
        return None if logval == NEG_INF else fmt(logval) + 0.0
    return 0.0 if logval == NEG_INF else fmt(math.exp(logval))


def vec(v: TropVector, log: bool = False) -> list:
    return [num(float(x), log) for x in v.logs]


def dump_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else (f"{v:.12g}" if isinstance(v, float) else v) for v in row])
    return buf.getvalue()
