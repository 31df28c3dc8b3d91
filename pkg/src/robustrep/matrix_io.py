"""CSV serialization for matrices: one row per line, no header.

Values are written with 17 significant digits, enough for float64 round
trips to be exact, and the byte output is deterministic for a given matrix.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import EmptyFileError, ParseError, RaggedRowsError
from .matrix import as_matrix

__all__ = ["read_matrix_csv", "write_matrix_csv"]


def write_matrix_csv(m, path) -> None:
    """Write ``m`` as comma-separated rows, one matrix row per line."""
    a = as_matrix(m)
    text = "\n".join(",".join(format(v, ".17g") for v in row) for row in a) + "\n"
    Path(path).write_text(text)


def read_matrix_csv(path) -> np.ndarray:
    """Parse a matrix written by :func:`write_matrix_csv`.

    Dimensions are inferred from the file.  Ragged rows, non-numeric tokens,
    and non-finite values are rejected with the offending location.
    """
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines or all(not line.strip() for line in lines):
        raise EmptyFileError(f"{path} contains no data")

    rows: list[list[float]] = []
    width: int | None = None
    for line_no, line in enumerate(lines, start=1):
        tokens = line.split(",")
        if width is None:
            width = len(tokens)
        elif len(tokens) != width:
            raise RaggedRowsError(
                f"expected {width} values per row, got {len(tokens)}", line=line_no
            )
        row = []
        for col_no, token in enumerate(tokens, start=1):
            try:
                value = float(token)
            except ValueError:
                raise ParseError(
                    f"could not parse {token.strip()!r} as a number", line=line_no, column=col_no
                ) from None
            if not math.isfinite(value):
                raise ParseError(
                    f"non-finite value {token.strip()!r}", line=line_no, column=col_no
                )
            row.append(value)
        rows.append(row)
    return np.array(rows)
