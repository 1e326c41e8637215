"""Deterministic CSV emission: 17 significant digits, LF line ends, UTF-8."""

import numpy as np


def format_value(v):
    return f"{float(v):.17g}"


def format_rows(header, columns):
    """Render equal-length columns under ``header`` as CSV text."""
    columns = [np.asarray(c, dtype=float) for c in columns]
    if len({c.size for c in columns}) > 1:
        raise ValueError("columns differ in length")
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
