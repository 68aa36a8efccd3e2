"""Machine output: JSON documents and CSV tables, to stdout or a file.

Complex values are already [re, im] pairs in every payload; CSV rows
carry them as separate x and y columns.
"""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import typer
from loguru import logger


def render_json(payload: dict[str, Any], indent: int = 2) -> str:
    return json.dumps(payload, indent=indent or None, ensure_ascii=False) + "\n"


def render_csv(rows: Sequence[dict[str, Any]], fieldnames: Sequence[str]) -> str:
    output = io.StringIO()
    writer = csv.DictWriter(output, fieldnames=list(fieldnames), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(row.get(k)) for k in fieldnames})
    return output.getvalue()


def _cell(value: Any) -> Any:
    # repr keeps full float precision so reruns are byte-identical
    if isinstance(value, float):
        return repr(value)
    return value


def resolve_out(out: Path | None, out_dir: Path) -> Path | None:
    if out is None:
        return None
    out = out.expanduser()
    return out if out.is_absolute() else out_dir.expanduser() / out


def emit(text: str, out: Path | None) -> None:
    """Write to `out` (parents created) or to stdout when no path is given."""
    if out is None:
        typer.echo(text, nl=False)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    logger.debug("Wrote {} bytes to {}", len(text), out)
