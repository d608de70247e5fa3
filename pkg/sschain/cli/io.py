"""
Deterministic CSV/JSON writers with atomic replacement
"""

import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence

import structlog

logger = structlog.get_logger(__name__)

STDOUT = "-"


def format_float(value: float) -> str:
    """Shortest decimal that round-trips to the same double"""
    return repr(float(value))


def _atomic_write(path: str, text: str) -> None:
    if path == STDOUT:
        sys.stdout.write(text)
        sys.stdout.flush()
        return

    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    logger.debug("Wrote output", path=str(target), size=len(text))


def write_csv(path: str, header: Sequence[str], columns: Iterable[Sequence[float]]) -> None:
    """Write equal-length float columns under a header row"""
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(format_float(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_json(path: str, data: Any) -> None:
    _atomic_write(path, json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
