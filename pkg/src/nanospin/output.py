"""Deterministic CSV/JSON emission for CLI runs.

Every emitted file embeds the fully resolved run configuration and a format
version string.  CSV files carry them as leading '#' comment lines above
the header row; JSON documents carry them as top-level keys.  Identical
configurations produce byte-identical files (no timestamps, sorted keys,
17-significant-digit floats).
"""

from __future__ import annotations

import json
import os
from pathlib import Path

FORMAT_VERSION = "1"

_ENV_OUTDIR = "NANOSPIN_OUTDIR"


def resolve_path(path: str | Path) -> Path:
    """Resolve an output path; relative paths land in $NANOSPIN_OUTDIR if set."""
    path = Path(path)
    base = os.environ.get(_ENV_OUTDIR)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_csv(path: str | Path, columns: dict, config: dict) -> Path:
    """Write named columns with an embedded config/comment header."""
    path = resolve_path(path)
    names = list(columns)
    length = len(next(iter(columns.values())))
    lines = [f"# format_version = {FORMAT_VERSION}"]
    for key in sorted(config):
        lines.append(f"# {key} = {_fmt(config[key])}")
    lines.append(",".join(names))
    for i in range(length):
        lines.append(",".join(_fmt(columns[name][i]) for name in names))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_json(path: str | Path, payload: dict, config: dict) -> Path:
    """Write a JSON document with schema version and resolved config."""
    path = resolve_path(path)
    doc = {"schema_version": FORMAT_VERSION, "config": _jsonable(config)}
    doc.update(_jsonable(payload))
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def render_json(payload: dict, config: dict) -> str:
    doc = {"schema_version": FORMAT_VERSION, "config": _jsonable(config)}
    doc.update(_jsonable(payload))
    return json.dumps(doc, indent=2, sort_keys=True)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "tolist"):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, float):
        return obj
    return str(obj)
