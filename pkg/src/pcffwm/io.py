"""Deterministic CSV/JSON serialization for results.

Every file carries the schema version, the tool version and the full
input configuration, so any output can be reproduced byte-for-byte by
re-running its embedded config with the same tool version.
"""

from __future__ import annotations

import json

import numpy as np

SCHEMA_VERSION = "1"


def _tool_version() -> str:
    from . import __version__

    return __version__


def _fmt(value) -> str:
    """Shortest round-trip decimal representation."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def metadata(command: str, config: dict, resolved: dict | None = None) -> dict:
    meta = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": _tool_version(),
        "command": command,
        "config": config,
    }
    if resolved:
        meta["resolved"] = resolved
    return meta


def write_csv(path, columns, rows, meta: dict) -> None:
    """CSV with '#'-prefixed metadata header lines; column units belong
    in the column names."""
    lines = []
    for key in ("schema_version", "tool_version", "command"):
        lines.append(f"# {key}={meta[key]}")
    lines.append("# config=" + json.dumps(meta["config"], sort_keys=True))
    if "resolved" in meta:
        lines.append("# resolved=" + json.dumps(meta["resolved"], sort_keys=True))
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _to_jsonable(obj):
    if isinstance(obj, np.ndarray):
        return [_to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    return obj


def write_json(path, data: dict, meta: dict) -> None:
    doc = dict(meta)
    doc["data"] = _to_jsonable(data)
    with open(path, "w", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def read_config_header(path) -> dict:
    """Recover the embedded config from a CSV or JSON output file."""
    with open(path) as fh:
        first = fh.read(1)
        fh.seek(0)
        if first == "{":
            return json.load(fh)["config"]
        for line in fh:
            if line.startswith("# config="):
                return json.loads(line[len("# config=") :])
    raise ValueError(f"no embedded config found in {path}")
