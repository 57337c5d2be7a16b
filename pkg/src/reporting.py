"""
Module: reporting
Purpose: Logging and report generation utilities.
"""

import csv
import json
import os
from dataclasses import asdict, is_dataclass
from datetime import datetime
from typing import Any, Iterable, List, Mapping, Sequence

import numpy as np

from .utils import format_number, output_dir

ARTIFACTS_DIR = "artifacts"
LOG_FILE_NAME = os.path.join(ARTIFACTS_DIR, "dissiwire.log")
SCHEMA_VERSION = "1.0"


def output_path(filename: str) -> str:
    """Absolute path of an output file inside the configured output directory."""
    return os.path.join(output_dir(), filename)


def ensure_log_initialized() -> str:
    """Ensure the Dissiwire log file exists and return its absolute path."""
    path = os.path.abspath(LOG_FILE_NAME)
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    with open(path, "a", encoding="utf-8"):
        pass
    return path


def write_log(entries: List[str], outfile: str | None = None):
    """
    Append entries to logfile.
    """
    target = outfile or LOG_FILE_NAME
    directory = os.path.dirname(os.path.abspath(target)) or "."
    os.makedirs(directory, exist_ok=True)
    timestamp = datetime.now().isoformat()
    with open(target, "a", encoding="utf-8") as handle:
        for entry in entries:
            normalized = entry if entry.startswith("[") else f"[INFO] {entry}"
            handle.write(f"[{timestamp}] {normalized}\n")


class EnhancedJSONEncoder(json.JSONEncoder):
    def default(self, o: Any) -> Any:
        if is_dataclass(o):
            return asdict(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, (complex, np.complexfloating)):
            return [float(o.real), float(o.imag)]
        return super().default(o)


def build_payload(command: str, config: Mapping[str, Any], body: Mapping[str, Any]) -> dict:
    """
    Wrap a command result with the schema version and the effective config.

    Args:
        command: CLI subcommand name.
        config: Effective configuration echoed for provenance.
        body: Command-specific result fields.

    Returns:
        Ordered payload dictionary.
    """
    payload: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": dict(sorted(config.items())),
    }
    payload.update(body)
    return payload


def write_json_report(payload: Mapping[str, Any], outfile: str):
    """
    Save structured JSON output.
    """
    os.makedirs(os.path.dirname(os.path.abspath(outfile)) or ".", exist_ok=True)
    with open(outfile, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, indent=2, cls=EnhancedJSONEncoder)
        handle.write("\n")


def _csv_cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_number(float(value))
    return str(value)


def write_csv_report(
    rows: Iterable[Mapping[str, Any]],
    fieldnames: Sequence[str],
    config: Mapping[str, Any],
    outfile: str,
):
    """
    Save a CSV table preceded by `# key=value` provenance lines.

    Args:
        rows: Row mappings keyed by fieldnames.
        fieldnames: Fixed, documented column order.
        config: Effective configuration echoed in the header.
        outfile: Destination path.

    Returns:
        None
    """
    os.makedirs(os.path.dirname(os.path.abspath(outfile)) or ".", exist_ok=True)
    with open(outfile, "w", encoding="utf-8", newline="") as handle:
        handle.write(f"# schema_version={SCHEMA_VERSION}\n")
        for key, value in sorted(config.items()):
            handle.write(f"# {key}={_csv_cell(value) if value is not None else ''}\n")
        writer = csv.DictWriter(handle, fieldnames=list(fieldnames), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({name: _csv_cell(row[name]) for name in fieldnames})
