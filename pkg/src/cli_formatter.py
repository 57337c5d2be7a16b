"""
Module: cli_formatter
Purpose: Terminal and pipe rendering of Dissiwire run results.
"""

from __future__ import annotations

import json
import os
import re
import sys
import textwrap
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence, TextIO

from .utils import BOLD, COLOR_RESET, color_256

SUMMARY_SCHEMA_VERSION = "1.0"
LINE_WIDTH = 88
LABEL_WIDTH = 26
INDENT = "  "
ANSI_SGR_PATTERN = re.compile(r"\x1b\[[0-9;]*m")
MODES = ("auto", "tty", "plain", "pipe")

# 256-color codes per role
THEME_PALETTES: dict[str, dict[str, int]] = {
    "light": {"heading": 25, "value": 238, "ok": 28, "guard": 166, "failed": 160, "muted": 243},
    "dark": {"heading": 111, "value": 252, "ok": 78, "guard": 215, "failed": 203, "muted": 245},
}


@dataclass
class FormatterConfig:
    """How a run talks to the terminal."""

    use_color: bool = True
    unicode_enabled: bool = True
    verbose: bool = False
    mode: str = "tty"
    pipe_format: str = "json"
    theme: str = "light"

    @property
    def pipe_mode(self) -> bool:
        return self.mode == "pipe"

    @property
    def plain_mode(self) -> bool:
        return self.mode in ("plain", "pipe")


class CLIFormatter:
    """
    Render one command run.

    TTY and plain modes print a heading, the command's summary values, guard
    warnings and the output path. Pipe mode prints exactly one summary line
    per run, success or failure.
    """

    def __init__(self, config: FormatterConfig | None = None, stream: TextIO | None = None) -> None:
        self.config = config or FormatterConfig()
        self.stream = stream or sys.stdout
        self.palette = _resolve_palette(self.config.theme)

    def verbose(self, text: str) -> None:
        if self.config.verbose and not self.config.pipe_mode:
            self._write(self._paint(f"[verbose] {text}", "muted"))

    def run_report(
        self,
        command: str,
        summary: Sequence[tuple[str, str]],
        warnings: Iterable[str],
        output: str,
        output_format: str,
    ) -> None:
        """
        Report a finished command.

        Args:
            command: Subcommand name.
            summary: (label, value) pairs shown in TTY/plain mode.
            warnings: Guard warnings raised during the run (too-fast ramps and similar).
            output: Path of the written CSV/JSON file.
            output_format: csv or json.
        """
        if self.config.pipe_mode:
            self.pipe_summary({"status": "OK", "command": command, "format": output_format, "output": output})
            return
        marker = "::" if self.config.plain_mode or not self.config.unicode_enabled else "◆"
        self._write("")
        self._write(self._paint(f"{marker} {command}", "heading", bold=True))
        for label, value in summary:
            self._value_line(label, value)
        for message in warnings:
            self._write(self._paint(f"{INDENT}! {message}", "guard", bold=True))
        self._write(self._paint(f"{INDENT}wrote {output}", "ok"))

    def run_failure(self, *, status: str, command: str, reason: str, log_hint: str, exit_code: int) -> None:
        """Report a failed or aborted command."""
        if self.config.pipe_mode:
            self.pipe_summary(
                {"status": status, "command": command, "reason": reason, "exit_code": exit_code, "log": log_hint}
            )
            return
        self._write("")
        self._write(self._paint(f"{status}: {command} (exit {exit_code})", "failed", bold=True))
        for chunk in textwrap.wrap(reason, width=LINE_WIDTH - len(INDENT)) or [""]:
            self._write(f"{INDENT}{chunk}")
        self._write(self._paint(f"{INDENT}log: {log_hint}", "muted"))

    def pipe_summary(self, payload: Mapping[str, Any]) -> None:
        """Write one machine-readable line (JSON or key=value pairs)."""
        if not self.config.pipe_mode:
            return
        record = {"schema_version": SUMMARY_SCHEMA_VERSION, **payload}
        if self.config.pipe_format == "kv":
            self._write(" ".join(f"{key}={value}" for key, value in record.items()))
        else:
            self._write(json.dumps(record, separators=(",", ":")))

    def _value_line(self, label: str, value: str) -> None:
        prefix = f"{INDENT}{label:<{LABEL_WIDTH}} "
        room = LINE_WIDTH - len(prefix)
        if len(ANSI_SGR_PATTERN.sub("", value)) <= room:
            self._write(prefix + self._paint(value, "value"))
            return
        for index, chunk in enumerate(textwrap.wrap(value, width=room)):
            self._write((prefix if index == 0 else " " * len(prefix)) + self._paint(chunk, "value"))

    def _write(self, text: str) -> None:
        self.stream.write(text + "\n")

    def _paint(self, text: str, role: str, bold: bool = False) -> str:
        if not self.config.use_color or not text:
            return text
        return f"{BOLD if bold else ''}{self.palette[role]}{text}{COLOR_RESET}"


def detect_terminal_capabilities(
    *,
    color_preference: str = "auto",
    plain_mode: bool = False,
    no_color_flag: bool = False,
    stdout_isatty: bool | None = None,
    mode_preference: str = "auto",
    theme_preference: str | None = None,
    pipe_format: str = "json",
) -> FormatterConfig:
    """
    Resolve the formatter configuration from flags and the environment.

    `--mode pipe` wins over everything; `--plain`, `DISSIWIRE_PLAIN` or a
    non-TTY stdout under `--mode auto` give plain output. Color then follows
    `--color`/`DISSIWIRE_COLOR`, `--no-color`, `NO_COLOR` and `TERM=dumb`.
    """
    mode = (mode_preference or "auto").lower()
    if mode not in MODES:
        mode = "auto"
    if stdout_isatty is None:
        stdout_isatty = sys.stdout.isatty()
    theme = _resolve_theme(theme_preference)

    if mode != "pipe" and (plain_mode or os.environ.get("DISSIWIRE_PLAIN") or (mode == "auto" and not stdout_isatty)):
        mode = "plain"
    if mode in ("plain", "pipe"):
        return FormatterConfig(use_color=False, unicode_enabled=False, mode=mode, pipe_format=pipe_format, theme=theme)

    preference = (color_preference or os.environ.get("DISSIWIRE_COLOR", "auto")).lower()
    if preference in ("always", "never"):
        use_color = preference == "always"
    else:
        use_color = not no_color_flag and not os.environ.get("NO_COLOR") and os.environ.get("TERM", "") != "dumb"
    return FormatterConfig(
        use_color=use_color,
        unicode_enabled=_supports_unicode(),
        mode="tty",
        pipe_format=pipe_format,
        theme=theme,
    )


def _resolve_theme(theme_preference: str | None) -> str:
    theme = (theme_preference or os.environ.get("DISSIWIRE_THEME", "light")).strip().lower()
    return theme if theme in THEME_PALETTES else "light"


def _resolve_palette(theme: str) -> dict[str, str]:
    return {role: color_256(code) for role, code in THEME_PALETTES[theme].items()}


def _supports_unicode() -> bool:
    encoding = getattr(sys.stdout, "encoding", None)
    if not encoding:
        return False
    try:
        "◆".encode(encoding)
    except UnicodeEncodeError:
        return False
    return True
