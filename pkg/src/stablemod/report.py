"""Machine-readable reports with a fixed key set, and their text rendering."""

from __future__ import annotations

import json
import math

from . import __version__

REPORT_KEYS = ("version", "ring", "module", "command", "verdict", "witnesses", "transcript", "caps", "seed", "timing_ms")

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "stablemod report",
    "type": "object",
    "required": list(REPORT_KEYS),
    "additionalProperties": False,
    "properties": {
        "version": {"type": "string"},
        "ring": {"type": ["string", "null"]},
        "module": {"type": ["string", "null"]},
        "command": {"type": "string"},
        "verdict": {"type": "string"},
        "witnesses": {"type": "array"},
        "transcript": {"type": "array"},
        "caps": {
            "type": "object",
            "required": ["max_hom", "max_rank", "max_degree"],
            "properties": {k: {"type": "integer", "minimum": 1} for k in ("max_hom", "max_rank", "max_degree")},
        },
        "seed": {"type": "integer"},
        "timing_ms": {"type": ["number", "null"]},
    },
}


def make_report(command: str, verdict: str, *, ring=None, module=None, witnesses=(), transcript=(),
                caps=None, seed: int = 42, timing_ms=None) -> dict:
    return {
        "version": __version__,
        "ring": ring,
        "module": module,
        "command": command,
        "verdict": verdict,
        "witnesses": list(witnesses),
        "transcript": list(transcript),
        "caps": dict(caps or {}),
        "seed": seed,
        "timing_ms": timing_ms,
    }


def _clean(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def to_json(report: dict) -> str:
    return json.dumps(_clean(report), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def to_text(report: dict) -> str:
    lines = [f"{report['command']}: {report['verdict']}"]
    if report.get("ring"):
        lines.append(f"  ring   {report['ring']}")
    if report.get("module"):
        lines.append(f"  module {report['module']}")
    for w in report["witnesses"]:
        if isinstance(w, dict):
            flat = {k: _clean(v) for k, v in w.items() if k != "transcript"}
            # multi-line values (Betti tables, presentations) get their own block
            blocks = {k: v for k, v in flat.items() if isinstance(v, str) and "\n" in v}
            body = ", ".join(f"{k}={v}" for k, v in flat.items() if k not in blocks)
            lines.append(f"  - {body}")
            for k, v in blocks.items():
                lines.append(f"    {k}:")
                lines.extend(f"      {row}" for row in v.splitlines())
        else:
            lines.append(f"  - {w}")
    return "\n".join(lines) + "\n"
