"""Serialization of step reports: JSON and a plain text rendering."""

from __future__ import annotations

import json
from typing import Dict, List


def to_json(reports: List[Dict]) -> str:
    """Deterministic JSON document (no timing, stable key order)."""
    return json.dumps(reports, indent=2, ensure_ascii=False) + "\n"


def _render_value(value, indent: str) -> List[str]:
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{indent}{k}:")
                lines.extend(_render_value(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {_scalar(v)}")
        return lines
    if isinstance(value, list):
        lines = []
        for v in value:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{indent}-")
                lines.extend(_render_value(v, indent + "  "))
            else:
                lines.append(f"{indent}- {_scalar(v)}")
        return lines
    return [f"{indent}{_scalar(value)}"]


def _scalar(v) -> str:
    if v is None:
        return "none"
    if v is True:
        return "true"
    if v is False:
        return "false"
    if v == [] or v == {}:
        return "(empty)"
    return str(v)


def render_text(reports: List[Dict]) -> str:
    out = []
    for r in reports:
        out.append(f"[{r['index']}] {r['statement']}")
        out.append(f"  verdict: {r['verdict']}")
        if r["flags"]:
            out.append(f"  flags: {', '.join(r['flags'])}")
        if r["outputs"]:
            out.extend(_render_value(r["outputs"], "  "))
        out.append("")
    return "\n".join(out)
