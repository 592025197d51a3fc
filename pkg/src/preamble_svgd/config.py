"""Flat ``key = value`` config files.

Values are parsed as Python literals where possible, comma-separated lists
become lists, and anything else is kept as a bare string.
"""
from __future__ import annotations

import ast
from pathlib import Path


def _parse_scalar(raw: str):
    raw = raw.strip()
    low = raw.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    try:
        return ast.literal_eval(raw)
    except (ValueError, SyntaxError):
        return raw


def parse_config(text: str) -> dict:
    cfg = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if "," in raw and not raw.startswith(("[", "(")):
            cfg[key] = [_parse_scalar(v) for v in raw.split(",") if v.strip()]
        else:
            value = _parse_scalar(raw)
            cfg[key] = list(value) if isinstance(value, tuple) else value
    return cfg


def load_config(path) -> dict:
    return parse_config(Path(path).read_text())


def as_list(value) -> list:
    return value if isinstance(value, list) else [value]
