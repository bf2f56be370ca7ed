"""Serialization: deterministic JSON reports, CSV tables and configuration files.

Floats are written with 17 significant digits so that every value survives a
round trip exactly.  Reports never contain timings or host information, so
that identical configurations give byte-identical files.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import os
from pathlib import Path

import numpy as np
import yaml

from .errors import PreconditionError

TOOL_NAME = "szego-lab"


def tool_version():
    from . import __version__
    return __version__


def format_float(x):
    """17-significant-digit representation; non-finite values become strings."""
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    text = format(x, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def to_jsonable(obj):
    """Convert numpy types, complex numbers and dataclasses to plain containers."""
    if hasattr(obj, "as_dict") and callable(obj.as_dict):
        return to_jsonable(obj.as_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                if f.repr}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj, indent, level, out):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(pad + json.dumps(k) + ": ")
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            out.append("[" + ", ".join(format_float(v) if isinstance(v, float) else str(v)
                                       for v in obj) + "]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    elif isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    else:
        out.append(json.dumps(obj))


def dumps(obj, indent=2):
    """Deterministic JSON text of ``obj`` (numbers with 17 significant digits).

    Examples
    --------
    >>> dumps({"x": 0.1, "z": 1j}, indent=0).replace("\\n", "")
    '{"x": 0.10000000000000001,"z": {"re": 0.0,"im": 1.0}}'
    """
    out = []
    _emit(to_jsonable(obj), indent, 0, out)
    return "".join(out) + "\n"


def make_report(command, config, result):
    """Report envelope with the tool version and the fully resolved config."""
    return {"tool": TOOL_NAME, "version": tool_version(), "command": command,
            "config": config, "result": result}


def write_text(path, text):
    if path in (None, "-"):
        import sys
        sys.stdout.write(text)
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def csv_text(header, rows):
    """CSV with 17-significant-digit floats."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format(float(x), ".17g") if isinstance(x, (float, np.floating)) else x
                         for x in row])
    return buf.getvalue()


def load_config(path):
    """Read a YAML (or JSON) configuration tree."""
    if not os.path.exists(path):
        raise PreconditionError(f"config file {path} does not exist")
    with open(path, encoding="utf-8") as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise PreconditionError(f"cannot parse config {path}: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise PreconditionError("config file must contain a mapping at top level")
    return data


def parse_complex_vector(text):
    """Parse ``"0.9,0"`` or ``"0.3+0.1j, 0.2j"`` into a complex array."""
    if isinstance(text, (list, tuple, np.ndarray)):
        return np.array([complex(str(x).replace(" ", "")) if isinstance(x, str) else complex(x)
                         for x in text], dtype=complex)
    if isinstance(text, (int, float, complex)):
        return np.array([complex(text)])
    try:
        return np.array([complex(p.strip().replace(" ", "").replace("i", "j"))
                         for p in str(text).split(",") if p.strip()], dtype=complex)
    except ValueError:
        raise PreconditionError(f"cannot parse complex vector {text!r}") from None
