"""Point-set files (CSV and JSON) and exact float serialization.

Floats are written as decimals with 17 significant digits, which round-trips
every float64 exactly.
"""

import hashlib
import json
import math
import sys

import numpy as np

FORMATS = ("csv", "json")


class PointSetParseError(ValueError):
    """Malformed point-set file; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


def format_float(x):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"refusing to serialize non-finite value {x!r}")
    return format(x, ".17g")


def _parse_float(token, line):
    try:
        value = float(token)
    except ValueError:
        raise PointSetParseError(f"not a number: {token.strip()!r}", line) from None
    if not math.isfinite(value):
        raise PointSetParseError(f"non-finite value: {token.strip()!r}", line)
    return value


def parse_csv(text):
    rows = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        row = [_parse_float(tok, lineno) for tok in raw.split(",")]
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise PointSetParseError(
                f"expected {width} coordinates, found {len(row)}", lineno
            )
        rows.append(row)
    if not rows:
        raise PointSetParseError("no points found")
    return np.array(rows, dtype=np.float64)


def parse_json(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PointSetParseError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict) or "points" not in doc:
        raise PointSetParseError('expected an object with a "points" array')
    points = doc["points"]
    if not isinstance(points, list) or not points:
        raise PointSetParseError('"points" must be a non-empty array')
    rows = []
    for i, pt in enumerate(points):
        if not isinstance(pt, list) or not pt:
            raise PointSetParseError(f"point {i} is not a non-empty array")
        row = []
        for v in pt:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise PointSetParseError(f"point {i} has non-numeric entry {v!r}")
            if not math.isfinite(v):
                raise PointSetParseError(f"point {i} has non-finite entry")
            row.append(float(v))
        if rows and len(row) != len(rows[0]):
            raise PointSetParseError(
                f"point {i} has {len(row)} coordinates, expected {len(rows[0])}"
            )
        rows.append(row)
    pts = np.array(rows, dtype=np.float64)
    if "n" in doc and doc["n"] != pts.shape[0]:
        raise PointSetParseError(f'"n" is {doc["n"]} but {pts.shape[0]} points given')
    if "p" in doc and doc["p"] != pts.shape[1]:
        raise PointSetParseError(f'"p" is {doc["p"]} but points have {pts.shape[1]} coordinates')
    return pts, doc.get("meta")


def sniff_format(path, text):
    if path.endswith(".json"):
        return "json"
    if path.endswith(".csv"):
        return "csv"
    return "json" if text.lstrip().startswith("{") else "csv"


def read_input(path):
    """Raw bytes of ``path`` (``-`` is stdin). OSError propagates."""
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def load_points(data, path="-", fmt=None):
    """Parse bytes into ``(points, meta, fmt)``."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise PointSetParseError("input is not UTF-8 text") from None
    fmt = fmt or sniff_format(path, text)
    if fmt == "json":
        pts, meta = parse_json(text)
    else:
        pts, meta = parse_csv(text), None
    return pts, meta, fmt


def digest(data):
    return "sha256:" + hashlib.sha256(data).hexdigest()


def points_to_csv(points):
    return "".join(",".join(format_float(v) for v in row) + "\n" for row in points)


def dumps(obj, indent=2, _level=0):
    """JSON text with floats at 17 significant digits.

    Handles dicts, lists/tuples, numpy scalars and arrays, str, bool, int,
    float and None.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, np.generic):
        obj = obj.item()
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.generic)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def points_to_json(points, meta=None):
    points = np.asarray(points)
    doc = {"p": int(points.shape[1]), "n": int(points.shape[0]), "points": points}
    if meta is not None:
        doc["meta"] = meta
    return dumps(doc) + "\n"


def serialize_points(points, fmt, meta=None):
    if fmt == "json":
        return points_to_json(points, meta)
    return points_to_csv(points)


def write_output(text, path):
    """Write to ``path`` or stdout for ``None``/``-``. OSError propagates."""
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
