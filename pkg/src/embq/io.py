"""File formats: NPY (v1.0 subset), CSV, RAWF64 matrices, graph text, and
fixed-precision JSON emission.

Readers are strict: unsupported layouts are rejected with the byte or line
location rather than silently coerced, because a transposed or truncated
matrix corrupts every metric downstream.
"""

from __future__ import annotations

import ast
import json
import math
import struct
from pathlib import Path

import numpy as np

from .core import DataError, check_matrix
from .datagen import Graph

NPY_MAGIC = b"\x93NUMPY"
RAWF64_MAGIC = b"EMBQ"
RAWF64_HEADER_SIZE = 16

MATRIX_FORMATS = ("npy", "csv", "raw")

_SUFFIX_FORMATS = {".npy": "npy", ".csv": "csv", ".raw": "raw", ".embq": "raw"}


def _read_bytes(path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc


def read_npy(path) -> np.ndarray:
    """Read a 2-D little-endian float NPY v1.0 file.

    Accepted dtypes are '<f4' and '<f8', C-order only; anything else is
    rejected with the offending header field or byte location.
    """
    data = _read_bytes(path)
    if len(data) < 10:
        raise DataError(f"{path}: truncated NPY: expected at least 10 header bytes, found {len(data)}")
    if data[:6] != NPY_MAGIC:
        raise DataError(f"{path}: bad NPY magic at byte 0: {data[:6]!r}")
    major, minor = data[6], data[7]
    if (major, minor) != (1, 0):
        raise DataError(f"{path}: unsupported NPY version {major}.{minor}, only 1.0 is accepted")
    header_len = struct.unpack_from("<H", data, 8)[0]
    header_end = 10 + header_len
    if len(data) < header_end:
        raise DataError(
            f"{path}: truncated NPY header: expected {header_len} bytes at byte 10, "
            f"found {len(data) - 10}"
        )
    try:
        meta = ast.literal_eval(data[10:header_end].decode("latin-1").strip())
    except (SyntaxError, ValueError) as exc:
        raise DataError(f"{path}: unparseable NPY header: {exc}") from exc
    if not isinstance(meta, dict) or not {"descr", "fortran_order", "shape"} <= set(meta):
        raise DataError(f"{path}: NPY header missing descr/fortran_order/shape")
    descr = meta["descr"]
    if descr not in ("<f4", "<f8"):
        raise DataError(
            f"{path}: unsupported NPY dtype {descr!r}: need little-endian 4- or 8-byte floats"
        )
    if meta["fortran_order"]:
        raise DataError(
            f"{path}: Fortran-order NPY rejected (transposing silently would swap n and d)"
        )
    shape = meta["shape"]
    if (
        not isinstance(shape, tuple)
        or len(shape) != 2
        or not all(isinstance(v, int) and v >= 1 for v in shape)
    ):
        raise DataError(f"{path}: NPY shape must be 2-D with positive sizes, got {shape!r}")
    n, d = shape
    itemsize = 4 if descr == "<f4" else 8
    expected = n * d * itemsize
    payload = len(data) - header_end
    if payload != expected:
        raise DataError(
            f"{path}: NPY payload length mismatch at byte {header_end}: "
            f"expected {expected} bytes, found {payload}"
        )
    arr = np.frombuffer(data, dtype=descr, offset=header_end).astype(np.float64).reshape(n, d)
    return check_matrix(arr, str(path))


def write_npy(path, x) -> None:
    """Write a float64 C-order NPY v1.0 file (the subset read_npy accepts)."""
    a = check_matrix(x)
    header = f"{{'descr': '<f8', 'fortran_order': False, 'shape': {a.shape}, }}"
    pad = -(10 + len(header) + 1) % 64
    header = header + " " * pad + "\n"
    with open(path, "wb") as fh:
        fh.write(NPY_MAGIC)
        fh.write(bytes([1, 0]))
        fh.write(struct.pack("<H", len(header)))
        fh.write(header.encode("latin-1"))
        fh.write(a.astype("<f8").tobytes(order="C"))


def read_csv_matrix(path, header: bool = False) -> np.ndarray:
    """Read a comma-separated numeric matrix; `header` skips the first line.

    Rows must be rectangular and every field numeric and finite; errors name
    the offending line.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    lines = text.splitlines()
    start = 1 if header else 0
    rows: list[list[float]] = []
    width = None
    for lineno, line in enumerate(lines[start:], start + 1):
        parts = line.split(",")
        vals = []
        for col, part in enumerate(parts):
            try:
                vals.append(float(part))
            except ValueError:
                raise DataError(
                    f"{path}: line {lineno}: non-numeric field {part.strip()!r} "
                    f"(column {col + 1})"
                ) from None
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise DataError(
                f"{path}: line {lineno}: ragged row: expected {width} fields, found {len(vals)}"
            )
        rows.append(vals)
    if not rows:
        raise DataError(f"{path}: no data rows")
    a = np.array(rows)
    finite = np.isfinite(a)
    if not finite.all():
        r, c = np.argwhere(~finite)[0]
        raise DataError(
            f"{path}: line {start + int(r) + 1}: non-finite value at column {int(c) + 1}"
        )
    return a


def read_rawf64(path) -> np.ndarray:
    """Read the RAWF64 format: 16-byte header (magic 'EMBQ', u32 n, u32 d,
    4 reserved bytes, little-endian) followed by n*d little-endian doubles."""
    data = _read_bytes(path)
    if len(data) < RAWF64_HEADER_SIZE:
        raise DataError(
            f"{path}: truncated RAWF64 header: expected {RAWF64_HEADER_SIZE} bytes, "
            f"found {len(data)}"
        )
    if data[:4] != RAWF64_MAGIC:
        raise DataError(f"{path}: bad RAWF64 magic at byte 0: {data[:4]!r}, expected {RAWF64_MAGIC!r}")
    n, d = struct.unpack_from("<II", data, 4)
    if n < 1 or d < 1:
        raise DataError(f"{path}: RAWF64 dimensions must be positive, got {n} x {d} at byte 4")
    expected = RAWF64_HEADER_SIZE + 8 * n * d
    if len(data) != expected:
        raise DataError(
            f"{path}: RAWF64 payload length mismatch at byte {RAWF64_HEADER_SIZE}: "
            f"expected {expected - RAWF64_HEADER_SIZE} data bytes, "
            f"found {len(data) - RAWF64_HEADER_SIZE}"
        )
    arr = np.frombuffer(data, dtype="<f8", offset=RAWF64_HEADER_SIZE).reshape(n, d).copy()
    return check_matrix(arr, str(path))


def write_rawf64(path, x) -> None:
    """Write a matrix in the RAWF64 format; round-trips float64 bit-exactly."""
    a = check_matrix(x)
    n, d = a.shape
    with open(path, "wb") as fh:
        fh.write(RAWF64_MAGIC)
        fh.write(struct.pack("<II", n, d))
        fh.write(b"\x00" * 4)
        fh.write(a.astype("<f8").tobytes(order="C"))


def resolve_format(path, fmt: str = "auto") -> str:
    """Resolve 'auto' to a concrete matrix format from the file suffix."""
    if fmt != "auto":
        if fmt not in MATRIX_FORMATS:
            raise DataError(f"unknown matrix format {fmt!r}; choose from {MATRIX_FORMATS}")
        return fmt
    suffix = Path(path).suffix.lower()
    resolved = _SUFFIX_FORMATS.get(suffix)
    if resolved is None:
        raise DataError(
            f"cannot infer matrix format from suffix {suffix!r} of {path}; pass --format"
        )
    return resolved


def read_matrix(path, fmt: str = "auto", csv_header: bool = False) -> np.ndarray:
    """Read an embedding matrix in any supported format."""
    resolved = resolve_format(path, fmt)
    if resolved == "npy":
        return read_npy(path)
    if resolved == "csv":
        return read_csv_matrix(path, header=csv_header)
    return read_rawf64(path)


def read_value_series(path) -> np.ndarray:
    """Read a text file with one finite float per line."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    values = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        try:
            v = float(stripped)
        except ValueError:
            raise DataError(f"{path}: line {lineno}: non-numeric value {stripped!r}") from None
        if not math.isfinite(v):
            raise DataError(f"{path}: line {lineno}: non-finite value {stripped!r}")
        values.append(v)
    if not values:
        raise DataError(f"{path}: no values")
    return np.array(values)


def graph_to_text(g: Graph) -> str:
    """Graph text format: 'n m' line, then one 'u v' line per edge (0-based, u < v)."""
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{int(u)} {int(v)}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def write_graph(path, g: Graph) -> None:
    Path(path).write_text(graph_to_text(g), encoding="utf-8")


def read_graph(path) -> Graph:
    """Parse the graph text format, validating counts, ranges, and u < v."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines:
        raise DataError(f"{path}: empty graph file")
    head = lines[0].split()
    if len(head) != 2:
        raise DataError(f"{path}: line 1: expected 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise DataError(f"{path}: line 1: expected integers 'n m', got {lines[0]!r}") from None
    edge_lines = lines[1:]
    if len(edge_lines) != m:
        raise DataError(f"{path}: expected {m} edge lines, found {len(edge_lines)}")
    edges = np.zeros((m, 2), dtype=np.int64)
    for i, line in enumerate(edge_lines):
        parts = line.split()
        if len(parts) != 2:
            raise DataError(f"{path}: line {i + 2}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise DataError(f"{path}: line {i + 2}: expected integers, got {line!r}") from None
        if u >= v:
            raise DataError(f"{path}: line {i + 2}: edges must satisfy u < v, got {u} {v}")
        edges[i] = (u, v)
    try:
        return Graph.from_edges(n, edges)
    except DataError as exc:
        raise DataError(f"{path}: {exc}") from exc


def format_float(x: float) -> str:
    """Serialize a float with 17 significant digits (round-trip exact)."""
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise TypeError(f"not a float: {x!r}")
    if not math.isfinite(x):
        raise ValueError(f"reports must not contain non-finite numbers, got {x!r}")
    s = format(float(x), ".17g")
    if not any(ch in s for ch in ".eE"):
        s += ".0"
    return s


def _encode(obj, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, np.bool_):
        out.append("true" if obj else "false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise TypeError(f"JSON keys must be strings, got {key!r}")
            out.append(f"{pad}  {json.dumps(key)}: ")
            _encode(value, indent + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        out.append("[\n")
        for i, value in enumerate(items):
            out.append(pad + "  ")
            _encode(value, indent + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}: {obj!r}")


def dumps_report(obj) -> str:
    """Deterministic JSON text: insertion-ordered keys, 2-space indent,
    floats at 17 significant digits, trailing newline."""
    out: list[str] = []
    _encode(obj, 0, out)
    return "".join(out) + "\n"
