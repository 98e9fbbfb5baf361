"""
Readers and writers for the point-cloud formats the lab consumes.

IDX (MNIST distribution format, optionally gzipped), labeled CSV, and the
lab's own binary cache for fast reloads.
"""
import csv
import gzip
import struct
from pathlib import Path
from typing import Tuple

import numpy as np

from custom_tools.logger import custom_logger

from .exceptions import CacheFormatError, CsvFormatError, DatasetError, IdxFormatError
from .types import LabelVector, as_data_matrix

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801

CACHE_MAGIC = b"LLBL"
CACHE_VERSION = 1
_CACHE_HEADER = struct.Struct("<4sIQQ")


def _read_bytes(path) -> bytes:
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"{path}: file not found")
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rb") as stream:
        return stream.read()


def _parse_idx(path, expected_magic: int) -> np.ndarray:
    raw = _read_bytes(path)
    if len(raw) < 4:
        raise IdxFormatError(path, len(raw), "truncated file: missing magic number")

    (magic,) = struct.unpack_from(">I", raw, 0)
    if magic != expected_magic:
        raise IdxFormatError(path, 0, f"bad magic 0x{magic:08x}, expected 0x{expected_magic:08x}")

    ndim = magic & 0xFF
    header_end = 4 + 4 * ndim
    if len(raw) < header_end:
        raise IdxFormatError(path, len(raw), f"truncated file: header needs {header_end} bytes")
    dims = struct.unpack_from(f">{ndim}I", raw, 4)

    payload = int(np.prod(dims, dtype=np.int64))
    if len(raw) - header_end < payload:
        raise IdxFormatError(
            path, len(raw), f"truncated file: expected {payload} data bytes after offset {header_end}"
        )
    values = np.frombuffer(raw, dtype=np.uint8, count=payload, offset=header_end)
    return values.reshape(dims)


def load_idx(images_path, labels_path) -> Tuple[np.ndarray, LabelVector]:
    """
    Load an IDX image/label pair.

    Pixels are divided by 255 so every coordinate lies in [0, 1]; each image
    is flattened row-major into one feature vector.
    """
    images = _parse_idx(images_path, IDX_IMAGES_MAGIC)
    labels = _parse_idx(labels_path, IDX_LABELS_MAGIC)

    if images.shape[0] != labels.shape[0]:
        raise IdxFormatError(
            labels_path, 4, f"count mismatch: {images.shape[0]} images vs {labels.shape[0]} labels"
        )

    features = images.reshape(images.shape[0], -1).astype(np.float64) / 255.0
    n_classes = max(int(labels.max()) + 1, 2) if labels.size else 2
    custom_logger(f"Loaded {features.shape[0]} IDX images of dimension {features.shape[1]} from {images_path}")
    return as_data_matrix(features, source=str(images_path)), LabelVector(labels.astype(np.int64), n_classes)


def load_csv(path, label_column: str) -> Tuple[np.ndarray, LabelVector]:
    """
    Load a headered CSV with one label column and numeric feature columns.

    Classes are the distinct label strings sorted lexicographically and
    numbered 0..C-1, so the encoding does not depend on row order.
    """
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"{path}: file not found")

    with open(path, newline="", encoding="utf-8") as stream:
        reader = csv.reader(stream)
        header = next(reader, None)
        if not header:
            raise CsvFormatError(path, 0, "empty file")
        header = [name.strip() for name in header]
        if label_column not in header:
            raise CsvFormatError(path, 0, f"missing label column '{label_column}'")

        label_at = header.index(label_column)
        feature_at = [i for i in range(len(header)) if i != label_at]
        rows, raw_labels = [], []
        for row_number, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != len(header):
                raise CsvFormatError(path, row_number, f"expected {len(header)} cells, found {len(row)}")
            try:
                values = [float(row[i]) for i in feature_at]
            except ValueError:
                column = next(header[i] for i in feature_at if not _is_number(row[i]))
                raise CsvFormatError(path, row_number, f"non-numeric value in column '{column}'") from None
            if not all(np.isfinite(values)):
                raise CsvFormatError(path, row_number, "NaN or infinite feature value")
            rows.append(values)
            raw_labels.append(row[label_at].strip())

    if not rows:
        raise CsvFormatError(path, 1, "no data rows")
    if not feature_at:
        raise CsvFormatError(path, 0, "no feature columns")

    class_names = tuple(sorted(set(raw_labels)))
    lookup = {name: index for index, name in enumerate(class_names)}
    indices = np.array([lookup[name] for name in raw_labels], dtype=np.int64)
    return as_data_matrix(rows, source=str(path)), LabelVector(indices, len(class_names), class_names)


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def write_csv(path, features, labels, label_column: str = "label", class_names=()):
    """Write features plus a label column; the inverse of load_csv."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    features = np.asarray(features)
    with open(path, "w", newline="", encoding="utf-8") as stream:
        writer = csv.writer(stream)
        writer.writerow([f"x{j}" for j in range(features.shape[1])] + [label_column])
        for row, label in zip(features, np.asarray(labels)):
            name = class_names[label] if class_names else str(int(label))
            writer.writerow([repr(float(v)) for v in row] + [name])


def write_cache(path, features) -> None:
    """Write `LLBL | version u32 | n u64 | d u64 | f64 payload`, little-endian."""
    matrix = as_data_matrix(features)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as stream:
        stream.write(_CACHE_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, matrix.shape[0], matrix.shape[1]))
        stream.write(matrix.astype("<f8").tobytes(order="C"))


def read_cache(path) -> np.ndarray:
    raw = _read_bytes(path)
    if len(raw) < _CACHE_HEADER.size:
        raise CacheFormatError(path, len(raw), "truncated header")
    magic, version, n, d = _CACHE_HEADER.unpack_from(raw, 0)
    if magic != CACHE_MAGIC:
        raise CacheFormatError(path, 0, f"bad magic {magic!r}")
    if version != CACHE_VERSION:
        raise CacheFormatError(path, 4, f"unsupported version {version}")
    expected = n * d * 8
    if len(raw) - _CACHE_HEADER.size != expected:
        raise CacheFormatError(path, len(raw), f"payload has {len(raw) - _CACHE_HEADER.size} bytes, expected {expected}")
    values = np.frombuffer(raw, dtype="<f8", count=n * d, offset=_CACHE_HEADER.size).reshape(n, d)
    return as_data_matrix(values, source=str(path))
