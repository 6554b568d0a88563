"""Feature-store container and its binary file format.

Format v1, all integers little-endian:

    magic  b"LDFV"
    u16    version (= 1)
    u32    descriptor name length, then that many UTF-8 bytes
    u8 x5  directions, scale_min, scale_max, bit_depth, sampling code
           (LBP stores map to neighbors, radius, radius, 8, sampling code)
    u32    record count
    u32    descriptor dimension
    per record:
        u32    label index
        u32    path length, then that many UTF-8 bytes
        f64 x dimension  descriptor values

Vectors are stored at full float64 precision so a save/load round trip is
bit exact.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .descriptor import LdrpParams
from .errors import (
    StoreDimensionError,
    StoreError,
    StoreMagicError,
    StoreTruncatedError,
    StoreVersionError,
)
from .evaluation import LabeledStore
from .image import SamplingMode
from .lbp import LbpParams

MAGIC = b"LDFV"
VERSION = 1


@dataclass(frozen=True)
class FeatureStore:
    """Labeled descriptor vectors plus the parameters that produced them."""

    descriptor: str
    params: LdrpParams | LbpParams
    labels: np.ndarray
    paths: tuple[str, ...]
    vectors: np.ndarray

    def __post_init__(self) -> None:
        labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        vectors = np.ascontiguousarray(self.vectors, dtype=np.float64)
        if vectors.ndim != 2:
            raise ValueError(f"vectors must be 2-D, got shape {vectors.shape}")
        count = vectors.shape[0]
        if labels.shape != (count,) or len(self.paths) != count:
            raise ValueError(
                f"inconsistent record counts: {labels.shape[0]} labels, "
                f"{len(self.paths)} paths, {count} vectors"
            )
        if vectors.shape[1] != self.params.dimension:
            raise ValueError(
                f"vector length {vectors.shape[1]} does not match descriptor dimension "
                f"{self.params.dimension}"
            )
        expected = {"ldrp": LdrpParams, "lbp": LbpParams}.get(self.descriptor)
        if expected is None or not isinstance(self.params, expected):
            raise ValueError(
                f"descriptor {self.descriptor!r} does not match params {type(self.params).__name__}"
            )
        labels.setflags(write=False)
        vectors.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "paths", tuple(self.paths))

    def __len__(self) -> int:
        return self.vectors.shape[0]

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def labeled(self) -> LabeledStore:
        return LabeledStore(self.labels, self.vectors, self.paths)


def _header_fields(store: FeatureStore) -> tuple[int, int, int, int, int]:
    p = store.params
    if isinstance(p, LdrpParams):
        return p.directions, p.scale_min, p.scale_max, p.bit_depth, p.sampling.wire_code
    return p.neighbors, p.radius, p.radius, 8, p.sampling.wire_code


def _params_from_header(
    descriptor: str, fields: tuple[int, int, int, int, int]
) -> LdrpParams | LbpParams:
    n, m1, m2, depth, mode_code = fields
    try:
        mode = SamplingMode.from_wire_code(mode_code)
        if descriptor == "ldrp":
            return LdrpParams(n, m1, m2, depth, mode)
        if descriptor == "lbp":
            if m1 != m2:
                raise ValueError(f"lbp header has scale_min {m1} != scale_max {m2}")
            return LbpParams(n, m1, mode)
    except ValueError as exc:
        raise StoreError(f"invalid stored parameters: {exc}") from exc
    raise StoreError(f"unknown descriptor {descriptor!r} in store header")


def save_store(store: FeatureStore, path: str | Path) -> None:
    """Write the store in format v1; load_store(save_store(x)) == x exactly."""
    fields = _header_fields(store)
    if any(not 0 <= f <= 0xFF for f in fields):
        raise ValueError(f"parameter fields {fields} do not fit the u8 header slots")
    name = store.descriptor.encode("utf-8")
    parts = [
        MAGIC,
        struct.pack("<H", VERSION),
        struct.pack("<I", len(name)),
        name,
        struct.pack("<5B", *fields),
        struct.pack("<I", len(store)),
        struct.pack("<I", store.dimension),
    ]
    for label, rel_path, vector in zip(store.labels, store.paths, store.vectors):
        if not 0 <= label <= 0xFFFFFFFF:
            raise ValueError(f"label index {label} cannot be stored as u32")
        encoded = rel_path.encode("utf-8")
        parts.append(struct.pack("<I", int(label)))
        parts.append(struct.pack("<I", len(encoded)))
        parts.append(encoded)
        parts.append(vector.astype("<f8", copy=False).tobytes())
    Path(path).write_bytes(b"".join(parts))


class _Reader:
    def __init__(self, data: bytes, source: str):
        self.data = data
        self.pos = 0
        self.source = source

    def take(self, count: int, what: str) -> bytes:
        end = self.pos + count
        if end > len(self.data):
            raise StoreTruncatedError(
                f"{self.source}: truncated while reading {what} "
                f"(needed {count} bytes at offset {self.pos})"
            )
        chunk = self.data[self.pos : end]
        self.pos = end
        return chunk

    def u16(self, what: str) -> int:
        return struct.unpack("<H", self.take(2, what))[0]

    def u32(self, what: str) -> int:
        return struct.unpack("<I", self.take(4, what))[0]

    def string(self, what: str) -> str:
        length = self.u32(f"{what} length")
        return self.take(length, what).decode("utf-8")


def load_store(path: str | Path) -> FeatureStore:
    """Read a store file, raising a distinct error per corruption kind."""
    path = Path(path)
    reader = _Reader(path.read_bytes(), str(path))

    magic = reader.take(4, "magic")
    if magic != MAGIC:
        raise StoreMagicError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    version = reader.u16("version")
    if version != VERSION:
        raise StoreVersionError(f"{path}: unsupported version {version}, expected {VERSION}")

    descriptor = reader.string("descriptor name")
    fields = struct.unpack("<5B", reader.take(5, "parameter block"))
    params = _params_from_header(descriptor, fields)
    count = reader.u32("record count")
    dimension = reader.u32("dimension")
    if dimension != params.dimension:
        raise StoreDimensionError(
            f"{path}: header dimension {dimension} does not match descriptor dimension "
            f"{params.dimension}"
        )
    # lower bound on the record bytes still owed; rejects absurd counts before
    # allocating and catches short files with a clear message
    remaining = len(reader.data) - reader.pos
    if count * (4 + 4 + 8 * dimension) > remaining:
        raise StoreTruncatedError(
            f"{path}: header declares {count} records of dimension {dimension}, "
            f"but only {remaining} bytes remain"
        )

    labels = np.empty(count, dtype=np.int64)
    paths: list[str] = []
    vectors = np.empty((count, dimension), dtype=np.float64)
    for i in range(count):
        labels[i] = reader.u32(f"record {i} label")
        paths.append(reader.string(f"record {i} path"))
        raw = reader.take(8 * dimension, f"record {i} vector")
        vectors[i] = np.frombuffer(raw, dtype="<f8")
    if reader.pos != len(reader.data):
        raise StoreTruncatedError(
            f"{path}: {len(reader.data) - reader.pos} trailing bytes after the last record"
        )
    return FeatureStore(descriptor, params, labels, tuple(paths), vectors)


def export_csv(store: FeatureStore, path: str | Path) -> None:
    """Write records as CSV: header row, then label,path,v0..v{d-1}."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", "path"] + [f"v{i}" for i in range(store.dimension)])
        for label, rel_path, vector in zip(store.labels, store.paths, store.vectors):
            writer.writerow([int(label), rel_path] + [repr(float(v)) for v in vector])
