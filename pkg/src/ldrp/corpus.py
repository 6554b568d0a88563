"""Folder-per-subject corpus ingestion and batch descriptor extraction."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .descriptor import LdrpParams, multiscale_descriptor
from .errors import ConfigError
from .image import IMAGE_SUFFIXES, GrayImage, load_image, resize
from .lbp import LbpParams, lbp_histogram
from .store import FeatureStore

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ManifestEntry:
    subject: str
    label: int
    path: str  # POSIX-style path relative to the corpus root


@dataclass(frozen=True)
class SkippedFile:
    path: str
    reason: str


@dataclass(frozen=True)
class CorpusManifest:
    root: str
    subjects: tuple[str, ...]
    entries: tuple[ManifestEntry, ...]
    skipped: tuple[SkippedFile, ...]


def ingest(
    root: str | Path, resize_to: tuple[int, int] | None = (64, 64)
) -> tuple[CorpusManifest, list[GrayImage]]:
    """Load a corpus laid out as root/<subject>/<image files>.

    Subjects and files are visited in lexicographic order, so the manifest is
    a pure function of the directory contents. Labels are dense 0-based
    indices over subjects that contributed at least one readable image.
    Unreadable files are skipped with a warning and recorded in the manifest;
    duplicates reached through symlinks are dropped by canonical path.
    """
    root = Path(root)
    if not root.is_dir():
        raise ConfigError(f"corpus root {root} is not a directory")
    subject_dirs = sorted((d for d in root.iterdir() if d.is_dir()), key=lambda d: d.name)
    if not subject_dirs:
        raise ConfigError(f"corpus root {root} contains no subject directories")
    if resize_to is not None and (resize_to[0] < 1 or resize_to[1] < 1):
        raise ConfigError(f"resize target must be positive, got {resize_to}")

    entries: list[ManifestEntry] = []
    images: list[GrayImage] = []
    skipped: list[SkippedFile] = []
    subjects: list[str] = []
    seen: set[Path] = set()

    for subject_dir in subject_dirs:
        files = sorted(
            (
                f
                for f in subject_dir.iterdir()
                if f.is_file() and f.suffix.lower() in IMAGE_SUFFIXES
            ),
            key=lambda f: f.name,
        )
        loaded_any = False
        for file in files:
            canonical = file.resolve()
            if canonical in seen:
                continue
            seen.add(canonical)
            rel = f"{subject_dir.name}/{file.name}"
            try:
                img = load_image(file)
            except (OSError, ValueError) as exc:
                log.warning("skipping %s: %s", rel, exc)
                skipped.append(SkippedFile(rel, str(exc)))
                continue
            if resize_to is not None:
                img = resize(img, resize_to[0], resize_to[1])
            if not loaded_any:
                subjects.append(subject_dir.name)
                loaded_any = True
            entries.append(ManifestEntry(subject_dir.name, len(subjects) - 1, rel))
            images.append(img)

    if not entries:
        raise ConfigError(f"corpus root {root} contains no readable images")
    manifest = CorpusManifest(str(root), tuple(subjects), tuple(entries), tuple(skipped))
    return manifest, images


def extract_all(
    manifest: CorpusManifest,
    images: list[GrayImage],
    params: LdrpParams | LbpParams,
    workers: int = 1,
) -> FeatureStore:
    """One descriptor per manifest entry, in manifest order regardless of workers."""
    if len(images) != len(manifest.entries):
        raise ValueError(
            f"manifest has {len(manifest.entries)} entries but {len(images)} images were supplied"
        )

    if isinstance(params, LdrpParams):
        descriptor = "ldrp"

        def extract_one(index: int) -> np.ndarray:
            entry = manifest.entries[index]
            try:
                return multiscale_descriptor(images[index], params).values
            except ValueError as exc:
                raise ValueError(f"{entry.path}: {exc}") from exc

    elif isinstance(params, LbpParams):
        descriptor = "lbp"

        def extract_one(index: int) -> np.ndarray:
            entry = manifest.entries[index]
            try:
                return lbp_histogram(images[index], params)
            except ValueError as exc:
                raise ValueError(f"{entry.path}: {exc}") from exc

    else:
        raise TypeError(f"unsupported params type {type(params).__name__}")

    indices = range(len(manifest.entries))
    if workers > 1 and len(images) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vectors = list(pool.map(extract_one, indices))
    else:
        vectors = [extract_one(i) for i in indices]

    stacked = (
        np.stack(vectors) if vectors else np.zeros((0, params.dimension), dtype=np.float64)
    )
    labels = np.array([e.label for e in manifest.entries], dtype=np.int64)
    paths = tuple(e.path for e in manifest.entries)
    return FeatureStore(descriptor, params, labels, paths, stacked)
