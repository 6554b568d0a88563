"""Retrieval and recognition metrics over labeled descriptor collections.

Retrieval follows the query-in-gallery protocol: every image is queried
against the full store, and the self match (distance 0, ranked first by the
stable tie-break) counts as relevant. Precision and recall are averaged per
category first, then over categories.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .distances import DEFAULT_DISTANCE, DistanceKind, distance_matrix
from .errors import ConfigError

RANK_PENALTY = 1.25  # rank assigned to relevant items missing from the window, times the window
ROC_STEP = 0.001


@dataclass(frozen=True)
class LabeledStore:
    """Descriptor vectors with integer subject labels, in ingestion order."""

    labels: np.ndarray
    vectors: np.ndarray
    paths: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        vectors = np.ascontiguousarray(self.vectors, dtype=np.float64)
        if vectors.ndim != 2:
            raise ValueError(f"vectors must be 2-D, got shape {vectors.shape}")
        if labels.shape != (vectors.shape[0],):
            raise ValueError(
                f"got {labels.shape[0] if labels.ndim == 1 else labels.shape} labels "
                f"for {vectors.shape[0]} vectors"
            )
        if self.paths is not None and len(self.paths) != vectors.shape[0]:
            raise ValueError(f"got {len(self.paths)} paths for {vectors.shape[0]} vectors")
        labels.setflags(write=False)
        vectors.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "vectors", vectors)

    def __len__(self) -> int:
        return self.vectors.shape[0]

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def category_size_per_record(self) -> np.ndarray:
        """Size of each record's own category, aligned with record order."""
        _, inverse, counts = np.unique(self.labels, return_inverse=True, return_counts=True)
        return counts[inverse]


@dataclass(frozen=True)
class MetricCurves:
    """ARP / ARR / F-score / ANMRR evaluated at each requested window size n."""

    n_values: tuple[int, ...]
    arp: np.ndarray
    arr: np.ndarray
    f_score: np.ndarray
    anmrr: np.ndarray

    def rows(self) -> list[dict[str, float | int]]:
        return [
            {
                "n": n,
                "arp": float(self.arp[i]),
                "arr": float(self.arr[i]),
                "f_score": float(self.f_score[i]),
                "anmrr": float(self.anmrr[i]),
            }
            for i, n in enumerate(self.n_values)
        ]


@dataclass(frozen=True)
class RocCurve:
    """Verification rates swept over thresholds from the lowest to highest score."""

    thresholds: np.ndarray
    tpr: np.ndarray
    fpr: np.ndarray


def rank_gallery(
    query: np.ndarray, store: LabeledStore, kind: DistanceKind = DEFAULT_DISTANCE
) -> list[tuple[int, float]]:
    """Store record indices sorted by ascending distance to the query.

    Ties keep ingestion order (stable sort), so results are deterministic.
    """
    if len(store) == 0:
        raise ValueError("store is empty")
    dists = distance_matrix(np.asarray(query, dtype=np.float64)[None, :], store.vectors, kind)[0]
    order = np.argsort(dists, kind="stable")
    return [(int(i), float(dists[i])) for i in order]


def _ranked_relevance(store: LabeledStore, kind: DistanceKind) -> np.ndarray:
    """Boolean matrix: row q lists same-category flags of the store sorted by distance to q."""
    dists = distance_matrix(store.vectors, store.vectors, kind)
    order = np.argsort(dists, axis=1, kind="stable")
    return store.labels[order] == store.labels[:, None]


def _per_category_mean(values: np.ndarray, labels: np.ndarray) -> float:
    """Mean of per-category means (categories weigh equally regardless of size)."""
    total = 0.0
    uniques = np.unique(labels)
    for label in uniques:
        total += float(values[labels == label].mean())
    return total / len(uniques)


def retrieval_curves(
    store: LabeledStore,
    kind: DistanceKind = DEFAULT_DISTANCE,
    n_values: Sequence[int] = (5,),
) -> MetricCurves:
    """Query every image against the full store and aggregate ARP/ARR/F/ANMRR."""
    if len(store) == 0:
        raise ValueError("store is empty")
    if any(n < 1 for n in n_values):
        raise ValueError(f"retrieval window sizes must be >= 1, got {tuple(n_values)}")

    size = len(store)
    sorted_rel = _ranked_relevance(store, kind)
    cum_rel = np.cumsum(sorted_rel, axis=1, dtype=np.int64)
    category_sizes = store.category_size_per_record()

    arp = np.empty(len(n_values))
    arr = np.empty(len(n_values))
    f_score = np.empty(len(n_values))
    anmrr_vals = np.empty(len(n_values))
    for i, n in enumerate(n_values):
        hits = cum_rel[:, min(n, size) - 1].astype(np.float64)
        arp[i] = _per_category_mean(hits / n, store.labels)
        arr[i] = _per_category_mean(hits / category_sizes, store.labels)
        denom = arp[i] + arr[i]
        f_score[i] = 0.0 if denom == 0.0 else 2.0 * arp[i] * arr[i] / denom
        anmrr_vals[i] = _anmrr_from_relevance(sorted_rel, n)
    return MetricCurves(tuple(int(n) for n in n_values), arp, arr, f_score, anmrr_vals)


def anmrr(store: LabeledStore, kind: DistanceKind = DEFAULT_DISTANCE, n: int = 5) -> float:
    """Average normalized modified retrieval rank with window K = n (0 best, 1 worst)."""
    if len(store) == 0:
        raise ValueError("store is empty")
    if n < 1:
        raise ValueError(f"retrieval window must be >= 1, got {n}")
    return _anmrr_from_relevance(_ranked_relevance(store, kind), n)


def _anmrr_from_relevance(sorted_rel: np.ndarray, n: int) -> float:
    penalty = RANK_PENALTY * n
    total = 0.0
    for row in sorted_rel:
        positions = np.flatnonzero(row) + 1  # 1-based ranks of the relevant items
        ng = positions.shape[0]
        ranks = np.where(positions <= n, positions.astype(np.float64), penalty)
        avr = float(ranks.mean())
        mrr = avr - 0.5 - ng / 2.0
        denom = penalty - 0.5 - ng / 2.0
        nmrr = 0.0 if denom <= 0.0 else min(1.0, max(0.0, mrr / denom))
        total += nmrr
    return total / sorted_rel.shape[0]


def cmc(
    store: LabeledStore, kind: DistanceKind = DEFAULT_DISTANCE, max_rank: int | None = None
) -> np.ndarray:
    """Leave-one-out cumulative identification rates for ranks 1..max_rank.

    Each image in turn is the probe and every other image is the gallery; a
    probe's identification rank is the position of the first gallery record
    sharing its label.
    """
    size = len(store)
    if size == 0:
        raise ValueError("store is empty")
    sizes = store.category_size_per_record()
    if np.any(sizes < 2):
        bad = store.labels[np.argmax(sizes < 2)]
        raise ConfigError(
            f"category {bad} has a single image; leave-one-out identification needs >= 2"
        )
    gallery_size = size - 1
    if max_rank is None:
        max_rank = gallery_size
    if not 1 <= max_rank <= gallery_size:
        raise ValueError(f"max_rank must be in [1, {gallery_size}], got {max_rank}")

    dists = distance_matrix(store.vectors, store.vectors, kind)
    np.fill_diagonal(dists, np.inf)  # excludes the probe itself; stable sort puts it last
    order = np.argsort(dists, axis=1, kind="stable")
    sorted_rel = store.labels[order] == store.labels[:, None]
    ranks = np.argmax(sorted_rel[:, :gallery_size], axis=1) + 1

    rates = np.empty(max_rank)
    for r in range(1, max_rank + 1):
        rates[r - 1] = float(np.mean(ranks <= r))
    return rates


def roc(store: LabeledStore, kind: DistanceKind = DEFAULT_DISTANCE) -> RocCurve:
    """Verification ROC over all unordered image pairs.

    Same-subject pairs are genuine, cross-subject pairs impostor; thresholds
    sweep from the lowest to the highest observed score in steps of 0.001,
    with a final point at the highest score when the grid misses it.
    """
    size = len(store)
    if size < 2:
        raise ValueError("store must contain at least two records")
    if np.unique(store.labels).shape[0] < 2:
        raise ConfigError("verification needs at least two categories")

    dists = distance_matrix(store.vectors, store.vectors, kind)
    rows, cols = np.triu_indices(size, k=1)
    scores = dists[rows, cols]
    genuine = np.sort(scores[store.labels[rows] == store.labels[cols]])
    impostor = np.sort(scores[store.labels[rows] != store.labels[cols]])
    if genuine.size == 0:
        raise ConfigError("verification needs at least one same-category pair")

    low = float(min(genuine[0], impostor[0]))
    high = float(max(genuine[-1], impostor[-1]))
    steps = int(np.floor((high - low) / ROC_STEP)) + 1
    thresholds = low + ROC_STEP * np.arange(steps)
    if thresholds[-1] < high:
        thresholds = np.append(thresholds, high)

    tpr = np.searchsorted(genuine, thresholds, side="right") / genuine.size
    fpr = np.searchsorted(impostor, thresholds, side="right") / impostor.size
    return RocCurve(thresholds, tpr, fpr)


def rank1_accuracy(
    gallery: LabeledStore, probe: LabeledStore, kind: DistanceKind = DEFAULT_DISTANCE
) -> float:
    """Fraction of probes whose nearest gallery record shares their label."""
    if len(gallery) == 0 or len(probe) == 0:
        raise ValueError("gallery and probe must be nonempty")
    if gallery.dimension != probe.dimension:
        raise ValueError(
            f"descriptor dimensions differ: gallery {gallery.dimension}, probe {probe.dimension}"
        )
    dists = distance_matrix(probe.vectors, gallery.vectors, kind)
    nearest = np.argmin(dists, axis=1)  # first minimum wins, keeping ingestion order
    return float(np.mean(gallery.labels[nearest] == probe.labels))


# ---------------------------------------------------------------------------
# Table and series output.
# ---------------------------------------------------------------------------


def write_metrics_csv(curves: MetricCurves, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "arp", "arr", "f_score", "anmrr"])
        for row in curves.rows():
            writer.writerow(
                [row["n"], repr(row["arp"]), repr(row["arr"]), repr(row["f_score"]), repr(row["anmrr"])]
            )


def write_metrics_json(curves: MetricCurves, path: str | Path, **context: str) -> None:
    payload: dict = dict(context)
    payload["rows"] = curves.rows()
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def write_series_csv(path: str | Path, header: tuple[str, ...], *columns) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for values in zip(*columns):
            writer.writerow([_format_cell(v) for v in values])


def _format_cell(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))
