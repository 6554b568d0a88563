"""Distance measures between normalized histogram descriptors."""

from __future__ import annotations

from enum import Enum

import numpy as np


class DistanceKind(str, Enum):
    EUCLIDEAN = "euclidean"
    COSINE = "cosine"
    L1 = "l1"
    D1 = "d1"
    CHI_SQUARE = "chisq"


DEFAULT_DISTANCE = DistanceKind.CHI_SQUARE


def distance(q: np.ndarray, t: np.ndarray, kind: DistanceKind = DEFAULT_DISTANCE) -> float:
    """Distance between two nonnegative descriptor vectors of equal length.

    Chi-square and D1 terms with a zero denominator contribute 0: two empty
    histogram bins carry no evidence either way.
    """
    q = np.asarray(q, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if q.shape != t.shape or q.ndim != 1:
        raise ValueError(f"descriptors must be 1-D and equal length, got {q.shape} vs {t.shape}")

    kind = DistanceKind(kind)
    if kind is DistanceKind.EUCLIDEAN:
        diff = q - t
        return float(np.sqrt(np.dot(diff, diff)))
    if kind is DistanceKind.COSINE:
        nq = float(np.linalg.norm(q))
        nt = float(np.linalg.norm(t))
        if nq == 0.0 or nt == 0.0:
            raise ValueError("cosine distance is undefined for a zero vector")
        # clamp guards the ~1e-16 negative values float rounding can produce
        return max(0.0, 1.0 - float(np.dot(q, t)) / (nq * nt))
    if kind is DistanceKind.L1:
        return float(np.abs(q - t).sum())
    if kind is DistanceKind.D1:
        return float((np.abs(q - t) / (1.0 + q + t)).sum())
    # chi-square
    denom = q + t
    num = (q - t) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        terms = np.where(denom > 0.0, num / denom, 0.0)
    return float(terms.sum())


def distance_matrix(
    queries: np.ndarray, gallery: np.ndarray, kind: DistanceKind = DEFAULT_DISTANCE
) -> np.ndarray:
    """All pairwise distances, shape (len(queries), len(gallery)).

    Row i column j equals distance(queries[i], gallery[j], kind); each entry
    depends only on its own pair, so gallery order never changes the values.
    """
    queries = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    gallery = np.atleast_2d(np.asarray(gallery, dtype=np.float64))
    if queries.shape[1] != gallery.shape[1]:
        raise ValueError(
            f"descriptor dimensions differ: {queries.shape[1]} vs {gallery.shape[1]}"
        )

    kind = DistanceKind(kind)
    out = np.empty((queries.shape[0], gallery.shape[0]), dtype=np.float64)
    if kind is DistanceKind.COSINE:
        nq = np.linalg.norm(queries, axis=1)
        nt = np.linalg.norm(gallery, axis=1)
        if np.any(nq == 0.0) or np.any(nt == 0.0):
            raise ValueError("cosine distance is undefined for a zero vector")
        sims = (queries @ gallery.T) / np.outer(nq, nt)
        np.maximum(1.0 - sims, 0.0, out=out)
        return out

    # one query row at a time keeps peak memory at O(gallery size * dimension)
    for i in range(queries.shape[0]):
        qi = queries[i]
        if kind is DistanceKind.EUCLIDEAN:
            diff = gallery - qi
            out[i] = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        elif kind is DistanceKind.L1:
            out[i] = np.abs(gallery - qi).sum(axis=1)
        elif kind is DistanceKind.D1:
            out[i] = (np.abs(gallery - qi) / (1.0 + qi + gallery)).sum(axis=1)
        else:
            denom = qi + gallery
            num = (qi - gallery) ** 2
            with np.errstate(invalid="ignore", divide="ignore"):
                terms = np.where(denom > 0.0, num / denom, 0.0)
            out[i] = terms.sum(axis=1)
    return out
