"""Directional relation pattern descriptors and a retrieval evaluation harness."""

from .descriptor import (
    LdrpParams,
    MultiScaleDescriptor,
    direction_code,
    direction_code_grid,
    directional_bits,
    ldrp_at,
    ldrp_code_grid,
    multiscale_descriptor,
    pair_count,
    pair_index,
    relation_pattern,
    scale_histogram,
    transform_center,
)
from .distances import DEFAULT_DISTANCE, DistanceKind, distance, distance_matrix
from .errors import (
    ConfigError,
    StoreDimensionError,
    StoreError,
    StoreMagicError,
    StoreTruncatedError,
    StoreVersionError,
)
from .evaluation import (
    LabeledStore,
    MetricCurves,
    RocCurve,
    anmrr,
    cmc,
    rank1_accuracy,
    rank_gallery,
    retrieval_curves,
    roc,
)
from .corpus import CorpusManifest, ManifestEntry, extract_all, ingest
from .image import (
    GrayImage,
    SamplingMode,
    load_image,
    neighbor_offset,
    read_pgm,
    resize,
    sample_neighbor,
    to_grayscale,
    write_pgm,
)
from .lbp import LbpParams, lbp_code, lbp_histogram
from .store import FeatureStore, export_csv, load_store, save_store

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "CorpusManifest",
    "DEFAULT_DISTANCE",
    "DistanceKind",
    "FeatureStore",
    "GrayImage",
    "LabeledStore",
    "LbpParams",
    "LdrpParams",
    "ManifestEntry",
    "MetricCurves",
    "MultiScaleDescriptor",
    "RocCurve",
    "SamplingMode",
    "StoreDimensionError",
    "StoreError",
    "StoreMagicError",
    "StoreTruncatedError",
    "StoreVersionError",
    "anmrr",
    "cmc",
    "direction_code",
    "direction_code_grid",
    "directional_bits",
    "distance",
    "distance_matrix",
    "export_csv",
    "extract_all",
    "ingest",
    "lbp_code",
    "lbp_histogram",
    "ldrp_at",
    "ldrp_code_grid",
    "load_image",
    "load_store",
    "multiscale_descriptor",
    "neighbor_offset",
    "pair_count",
    "pair_index",
    "rank1_accuracy",
    "rank_gallery",
    "read_pgm",
    "relation_pattern",
    "resize",
    "retrieval_curves",
    "roc",
    "sample_neighbor",
    "save_store",
    "scale_histogram",
    "to_grayscale",
    "transform_center",
    "write_pgm",
]
