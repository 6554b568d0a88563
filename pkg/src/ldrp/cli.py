"""Command-line front end: extract, evaluate, recognize, compare.

Exit codes: 0 success, 2 configuration/user error, 3 I/O error, 4 internal
error. All data files written by these commands are byte-identical across
reruns and worker counts; only the timing line on stdout varies.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from .corpus import ingest, extract_all
from .descriptor import LdrpParams
from .distances import DistanceKind
from .errors import (
    ConfigError,
    StoreError,
    StoreMagicError,
    StoreTruncatedError,
    StoreVersionError,
)
from .evaluation import (
    LabeledStore,
    cmc,
    rank1_accuracy,
    retrieval_curves,
    roc,
    write_metrics_csv,
    write_metrics_json,
    write_series_csv,
)
from .image import SamplingMode
from .lbp import LbpParams
from .store import FeatureStore, load_store, save_store

_DISTANCE_METAVAR = "{" + ",".join(k.value for k in DistanceKind) + "}"
_SAMPLING_METAVAR = "{" + ",".join(m.value for m in SamplingMode) + "}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ldrp",
        description="Directional relation pattern descriptors and retrieval evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    extract = sub.add_parser("extract", help="extract descriptors from a corpus into a store file")
    extract.add_argument("--root", required=True, help="corpus root (one subdirectory per subject)")
    extract.add_argument("--out", required=True, help="output store file")
    _add_descriptor_flags(extract)
    extract.add_argument("--workers", type=int, default=1, help="parallel extraction workers")
    extract.set_defaults(func=cmd_extract)

    evaluate = sub.add_parser("evaluate", help="retrieval metrics over a store file")
    evaluate.add_argument("--store", required=True, help="store file from `extract`")
    _add_eval_flags(evaluate)
    evaluate.add_argument("--out", help="write the metric table to this file")
    evaluate.set_defaults(func=cmd_evaluate)

    recognize = sub.add_parser(
        "recognize", help="identification (CMC), verification (ROC), or gallery/probe accuracy"
    )
    recognize.add_argument("--store", required=True, help="store file from `extract`")
    recognize.add_argument("--distance", type=DistanceKind, default=DistanceKind.CHI_SQUARE,
                           choices=list(DistanceKind), metavar=_DISTANCE_METAVAR)
    recognize.add_argument("--max-rank", type=int, default=None, help="last CMC rank to report")
    recognize.add_argument("--gallery-list", help="file with one store image path per line")
    recognize.add_argument("--probe-list", help="file with one store image path per line")
    recognize.add_argument("--out", help="output prefix (writes <out>.cmc.csv and <out>.roc.csv)")
    recognize.add_argument("--format", choices=["csv", "json"], default="csv")
    recognize.set_defaults(func=cmd_recognize)

    compare = sub.add_parser("compare", help="side-by-side retrieval metrics for ldrp and lbp")
    compare.add_argument("--root", required=True, help="corpus root (one subdirectory per subject)")
    _add_descriptor_flags(compare, with_choice=False)
    _add_eval_flags(compare)
    compare.add_argument("--workers", type=int, default=1)
    compare.add_argument("--out", help="write the combined metric table to this file")
    compare.set_defaults(func=cmd_compare)

    return parser


def _add_descriptor_flags(parser: argparse.ArgumentParser, with_choice: bool = True) -> None:
    if with_choice:
        parser.add_argument("--descriptor", choices=["ldrp", "lbp"], default="ldrp")
    parser.add_argument("--directions", type=int, default=8, help="rays per pixel (ldrp) / neighbors (lbp)")
    parser.add_argument("--m1", type=int, default=3, help="smallest ray depth (ldrp only)")
    parser.add_argument("--m2", type=int, default=6, help="largest ray depth (ldrp only)")
    parser.add_argument(
        "--sampling",
        type=SamplingMode,
        choices=list(SamplingMode),
        default=SamplingMode.ROUND,
        metavar=_SAMPLING_METAVAR,
        help="how off-grid ray samples are resolved",
    )


def _add_eval_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", default="5", help="comma-separated retrieval window sizes")
    parser.add_argument("--distance", type=DistanceKind, default=DistanceKind.CHI_SQUARE,
                        choices=list(DistanceKind), metavar=_DISTANCE_METAVAR)
    parser.add_argument("--format", choices=["csv", "json"], default="csv")


def _parse_n_list(raw: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in raw.split(","))
    except ValueError as exc:
        raise ConfigError(f"--n expects comma-separated integers, got {raw!r}") from exc
    if not values or any(v < 1 for v in values):
        raise ConfigError(f"--n values must be >= 1, got {raw!r}")
    return values


def _build_params(args: argparse.Namespace) -> LdrpParams | LbpParams:
    descriptor = getattr(args, "descriptor", "ldrp")
    try:
        if descriptor == "lbp":
            return LbpParams(neighbors=args.directions, sampling=args.sampling)
        return LdrpParams(
            directions=args.directions,
            scale_min=args.m1,
            scale_max=args.m2,
            sampling=args.sampling,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_extract(args: argparse.Namespace) -> int:
    params = _build_params(args)
    started = time.perf_counter()
    manifest, images = ingest(args.root)
    store = extract_all(manifest, images, params, workers=args.workers)
    save_store(store, args.out)
    elapsed = time.perf_counter() - started
    for skip in manifest.skipped:
        print(f"skipped {skip.path}: {skip.reason}", file=sys.stderr)
    print(
        f"extracted {len(store)} images ({len(manifest.skipped)} skipped), "
        f"dimension {store.dimension}, {elapsed:.2f}s -> {args.out}"
    )
    return 0


def _print_metric_table(curves) -> None:
    print(f"{'n':>4}  {'arp':>10}  {'arr':>10}  {'f_score':>10}  {'anmrr':>10}")
    for row in curves.rows():
        print(
            f"{row['n']:>4}  {row['arp']:>10.6f}  {row['arr']:>10.6f}  "
            f"{row['f_score']:>10.6f}  {row['anmrr']:>10.6f}"
        )


def cmd_evaluate(args: argparse.Namespace) -> int:
    store = load_store(args.store)
    n_values = _parse_n_list(args.n)
    curves = retrieval_curves(store.labeled(), args.distance, n_values)
    _print_metric_table(curves)
    if args.out:
        if args.format == "json":
            write_metrics_json(
                curves, args.out, descriptor=store.descriptor, distance=args.distance.value
            )
        else:
            write_metrics_csv(curves, args.out)
    return 0


def _read_path_list(path: str, store: FeatureStore, other: set[str] | None = None) -> list[int]:
    index_of = {p: i for i, p in enumerate(store.paths)}
    chosen: list[int] = []
    seen: set[str] = set()
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        entry = line.strip()
        if not entry:
            continue
        if entry not in index_of:
            raise ConfigError(f"{path}:{lineno}: unknown image path {entry!r}")
        if entry in seen:
            raise ConfigError(f"{path}:{lineno}: image path {entry!r} listed twice")
        if other is not None and entry in other:
            raise ConfigError(
                f"{path}:{lineno}: image path {entry!r} appears in both gallery and probe lists"
            )
        seen.add(entry)
        chosen.append(index_of[entry])
    if not chosen:
        raise ConfigError(f"{path}: no image paths found")
    return chosen


def _subset(store: FeatureStore, indices: list[int]) -> LabeledStore:
    idx = np.asarray(indices, dtype=np.intp)
    return LabeledStore(
        store.labels[idx], store.vectors[idx], tuple(store.paths[i] for i in indices)
    )


def cmd_recognize(args: argparse.Namespace) -> int:
    store = load_store(args.store)
    if (args.gallery_list is None) != (args.probe_list is None):
        raise ConfigError("--gallery-list and --probe-list must be supplied together")

    if args.gallery_list is not None:
        gallery_idx = _read_path_list(args.gallery_list, store)
        gallery_paths = {store.paths[i] for i in gallery_idx}
        probe_idx = _read_path_list(args.probe_list, store, other=gallery_paths)
        accuracy = rank1_accuracy(_subset(store, gallery_idx), _subset(store, probe_idx),
                                  args.distance)
        print(f"rank-1 accuracy: {accuracy:.6f}")
        if args.out:
            if args.format == "json":
                Path(args.out).write_text(json.dumps({"rank1_accuracy": accuracy}) + "\n")
            else:
                Path(args.out).write_text(f"rank1_accuracy\n{accuracy!r}\n")
        return 0

    labeled = store.labeled()
    rates = cmc(labeled, args.distance, args.max_rank)
    curve = roc(labeled, args.distance)
    print(f"cmc rank-1: {rates[0]:.6f} (ranks reported: {len(rates)})")
    print(f"roc thresholds: {len(curve.thresholds)} (step 0.001)")
    if args.out:
        ranks = np.arange(1, len(rates) + 1)
        if args.format == "json":
            Path(f"{args.out}.cmc.json").write_text(
                json.dumps({"rank": ranks.tolist(), "rate": rates.tolist()}) + "\n"
            )
            Path(f"{args.out}.roc.json").write_text(
                json.dumps(
                    {
                        "threshold": curve.thresholds.tolist(),
                        "tpr": curve.tpr.tolist(),
                        "fpr": curve.fpr.tolist(),
                    }
                )
                + "\n"
            )
        else:
            write_series_csv(f"{args.out}.cmc.csv", ("rank", "rate"), ranks, rates)
            write_series_csv(f"{args.out}.roc.csv", ("fpr", "tpr"), curve.fpr, curve.tpr)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    n_values = _parse_n_list(args.n)
    try:
        ldrp_params = LdrpParams(
            directions=args.directions, scale_min=args.m1, scale_max=args.m2,
            sampling=args.sampling,
        )
        lbp_params = LbpParams(sampling=args.sampling)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    manifest, images = ingest(args.root)
    sections = []
    for params in (ldrp_params, lbp_params):
        store = extract_all(manifest, images, params, workers=args.workers)
        curves = retrieval_curves(store.labeled(), args.distance, n_values)
        sections.append((store.descriptor, curves))
        print(f"descriptor: {store.descriptor}")
        _print_metric_table(curves)
        print()

    if args.out:
        if args.format == "json":
            payload = {
                "distance": args.distance.value,
                "descriptors": {name: curves.rows() for name, curves in sections},
            }
            Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
        else:
            with open(args.out, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["descriptor", "n", "arp", "arr", "f_score", "anmrr"])
                for name, curves in sections:
                    for row in curves.rows():
                        writer.writerow(
                            [name, row["n"], repr(row["arp"]), repr(row["arr"]),
                             repr(row["f_score"]), repr(row["anmrr"])]
                        )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (StoreMagicError, StoreVersionError, StoreTruncatedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except StoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - invariant violations
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 4


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
