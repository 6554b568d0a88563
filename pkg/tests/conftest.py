"""Shared fixtures: deterministic synthetic corpora and the acceptance summary."""

from __future__ import annotations

import numpy as np
import pytest

from ldrp import GrayImage, write_pgm

# Synthetic retrieval corpus: per subject a random template, then mild pixel
# noise per image, so images of one subject stay close but never identical.
SUBJECTS = 5
IMAGES_PER_SUBJECT = 6
CORPUS_SIDE = 64


def make_corpus_arrays(
    subjects: int = SUBJECTS,
    images_per_subject: int = IMAGES_PER_SUBJECT,
    side: int = CORPUS_SIDE,
    seed: int = 20240,
) -> tuple[list[np.ndarray], np.ndarray]:
    rng = np.random.default_rng(seed)
    arrays: list[np.ndarray] = []
    labels: list[int] = []
    for subject in range(subjects):
        template = rng.integers(0, 256, size=(side, side), dtype=np.int64)
        for _ in range(images_per_subject):
            noise = rng.integers(-6, 7, size=(side, side))
            arrays.append(np.clip(template + noise, 0, 255).astype(np.uint8))
            labels.append(subject)
    return arrays, np.asarray(labels, dtype=np.int64)


def make_ray_cross() -> GrayImage:
    """9x9 grid with hand-picked values along the four axis rays from the center.

    Right ray: 56, 98, 75, 60; up: 80, 70, 60, 90; left: 51, 52, 53, 54;
    down: 40, 30, 45, 20; center 50. With 4 directions and ray depth 4 this
    pins every intermediate of the per-pixel descriptor.
    """
    grid = np.zeros((9, 9), dtype=np.uint8)
    grid[4, 4] = 50
    grid[4, 5:9] = (56, 98, 75, 60)
    grid[3::-1, 4] = (80, 70, 60, 90)
    grid[4, 3::-1] = (51, 52, 53, 54)
    grid[5:9, 4] = (40, 30, 45, 20)
    return GrayImage(grid)


@pytest.fixture
def ray_cross() -> GrayImage:
    return make_ray_cross()


@pytest.fixture(scope="session")
def corpus_arrays() -> tuple[list[np.ndarray], np.ndarray]:
    return make_corpus_arrays()


@pytest.fixture(scope="session")
def corpus_images(corpus_arrays) -> tuple[list[GrayImage], np.ndarray]:
    arrays, labels = corpus_arrays
    return [GrayImage(a) for a in arrays], labels


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory, corpus_arrays):
    """The synthetic corpus written out as root/<subject>/<image>.pgm."""
    arrays, labels = corpus_arrays
    root = tmp_path_factory.mktemp("corpus")
    counters: dict[int, int] = {}
    for arr, label in zip(arrays, labels):
        counters[label] = counters.get(label, 0) + 1
        subject_dir = root / f"subject{label:02d}"
        subject_dir.mkdir(exist_ok=True)
        write_pgm(GrayImage(arr), subject_dir / f"img{counters[label]:02d}.pgm")
    return root


# ---------------------------------------------------------------------------
# Acceptance summary: one PASS/FAIL/SKIP line per criterion at the end of the
# run, so the gate can be read without scrolling the pytest output.
# ---------------------------------------------------------------------------

_ACCEPTANCE_RESULTS: list[tuple[str, str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _ACCEPTANCE_RESULTS.append((name, report.outcome.upper(), ""))
    elif report.when == "setup":
        if report.skipped:
            reason = ""
            if isinstance(report.longrepr, tuple) and len(report.longrepr) == 3:
                reason = str(report.longrepr[2])
            _ACCEPTANCE_RESULTS.append((name, "SKIPPED", reason))
        elif report.failed:
            _ACCEPTANCE_RESULTS.append((name, "ERROR", ""))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, extra in _ACCEPTANCE_RESULTS:
        line = f"{outcome:>7}  {name}"
        if extra:
            line += f"  [{extra}]"
        terminalreporter.write_line(line)
