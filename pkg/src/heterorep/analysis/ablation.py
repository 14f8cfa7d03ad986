"""Exhaustive representation-subset sweep.

Every nonempty subset of the registered blocks is composed, standardized on
a stratified train sample, fitted with logistic regression over an inverse
regularization grid and scored on the untouched validation rows.  Subsets
are independent, so they run in a thread pool; records merge in bitmask
order, making the output independent of scheduling.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..corpus import stratified_indices
from ..errors import HeterorepError, ParameterError
from ..learners.linear import train_logreg
from ..learners.metrics import MetricsRecord, evaluate
from ..seeding import derive_seed
from ..stacking import BlockRegistry, Scenario, apply_standardizer, compose, fit_standardizer

logger = logging.getLogger(__name__)

DEFAULT_C_GRID = (1.0, 0.1, 0.01, 0.001)

# Datasets at or below this many train rows skip subsampling entirely.
DEFAULT_MIN_SAMPLE_SIZE = 500


def worker_count() -> int:
    env = os.environ.get("HETEROREP_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def enumerate_subsets(n_blocks: int) -> list[int]:
    """All nonempty bitmasks over n_blocks blocks, ascending."""
    if n_blocks < 1:
        raise ParameterError("need at least one block to ablate")
    return list(range(1, 2 ** n_blocks))


def subset_blocks(bitmask: int, names: list[str]) -> tuple[str, ...]:
    return tuple(name for i, name in enumerate(names) if bitmask >> i & 1)


@dataclass
class AblationRecord:
    bitmask: int
    blocks: tuple[str, ...]
    dimension: int
    metrics: MetricsRecord | None
    failed: bool = False
    error: str = ""

    @property
    def sort_key(self):
        m = self.metrics
        # F1 then accuracy, failures last; bitmask keeps ties deterministic
        if m is None:
            return (1, 0.0, 0.0, self.bitmask)
        return (0, -m.f1, -m.accuracy, self.bitmask)


def ablate(train_registry: BlockRegistry, val_registry: BlockRegistry,
           y_train: np.ndarray, y_val: np.ndarray, n_classes: int,
           sample_fraction: float = 0.1, c_grid: tuple[float, ...] = DEFAULT_C_GRID,
           seed: int = 0, min_sample_size: int = DEFAULT_MIN_SAMPLE_SIZE,
           averaging: str = "weighted", logreg_max_epochs: int = 100,
           ) -> list[AblationRecord]:
    """Sweep all block subsets; returns records sorted best-first by F1.

    Train rows are subsampled once (stratified by label, skipped for small
    datasets) and shared across subsets; validation rows are never sampled.
    """
    names = train_registry.names()
    masks = enumerate_subsets(len(names))

    y_train = np.asarray(y_train, dtype=np.int64)
    y_val = np.asarray(y_val, dtype=np.int64)
    if sample_fraction < 1.0 and y_train.size > min_sample_size:
        rows = stratified_indices(y_train.tolist(), sample_fraction,
                                  derive_seed(seed, "ablate-sample"))
    else:
        rows = np.arange(y_train.size)
    y_fit = y_train[rows]

    def run_subset(mask: int) -> AblationRecord:
        blocks = subset_blocks(mask, names)
        scenario = Scenario(name=f"subset-{mask}", blocks=blocks)
        X_train, _ = compose(scenario, train_registry)
        X_val, _ = compose(scenario, val_registry)
        dim = X_train.shape[1]
        try:
            standardizer = fit_standardizer(X_train[rows])
            X_fit = apply_standardizer(standardizer, X_train[rows])
            X_score = apply_standardizer(standardizer, X_val)
            best = None
            for c in c_grid:
                model = train_logreg(X_fit, y_fit, l2_lambda=1.0 / c,
                                     n_classes=n_classes,
                                     max_epochs=logreg_max_epochs)
                metrics = evaluate(model, X_score, y_val, averaging=averaging)
                if best is None or metrics.f1 > best.f1:
                    best = metrics
            return AblationRecord(bitmask=mask, blocks=blocks, dimension=dim,
                                  metrics=best)
        except HeterorepError as exc:
            logger.warning("subset %d (%s) failed: %s", mask, blocks, exc)
            return AblationRecord(bitmask=mask, blocks=blocks, dimension=dim,
                                  metrics=None, failed=True, error=str(exc))

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        records = list(pool.map(run_subset, masks))

    records.sort(key=lambda r: r.sort_key)
    return records


def best_worst(records: list[AblationRecord], k: int = 10,
               ) -> tuple[list[AblationRecord], list[AblationRecord]]:
    """Top-k and bottom-k scored records (worst list lowest-first)."""
    scored = [r for r in records if not r.failed]
    return scored[:k], list(reversed(scored[-k:]))
