"""Training loop for the classifier head on frozen embeddings.

Single-threaded and deterministic: one seeded generator drives
initialization and the per-epoch shuffles, so identical (seed, data, config)
reproduce bit-identical histories and scores. Model selection keeps the
epoch checkpoint with the lowest validation EER (checkpointing, not early
stopping, so the epoch schedule never depends on the data).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .embeddings import AlignedData
from .errors import DegenerateData, GridSearchFailed, IrisPadError, NanLoss
from .metrics import PaiScope, bpcer_at_apcer, pooled_eer
from .mlp import HeadGradients, MlpHead, backward, batch_loss, forward_batch, init_head
from .scores import ScoreSet, make_score_set

DEFAULT_LR_GRID = (1e-3, 1e-4, 1e-5, 1e-6)


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-4
    epochs: int = 100
    batch_size: int = 128
    hidden_width: int = 256
    seed: int = 42
    optimizer: str = "adam"  # "adam" | "sgd"
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    class_weights: tuple[float, float] | None = None  # (bona fide, attack)
    lr_grid: tuple[float, ...] = DEFAULT_LR_GRID

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1 or self.batch_size < 1 or self.hidden_width < 1:
            raise ValueError("epochs, batch_size and hidden_width must be >= 1")
        if self.optimizer not in ("adam", "sgd"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")
        if not self.lr_grid or any(lr <= 0 for lr in self.lr_grid):
            raise ValueError("lr_grid must be nonempty and positive")


class _Sgd:
    def __init__(self, lr: float):
        self.lr = lr

    def step(self, head: MlpHead, grads: HeadGradients) -> None:
        for name, p in head.params().items():
            p -= self.lr * grads.params()[name]


class _Adam:
    def __init__(self, lr: float, beta1: float, beta2: float, eps: float, head: MlpHead):
        self.lr, self.b1, self.b2, self.eps = lr, beta1, beta2, eps
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in head.params().items()}
        self.v = {k: np.zeros_like(v) for k, v in head.params().items()}

    def step(self, head: MlpHead, grads: HeadGradients) -> None:
        self.t += 1
        c1 = 1.0 - self.b1 ** self.t
        c2 = 1.0 - self.b2 ** self.t
        for name, p in head.params().items():
            g = grads.params()[name]
            self.m[name] = self.b1 * self.m[name] + (1.0 - self.b1) * g
            self.v[name] = self.b2 * self.v[name] + (1.0 - self.b2) * g * g
            p -= self.lr * (self.m[name] / c1) / (np.sqrt(self.v[name] / c2) + self.eps)


def _make_optimizer(cfg: TrainConfig, head: MlpHead):
    if cfg.optimizer == "sgd":
        return _Sgd(cfg.learning_rate)
    return _Adam(cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps, head)


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    train_loss: float
    val_eer: float


@dataclass(frozen=True)
class TrainHistory:
    rows: tuple[EpochStats, ...]
    best_epoch: int
    best_val_eer: float

    def to_json_dict(self) -> dict:
        return {
            "best_epoch": self.best_epoch,
            "best_val_eer": self.best_val_eer,
            "epochs": [
                {"epoch": r.epoch, "train_loss": r.train_loss, "val_eer": r.val_eer}
                for r in self.rows
            ],
        }


@dataclass(frozen=True)
class TrainResult:
    head: MlpHead
    val_scores: ScoreSet
    history: TrainHistory
    config: TrainConfig


def _require_both_classes(data: AlignedData, split: str) -> None:
    if data.n == 0:
        raise DegenerateData(f"{split} split is empty")
    if len(np.unique(data.labels)) < 2:
        raise DegenerateData(f"{split} split contains a single class")


def _sample_weights(cfg: TrainConfig, y: np.ndarray) -> np.ndarray | None:
    if cfg.class_weights is None:
        return None
    w_bf, w_att = cfg.class_weights
    return np.where(y == 1, w_att, w_bf).astype(np.float64)


def score(head: MlpHead, data: AlignedData) -> ScoreSet:
    """Score the clean embedding row of every sample (replicas excluded)."""
    if data.n == 0:
        raise DegenerateData("no samples to score")
    probs = forward_batch(head, data.matrix)
    return make_score_set(zip(data.sample_ids, data.labels, data.species, probs))


def train(train_data: AlignedData, val_data: AlignedData, cfg: TrainConfig) -> TrainResult:
    """Fit the head with mini-batch BCE; returns the lowest-val-EER checkpoint."""
    _require_both_classes(train_data, "train")
    _require_both_classes(val_data, "val")

    X, y = train_data.training_rows()
    weights = _sample_weights(cfg, y)
    X_val = val_data.matrix
    val_bf_mask = val_data.labels == 0

    rng = np.random.default_rng(cfg.seed)
    head = init_head(train_data.dim, cfg.hidden_width, rng)
    opt = _make_optimizer(cfg, head)

    rows: list[EpochStats] = []
    best_head = head.copy()
    best_eer = np.inf
    best_epoch = 0
    n = len(X)
    bs = min(cfg.batch_size, n)

    for epoch in range(1, cfg.epochs + 1):
        perm = rng.permutation(n)
        losses = []
        # overflow while diverging is expected and surfaced as NanLoss below
        with np.errstate(over="ignore", invalid="ignore"):
            for start in range(0, n, bs):
                sel = perm[start:start + bs]
                Xb, yb = X[sel], y[sel]
                wb = weights[sel] if weights is not None else None
                loss = batch_loss(head, Xb, yb, wb)
                if not np.isfinite(loss):
                    raise NanLoss(epoch)
                opt.step(head, backward(head, Xb, yb, wb))
                losses.append(loss)
        if not head.all_finite():
            raise NanLoss(epoch)

        # a finite but exploded head can still produce inf - inf = NaN scores
        with np.errstate(over="ignore", invalid="ignore"):
            val_probs = forward_batch(head, X_val)
        if not np.all(np.isfinite(val_probs)):
            raise NanLoss(epoch)
        val_eer = pooled_eer(val_probs[val_bf_mask], val_probs[~val_bf_mask])
        rows.append(EpochStats(epoch=epoch, train_loss=float(np.mean(losses)), val_eer=val_eer))
        # ties keep the later epoch: equal val EER, more converged margins
        if val_eer <= best_eer:
            best_eer = val_eer
            best_epoch = epoch
            best_head = head.copy()

    history = TrainHistory(rows=tuple(rows), best_epoch=best_epoch, best_val_eer=float(best_eer))
    return TrainResult(head=best_head, val_scores=score(best_head, val_data), history=history, config=cfg)


@dataclass(frozen=True)
class GridCell:
    learning_rate: float
    seed: int
    status: str  # "ok" | "failed"
    val_eer: float | None = None
    val_bpcer10: float | None = None
    best_epoch: int | None = None
    error: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "seed": self.seed,
            "status": self.status,
            "val_eer": self.val_eer,
            "val_bpcer10": self.val_bpcer10,
            "best_epoch": self.best_epoch,
            "error": self.error,
        }


@dataclass(frozen=True)
class GridSearchResult:
    best: TrainResult
    cells: tuple[GridCell, ...]

    def to_json_dict(self) -> dict:
        return {
            "best_learning_rate": self.best.config.learning_rate,
            "best_seed": self.best.config.seed,
            "cells": [c.to_json_dict() for c in self.cells],
        }


def grid_search(
    train_data: AlignedData,
    val_data: AlignedData,
    base_cfg: TrainConfig,
    lr_grid: tuple[float, ...] | None = None,
) -> GridSearchResult:
    """One train run per learning rate; pick the cell with the lowest val EER.

    Ties break on lower BPCER10 (pooled, on val), then the smaller lr. Cells
    are independently seeded (base seed + index) so they could run
    concurrently; failed cells are recorded and skipped, and the search
    fails only when every cell does.
    """
    grid = tuple(lr_grid) if lr_grid is not None else base_cfg.lr_grid
    if not grid:
        raise GridSearchFailed("empty learning-rate grid")

    cells: list[GridCell] = []
    results: dict[float, TrainResult] = {}
    for i, lr in enumerate(grid):
        cfg = replace(base_cfg, learning_rate=lr, seed=base_cfg.seed + i)
        try:
            result = train(train_data, val_data, cfg)
        except IrisPadError as exc:
            cells.append(GridCell(learning_rate=lr, seed=cfg.seed, status="failed", error=str(exc)))
            continue
        b10 = bpcer_at_apcer(result.val_scores, 0.10, PaiScope.pooled()).bpcer
        results[lr] = result
        cells.append(
            GridCell(
                learning_rate=lr,
                seed=cfg.seed,
                status="ok",
                val_eer=result.history.best_val_eer,
                val_bpcer10=b10,
                best_epoch=result.history.best_epoch,
            )
        )

    ok = [c for c in cells if c.status == "ok"]
    if not ok:
        raise GridSearchFailed(
            "all grid cells failed: " + "; ".join(f"lr={c.learning_rate:g}: {c.error}" for c in cells)
        )
    winner = min(ok, key=lambda c: (c.val_eer, c.val_bpcer10, c.learning_rate))
    return GridSearchResult(best=results[winner.learning_rate], cells=tuple(cells))
