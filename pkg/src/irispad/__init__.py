"""Iris presentation-attack-detection toolkit.

Trains a small two-layer head on frozen foundation-model embeddings and
evaluates any score source with ISO/IEC 30107-3 metrics (per-PAI APCER,
BPCER, EER, BPCER10/20/100, DET curves).
"""

__version__ = "0.1.0"

from .embeddings import AlignedData, EmbeddingSet, join, read_embeddings, write_embeddings
from .manifest import Label, Manifest, SampleRecord, parse_manifest, serialize_manifest, summarize
from .metrics import (
    DetCurve,
    MetricsReport,
    OperatingPoint,
    PaiScope,
    apcer,
    bpcer,
    bpcer_at_apcer,
    det_curve,
    eer,
    full_report,
    worst_case_apcer,
)
from .mlp import MlpHead, backward, bce_loss, forward, forward_batch, init_head
from .scores import ScoreSet, load_scores, make_score_set, save_scores
from .train import TrainConfig, TrainResult, grid_search, score, train

__all__ = [
    "AlignedData",
    "DetCurve",
    "EmbeddingSet",
    "Label",
    "Manifest",
    "MetricsReport",
    "MlpHead",
    "OperatingPoint",
    "PaiScope",
    "SampleRecord",
    "ScoreSet",
    "TrainConfig",
    "TrainResult",
    "apcer",
    "backward",
    "bce_loss",
    "bpcer",
    "bpcer_at_apcer",
    "det_curve",
    "eer",
    "forward",
    "forward_batch",
    "full_report",
    "grid_search",
    "init_head",
    "join",
    "load_scores",
    "make_score_set",
    "parse_manifest",
    "read_embeddings",
    "save_scores",
    "score",
    "serialize_manifest",
    "summarize",
    "train",
    "worst_case_apcer",
    "write_embeddings",
]
