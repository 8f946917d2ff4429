"""Command-line entry point for embedding extraction.

Exit codes: 0 success, 1 usage, 2 extraction error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .augment import AugmentConfig
from .backbones import REGISTRY
from .errors import ExtractError
from .extract import ExtractConfig, run_extraction


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irispad-extract",
        description="Extract frozen-backbone embeddings from manifest images "
        "into the toolkit's binary embedding format.",
    )
    parser.add_argument("--manifest", required=True, type=Path)
    parser.add_argument("--out", required=True, type=Path)
    parser.add_argument("--backbone", default="dinov2-vitb14", choices=sorted(REGISTRY))
    parser.add_argument("--replicas", type=int, default=0, help="augmented rows per sample")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--weights", default="random", choices=["random", "pretrained"])
    parser.add_argument("--weights-dir", type=Path, default=None,
                        help="local transformers-format checkpoint directory")
    parser.add_argument("--layers", type=int, default=None,
                        help="depth override for random-weight validation runs")
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument("--red-channel", action="store_true",
                        help="use only the red channel of color images")
    parser.add_argument("--brightness-jitter", type=float, default=0.2)
    parser.add_argument("--contrast-jitter", type=float, default=0.2)
    parser.add_argument("--checkpoint-tag", default="laion400m_e32")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = ExtractConfig(
            manifest=args.manifest,
            out=args.out,
            backbone_id=args.backbone,
            checkpoint_tag=args.checkpoint_tag,
            replicas=args.replicas,
            seed=args.seed,
            weights=args.weights,
            weights_dir=args.weights_dir,
            layers=args.layers,
            batch_size=args.batch_size,
            red_channel_only=args.red_channel,
            augment_cfg=AugmentConfig(
                brightness_jitter=args.brightness_jitter,
                contrast_jitter=args.contrast_jitter,
            ),
        )
        out = run_extraction(cfg)
    except ValueError as exc:
        print(f"irispad-extract: error category=usage: {exc}", file=sys.stderr)
        return 1
    except (ExtractError, OSError) as exc:
        print(f"irispad-extract: error category=data type={type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
