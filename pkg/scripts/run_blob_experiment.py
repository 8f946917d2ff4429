#!/usr/bin/env python3
"""End-to-end demo on synthetic blobs, driven through the CLI.

Generates fixtures, runs the learning-rate grid search, evaluates the test
scores and emits the DET artifacts. Everything lands in --work-dir.
"""

import argparse
import sys
from pathlib import Path

from irispad.cli import main as irispad
from irispad.embeddings import write_embeddings
from irispad.manifest import serialize_manifest
from irispad.synthetic import make_blob_dataset


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--work-dir", type=Path, default=Path("blob_run"))
    parser.add_argument("--seed", type=int, default=20240117)
    parser.add_argument("--train-seed", type=int, default=42)
    parser.add_argument("--epochs", type=int, default=100)
    args = parser.parse_args()

    work = args.work_dir
    work.mkdir(parents=True, exist_ok=True)
    manifest, emb = make_blob_dataset(seed=args.seed)
    serialize_manifest(manifest, work / "manifest.csv")
    write_embeddings(emb, work / "embeddings.bin")

    steps = [
        ["summarize", "--manifest", str(work / "manifest.csv")],
        [
            "grid-search",
            "--manifest", str(work / "manifest.csv"),
            "--embeddings", str(work / "embeddings.bin"),
            "--lr-grid", "1e-3,1e-4,1e-5,1e-6",
            "--epochs", str(args.epochs),
            "--seed", str(args.train_seed),
            "--out", str(work / "scores.csv"),
            "--report", str(work / "grid.json"),
        ],
        [
            "evaluate",
            "--scores", str(work / "scores.csv"),
            "--pai-scope", "pooled",
            "--report", str(work / "report.json"),
        ],
        [
            "det",
            "--scores", str(work / "scores.csv"),
            "--out", str(work / "det.csv"),
            "--svg", str(work / "det.svg"),
        ],
    ]
    for argv in steps:
        print(f"\n$ irispad {' '.join(argv)}")
        code = irispad(argv)
        if code != 0:
            return code
    print(f"\nartifacts in {work}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
