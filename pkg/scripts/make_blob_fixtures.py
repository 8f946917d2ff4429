#!/usr/bin/env python3
"""Write the synthetic blob manifest + embedding file used by the demos.

Usage: python scripts/make_blob_fixtures.py [--out-dir fixtures] [--seed N]
                                            [--dim 16] [--replicas 0]
"""

import argparse
from pathlib import Path

from irispad.embeddings import write_embeddings
from irispad.manifest import serialize_manifest
from irispad.synthetic import blob_margin, make_blob_dataset


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=Path("fixtures"))
    parser.add_argument("--seed", type=int, default=20240117)
    parser.add_argument("--dim", type=int, default=16)
    parser.add_argument("--n-train", type=int, default=400)
    parser.add_argument("--n-val", type=int, default=200)
    parser.add_argument("--n-test", type=int, default=200)
    parser.add_argument("--separation", type=float, default=6.0)
    parser.add_argument("--replicas", type=int, default=0)
    args = parser.parse_args()

    manifest, emb = make_blob_dataset(
        dim=args.dim,
        n_train=args.n_train,
        n_val=args.n_val,
        n_test=args.n_test,
        separation=args.separation,
        seed=args.seed,
        replicas=args.replicas,
    )
    args.out_dir.mkdir(parents=True, exist_ok=True)
    serialize_manifest(manifest, args.out_dir / "manifest.csv")
    write_embeddings(emb, args.out_dir / "embeddings.bin")
    margin = blob_margin(manifest, emb)
    print(f"wrote {len(manifest)} samples to {args.out_dir} (class margin {margin:+.3f})")
    if margin <= 0:
        print("warning: this draw is not perfectly separable; pick another seed")


if __name__ == "__main__":
    main()
