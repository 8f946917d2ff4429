#!/usr/bin/env python3
"""Generate the synthetic fixture images + manifest used by tests and demos.

Usage: python scripts/make_image_fixtures.py [--out-dir imgs] [--count 10] [--seed 1234]
"""

import argparse
from pathlib import Path

from irispad_extract.fixtures import write_fixture_set


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=Path("fixture_images"))
    parser.add_argument("--count", type=int, default=10)
    parser.add_argument("--seed", type=int, default=1234)
    args = parser.parse_args()
    manifest = write_fixture_set(args.out_dir, count=args.count, seed=args.seed)
    print(f"wrote {args.count} images and {manifest}")


if __name__ == "__main__":
    main()
