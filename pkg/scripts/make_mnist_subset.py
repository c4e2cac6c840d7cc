"""Convert mlxtend's bundled 5000-digit MNIST sample into IDX files.

The sample (500 digits per class, raw 0-255 pixels) ships inside the
mlxtend wheel as ``mlxtend/data/data/mnist_5k.csv.gz``: 784 pixel columns
followed by the label. Usage::

    python scripts/make_mnist_subset.py path/to/mnist_5k.csv.gz data/
"""

import argparse
import gzip
from pathlib import Path

import numpy as np

from csmds.datasets import write_idx


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv", type=Path)
    ap.add_argument("outdir", type=Path)
    args = ap.parse_args(argv)
    with gzip.open(args.csv, "rt") as fh:
        table = np.loadtxt(fh, delimiter=",")
    pixels, labels = table[:, :-1], table[:, -1]
    if pixels.shape[1] != 784:
        raise SystemExit(f"expected 784 pixel columns, got {pixels.shape[1]}")
    if np.any(pixels != np.round(pixels)) or pixels.min() < 0 or pixels.max() > 255:
        raise SystemExit("pixel values are not bytes")
    args.outdir.mkdir(parents=True, exist_ok=True)
    write_idx(args.outdir / "mnist5k-images-idx3-ubyte.gz",
              pixels.astype(np.uint8).reshape(-1, 28, 28))
    write_idx(args.outdir / "mnist5k-labels-idx1-ubyte.gz", labels.astype(np.uint8))
    print(f"wrote {len(labels)} digits to {args.outdir}")


if __name__ == "__main__":
    main()
