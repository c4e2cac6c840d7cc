"""IDX (MNIST) file ingestion and labeled-subset sampling."""

from __future__ import annotations

import gzip
import os
import struct
from pathlib import Path

import numpy as np

from .types import LabeledDataset, ValidationError, make_rng

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801


class IDXFormatError(ValueError):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (byte offset {offset})")


def _read_bytes(path) -> bytes:
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(2)
        fh.seek(0)
        if head == b"\x1f\x8b":
            with gzip.open(fh) as gz:
                return gz.read()
        return fh.read()


def _parse_idx(buf: bytes, magic: int, ndim: int) -> np.ndarray:
    if len(buf) < 4:
        raise IDXFormatError("file shorter than the magic number", len(buf))
    (got,) = struct.unpack(">I", buf[:4])
    if got != magic:
        raise IDXFormatError(f"bad magic number 0x{got:08x}, expected 0x{magic:08x}", 0)
    header = 4 + 4 * ndim
    if len(buf) < header:
        raise IDXFormatError(f"truncated header, need {header} bytes", len(buf))
    dims = struct.unpack(f">{ndim}I", buf[4:header])
    size = int(np.prod(dims, dtype=np.int64))
    if len(buf) < header + size:
        raise IDXFormatError(
            f"truncated payload: dims {dims} need {size} bytes, found {len(buf) - header}",
            len(buf))
    if len(buf) > header + size:
        raise IDXFormatError(f"{len(buf) - header - size} trailing bytes after payload",
                             header + size)
    return np.frombuffer(buf, dtype=np.uint8, count=size, offset=header).reshape(dims)


def read_idx_images(path) -> np.ndarray:
    """Read an IDX3 image file (optionally gzipped) into an N x (rows*cols) array in [0, 1]."""
    raw = _parse_idx(_read_bytes(path), IMAGES_MAGIC, 3)
    return raw.reshape(raw.shape[0], -1).astype(np.float64) / 255.0


def read_idx_labels(path) -> np.ndarray:
    """Read an IDX1 label file (optionally gzipped)."""
    return _parse_idx(_read_bytes(path), LABELS_MAGIC, 1).astype(np.int64)


def read_idx_header(path) -> tuple[int, tuple[int, ...]]:
    """Magic number and dimension sizes, without validating the payload."""
    buf = _read_bytes(path)
    (magic,) = struct.unpack(">I", buf[:4])
    ndim = magic & 0xFF
    return magic, struct.unpack(f">{ndim}I", buf[4:4 + 4 * ndim])


def write_idx(path, array: np.ndarray, compress: bool | None = None) -> None:
    """Write unsigned-byte data as IDX (gzipped when the name ends in .gz)."""
    arr = np.ascontiguousarray(array, dtype=np.uint8)
    header = struct.pack(">I", 0x00000800 | arr.ndim) + struct.pack(f">{arr.ndim}I", *arr.shape)
    data = header + arr.tobytes()
    if compress is None:
        compress = str(path).endswith(".gz")
    if compress:
        # fixed mtime and no embedded name keep the bytes identical across runs
        with open(path, "wb") as raw, gzip.GzipFile(filename="", fileobj=raw, mode="wb", mtime=0) as fh:
            fh.write(data)
    else:
        Path(path).write_bytes(data)


def load_mnist(images_path, labels_path) -> LabeledDataset:
    x = read_idx_images(images_path)
    y = read_idx_labels(labels_path)
    if len(x) != len(y):
        raise ValidationError(f"{len(x)} images but {len(y)} labels")
    return LabeledDataset(x, y)


def find_mnist(directory=None):
    """Locate an (images, labels) IDX pair.

    Searches ``directory``, then ``$CSMDS_MNIST_DIR``, then the bundled
    5000-digit subset under ``data/`` at the repository root. Returns
    ``None`` when nothing is found.
    """
    candidates = []
    if directory:
        candidates.append(Path(directory))
    if os.environ.get("CSMDS_MNIST_DIR"):
        candidates.append(Path(os.environ["CSMDS_MNIST_DIR"]))
    candidates.append(Path(__file__).resolve().parents[2] / "data")
    pairs = [
        ("train-images-idx3-ubyte", "train-labels-idx1-ubyte"),
        ("mnist5k-images-idx3-ubyte", "mnist5k-labels-idx1-ubyte"),
    ]
    for d in candidates:
        for img, lab in pairs:
            for suffix in ("", ".gz"):
                ip, lp = d / (img + suffix), d / (lab + suffix)
                if ip.exists() and lp.exists():
                    return ip, lp
    return None


def subsample(ds: LabeledDataset, classes, count: int, seed=0) -> LabeledDataset:
    """Uniform sample of ``count`` items whose label is in ``classes``, without replacement."""
    classes = np.asarray(sorted(set(int(c) for c in classes)), dtype=np.int64)
    pool = np.flatnonzero(np.isin(ds.labels, classes))
    if count < 0 or count > len(pool):
        raise ValueError(f"requested {count} items but only {len(pool)} match {classes.tolist()}")
    pick = make_rng(seed).choice(pool, size=count, replace=False) if count else pool[:0]
    return LabeledDataset(ds.vectors[pick], ds.labels[pick])
