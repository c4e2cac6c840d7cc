"""Shared value types, validation and the random-source contract."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

SYMMETRY_TOL = 1e-6
CONSISTENCY_TOL = 1e-9
DEFAULT_MAX_EPOCHS = 10_000


class ValidationError(ValueError):
    """Input data violates a structural invariant."""


class InvalidConfigError(ValueError):
    """Optimizer hyperparameters contradict each other or the variant."""


class ConsistencyError(RuntimeError):
    """Cached state disagrees with a full recomputation."""


class NumericalError(RuntimeError):
    """An iterative numerical routine failed to converge."""


class Variant(str, enum.Enum):
    FULL_SEARCH = "fs"
    RANDOMIZED = "rn"
    BOOTSTRAPPED = "bs"

    @classmethod
    def parse(cls, value: "Variant | str") -> "Variant":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {
            "fullsearch": "fs", "full_search": "fs", "full-search": "fs",
            "randomized": "rn", "random": "rn",
            "bootstrapped": "bs", "bootstrap": "bs",
        }
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise InvalidConfigError(f"unknown variant {value!r}") from None


def make_rng(seed: int | np.random.SeedSequence | None) -> np.random.Generator:
    """Return a PCG64 generator; all randomness in the package flows through one of these."""
    return np.random.Generator(np.random.PCG64(seed))


def bernoulli(p: float, rng: np.random.Generator) -> bool:
    """Draw one Bernoulli(p) sample, consuming exactly one uniform from ``rng``."""
    if not 0.0 <= p <= 1.0 or p != p:
        raise ValueError(f"probability must lie in [0, 1], got {p!r}")
    return bool(rng.random() < p)


@dataclass(frozen=True)
class TargetMatrix:
    """Symmetric, zero-diagonal, non-negative dissimilarity matrix."""

    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def validate_target(values, tol: float = SYMMETRY_TOL) -> TargetMatrix:
    """Check a candidate dissimilarity matrix and return it as a :class:`TargetMatrix`.

    Near-symmetric input is symmetrized as ``(T + T.T) / 2``. Errors name the
    first offending index.
    """
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"target must be square, got shape {arr.shape}")
    bad = np.argwhere(~np.isfinite(arr))
    if bad.size:
        i, j = bad[0]
        raise ValidationError(f"non-finite entry at ({i},{j})")
    bad = np.argwhere(arr < 0)
    if bad.size:
        i, j = bad[0]
        raise ValidationError(f"negative entry at ({i},{j}): {arr[i, j]!r}")
    asym = np.abs(arr - arr.T)
    bad = np.argwhere(np.triu(asym > tol))
    if bad.size:
        i, j = bad[0]
        raise ValidationError(
            f"asymmetric at ({i},{j}): {arr[i, j]!r} vs {arr[j, i]!r}")
    arr = 0.5 * (arr + arr.T)
    bad = np.flatnonzero(np.abs(np.diag(arr)) > tol)
    if bad.size:
        i = bad[0]
        raise ValidationError(f"non-zero diagonal at ({i},{i})")
    np.fill_diagonal(arr, 0.0)
    return TargetMatrix(arr)


@dataclass
class Embedding:
    """Point coordinates with their cached Euclidean distance matrix.

    Instances are working state for the optimizers: the engine rewrites a
    row of ``coords`` and the matching row/column of ``distances`` in place
    whenever a move is accepted.
    """

    coords: np.ndarray
    distances: np.ndarray

    @classmethod
    def from_coords(cls, coords) -> "Embedding":
        from .stress import compute_distance_matrix

        coords = np.ascontiguousarray(coords, dtype=np.float64)
        if coords.ndim != 2:
            raise ValueError(f"coords must be 2-D, got shape {coords.shape}")
        return cls(coords, compute_distance_matrix(coords))

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def l(self) -> int:
        return self.coords.shape[1]

    def copy(self) -> "Embedding":
        return Embedding(self.coords.copy(), self.distances.copy())

    def check(self, rtol: float = CONSISTENCY_TOL) -> None:
        from .stress import compute_distance_matrix

        if not np.all(np.isfinite(self.coords)):
            raise ConsistencyError("embedding has non-finite coordinates")
        full = compute_distance_matrix(self.coords)
        scale = max(float(np.abs(full).max()), 1.0)
        err = float(np.abs(full - self.distances).max())
        if err > rtol * scale:
            raise ConsistencyError(f"cached distances off by {err:.3e}")


@dataclass
class ProbabilityMatrix:
    """Per-point evaluation probabilities for the 2L signed coordinate steps.

    Column ``s`` holds the +s direction, column ``s + L`` the -s direction.
    """

    probs: np.ndarray

    @classmethod
    def full(cls, n: int, l: int, value: float) -> "ProbabilityMatrix":
        return cls(np.full((n, 2 * l), float(value)))

    @property
    def n(self) -> int:
        return self.probs.shape[0]

    @property
    def l(self) -> int:
        return self.probs.shape[1] // 2

    def column(self, dim: int, sign: int) -> int:
        if not 0 <= dim < self.l:
            raise IndexError(dim)
        return dim if sign > 0 else dim + self.l

    def signed_coordinate(self, col: int) -> tuple[int, int]:
        l = self.l
        if not 0 <= col < 2 * l:
            raise IndexError(col)
        return (col, 1) if col < l else (col - l, -1)

    def copy(self) -> "ProbabilityMatrix":
        return ProbabilityMatrix(self.probs.copy())


@dataclass(frozen=True)
class RunConfig:
    variant: Variant
    l: int
    r0: float = 5.0
    epsilon: float = 1e-4
    delta: float = 1e-3
    p_init: float = 1.0
    p_a: float = 0.0
    p_th: float = 0.0
    max_epochs: int = DEFAULT_MAX_EPOCHS
    seed: int | None = 0

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant.parse(self.variant))
        if self.l < 1:
            raise InvalidConfigError(f"dimension must be >= 1, got {self.l}")
        if not self.delta > 0 or not self.r0 > self.delta:
            raise InvalidConfigError(
                f"need r0 > delta > 0, got r0={self.r0}, delta={self.delta}")
        if not self.epsilon > 0:
            raise InvalidConfigError(f"epsilon must be > 0, got {self.epsilon}")
        if not 0 < self.p_init <= 1:
            raise InvalidConfigError(f"p_init must lie in (0, 1], got {self.p_init}")
        if not 0 <= self.p_a <= 1:
            raise InvalidConfigError(f"p_a must lie in [0, 1], got {self.p_a}")
        if not 0 <= self.p_th <= 1:
            raise InvalidConfigError(f"p_th must lie in [0, 1], got {self.p_th}")
        if self.max_epochs < 1:
            raise InvalidConfigError(f"max_epochs must be >= 1, got {self.max_epochs}")
        v = self.variant
        if v is Variant.FULL_SEARCH and (self.p_init != 1 or self.p_a != 0):
            raise InvalidConfigError("full search requires p_init=1 and p_a=0")
        if v is Variant.RANDOMIZED and self.p_a != 0:
            raise InvalidConfigError("randomized search requires p_a=0")
        if v is Variant.RANDOMIZED and self.p_init >= 1:
            raise InvalidConfigError("randomized search requires p_init < 1")
        # p_th >= p_init is allowed: the first successful update lifts the row to the floor
        if v is Variant.BOOTSTRAPPED and not self.p_a > 0:
            raise InvalidConfigError("bootstrapped search requires p_a > 0")

    def with_(self, **changes) -> "RunConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "variant": self.variant.value, "l": self.l, "r0": self.r0,
            "epsilon": self.epsilon, "delta": self.delta, "p_init": self.p_init,
            "p_a": self.p_a, "p_th": self.p_th, "max_epochs": self.max_epochs,
            "seed": self.seed,
        }


@dataclass
class RunState:
    epoch: int
    radius: float
    stress: float
    prev_stress: float
    evals: int
    rng: np.random.Generator
    halvings: int = 0


@dataclass(frozen=True)
class TraceRecord:
    epoch: int
    stress: float
    radius: float
    evals: int
    elapsed_ms: float

    FIELDS = ("epoch", "stress", "radius", "evals", "elapsed_ms")

    def as_row(self) -> tuple:
        return (self.epoch, self.stress, self.radius, self.evals, self.elapsed_ms)


@dataclass
class LabeledDataset:
    vectors: np.ndarray
    labels: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def __post_init__(self):
        if len(self.vectors) != len(self.labels):
            raise ValidationError(
                f"{len(self.vectors)} vectors but {len(self.labels)} labels")

    def __len__(self) -> int:
        return len(self.labels)
