import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from csmds import InvalidConfigError, ProbabilityMatrix, RunConfig, ValidationError, bernoulli
from csmds.types import make_rng, validate_target


@pytest.mark.parametrize("seed", [0, 1, 12345])
def test_bernoulli_certain_outcomes(seed):
    rng = make_rng(seed)
    assert bernoulli(1.0, rng) is True
    assert bernoulli(0.0, rng) is False


def test_bernoulli_frequency():
    rng = make_rng(42)
    hits = sum(bernoulli(0.5, rng) for _ in range(10_000))
    assert abs(hits / 10_000 - 0.5) <= 0.02


def test_bernoulli_consumes_one_draw():
    a, b = make_rng(3), make_rng(3)
    bernoulli(0.3, a)
    b.random()
    assert a.random() == b.random()


@pytest.mark.parametrize("p", [-0.1, 1.5, float("nan")])
def test_bernoulli_rejects_bad_probability(p):
    with pytest.raises(ValueError):
        bernoulli(p, make_rng(0))


def test_seeded_draws_repeat():
    draws = [[bernoulli(0.37, r) for _ in range(200)] for r in (make_rng(9), make_rng(9))]
    assert draws[0] == draws[1]


def test_validate_target_accepts_simple():
    t = validate_target([[0, 1], [1, 0]])
    assert t.n == 2
    assert not t.values.flags.writeable


def test_validate_target_asymmetric():
    with pytest.raises(ValidationError, match=r"asymmetric at \(0,1\)"):
        validate_target([[0, 1], [2, 0]])


def test_validate_target_negative():
    with pytest.raises(ValidationError, match="negative entry"):
        validate_target([[0, -1], [-1, 0]])


@pytest.mark.parametrize("values, msg", [
    ([[0, 1, 2], [1, 0, 3]], "square"),
    ([[0, np.nan], [np.nan, 0]], r"non-finite entry at \(0,1\)"),
    ([[1, 1], [1, 0]], "diagonal"),
])
def test_validate_target_errors(values, msg):
    with pytest.raises(ValidationError, match=msg):
        validate_target(values)


def test_validate_target_symmetrizes_within_tolerance():
    t = validate_target([[0, 1.0], [1.0 + 5e-7, 0]])
    assert t.values[0, 1] == t.values[1, 0] == pytest.approx(1.00000025, abs=1e-15)


@given(st.integers(min_value=1, max_value=40))
def test_probability_column_bijection(l):
    p = ProbabilityMatrix.full(1, l, 0.5)
    for s in range(l):
        for sign in (1, -1):
            assert p.signed_coordinate(p.column(s, sign)) == (s, sign)
    assert sorted(p.column(s, g) for s in range(l) for g in (1, -1)) == list(range(2 * l))


@pytest.mark.parametrize("kwargs", [
    dict(variant="fs", l=2, p_init=0.5),
    dict(variant="fs", l=2, p_a=0.1),
    dict(variant="rn", l=2, p_init=0.7, p_a=0.05),
    dict(variant="rn", l=2, p_init=1.0),
    dict(variant="bs", l=2, p_init=0.7, p_a=0.0),
    dict(variant="fs", l=2, r0=1e-4, delta=1e-3),
    dict(variant="fs", l=2, epsilon=0.0),
    dict(variant="rn", l=2, p_init=0.0),
    dict(variant="fs", l=0),
])
def test_run_config_rejects(kwargs):
    with pytest.raises(InvalidConfigError):
        RunConfig(**kwargs)


def test_run_config_roundtrip_dict():
    cfg = RunConfig(variant="bs", l=3, p_init=0.4, p_a=0.05, p_th=0.2, seed=7)
    assert RunConfig(**cfg.to_dict()) == cfg
