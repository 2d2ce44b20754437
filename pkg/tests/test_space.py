import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fluidtabu.space import (
    DimensionMismatch,
    SearchSpace,
    StepSchedule,
    clamp,
    neighborhood,
    quantize,
    random_point,
)


def scalar_nearest(v, lower, grid):
    # independent oracle: pick the nearest of the two bracketing lattice points,
    # preferring the lower one on a tie
    k = int(np.floor((v - lower) / grid))
    a, b = lower + k * grid, lower + (k + 1) * grid
    return a if v - a <= b - v else b


@pytest.fixture
def unit_box():
    return SearchSpace([-1.0, -1.0], [1.0, 1.0], [1e-4, 1e-4])


def test_space_validation():
    with pytest.raises(ValueError):
        SearchSpace([1.0], [1.0], [0.1])
    with pytest.raises(ValueError):
        SearchSpace([0.0], [1.0], [0.0])
    with pytest.raises(ValueError):
        SearchSpace([0.0], [1.0], [2.0])
    with pytest.raises(DimensionMismatch):
        SearchSpace([0.0, 0.0], [1.0], [0.1])


def test_quantize_examples():
    s = SearchSpace([1.0], [1000.0], [1.0])
    assert quantize([17.4], s)[0] == 17.0
    assert quantize([250.0], s)[0] == 250.0
    # nearest lattice point to 99.76 on 10 + 0.5k is 100.0
    s2 = SearchSpace([10.0], [200.0], [0.5])
    assert quantize([99.76], s2)[0] == 100.0
    assert quantize([99.76], s2)[0] == scalar_nearest(99.76, 10.0, 0.5)


def test_quantize_tie_rounds_toward_lower():
    s = SearchSpace([0.0], [10.0], [1.0])
    assert quantize([2.5], s)[0] == 2.0
    assert quantize([3.5], s)[0] == 3.0


def test_quantize_dimension_mismatch():
    s = SearchSpace([0.0, 0.0], [1.0, 1.0], [0.1, 0.1])
    with pytest.raises(DimensionMismatch):
        quantize([0.5], s)
    with pytest.raises(DimensionMismatch):
        clamp([0.5, 0.5, 0.5], s)


def test_clamp_examples():
    s = SearchSpace([1.0, -500.0], [1000.0, 500.0], [1.0, 0.01])
    np.testing.assert_array_equal(clamp([1200.0, -600.0], s), [1000.0, -500.0])
    np.testing.assert_array_equal(clamp([10.0, 3.0], s), [10.0, 3.0])


def test_random_point_deterministic(unit_box):
    a = random_point(unit_box, np.random.default_rng(7))
    b = random_point(unit_box, np.random.default_rng(7))
    assert a.tobytes() == b.tobytes()


def test_random_point_mean():
    s = SearchSpace([0.0], [1.0], [1e-6])
    rng = np.random.default_rng(0)
    xs = np.array([random_point(s, rng)[0] for _ in range(10_000)])
    assert abs(xs.mean() - 0.5) < 0.02


def test_neighborhood_examples(unit_box):
    s = SearchSpace([-1.0, -1.0], [1.0, 1.0], [1e-4, 1e-4])
    got = {tuple(c) for c in neighborhood([0.0, 0.0], [0.5, 0.5], s)}
    assert got == {(0.5, 0.0), (-0.5, 0.0), (0.0, 0.5), (0.0, -0.5)}
    at_edge = {tuple(c) for c in neighborhood([1.0, 0.0], [0.5, 0.5], s)}
    assert at_edge == {(0.5, 0.0), (1.0, 0.5), (1.0, -0.5)}
    s10 = SearchSpace(np.full(10, -500.0), np.full(10, 500.0), np.full(10, 0.01))
    assert len(neighborhood(np.zeros(10), np.full(10, 100.0), s10)) == 20


def test_schedule_validation():
    s = SearchSpace([0.0], [10.0], [0.5])
    with pytest.raises(ValueError):
        StepSchedule([1.0], [2.0])
    with pytest.raises(ValueError):
        StepSchedule([1.0], [0.5], reduction_factor=1.0)
    with pytest.raises(ValueError):
        StepSchedule([1.0], [0.25]).check_against(s)
    StepSchedule([4.0], [0.5]).check_against(s)


spaces = st.integers(1, 4).flatmap(lambda d: st.tuples(
    st.lists(st.floats(-1e3, 1e3), min_size=d, max_size=d),
    st.lists(st.floats(1e-2, 1e3), min_size=d, max_size=d),
    st.lists(st.floats(1e-3, 0.5), min_size=d, max_size=d),
)).map(lambda t: SearchSpace(t[0], np.add(t[0], t[1]), np.multiply(t[1], t[2])))


@st.composite
def space_and_point(draw):
    s = draw(spaces)
    span = s.upper - s.lower
    p = [draw(st.floats(lo - w, hi + w)) for lo, hi, w in zip(s.lower, s.upper, span)]
    return s, np.array(p)


@given(space_and_point())
def test_quantize_idempotent(sp):
    s, p = sp
    q = quantize(p, s)
    np.testing.assert_array_equal(quantize(q, s), q)


@given(space_and_point())
def test_clamp_quantize_on_lattice(sp):
    s, p = sp
    q = quantize(clamp(p, s), s)
    assert np.all(q >= s.lower) and np.all(q <= s.upper)
    k = (q - s.lower) / s.grid
    at_upper = q == s.upper
    assert np.all(at_upper | (np.abs(k - np.rint(k)) <= 1e-6 * np.maximum(1.0, np.abs(k))))


@given(space_and_point(), st.floats(0.01, 1.0))
def test_neighborhood_excludes_base(sp, frac):
    s, p = sp
    base = quantize(clamp(p, s), s)
    steps = np.maximum(s.grid, frac * (s.upper - s.lower))
    cands = neighborhood(base, steps, s)
    assert len(cands) <= 2 * s.dimension
    assert not any(np.array_equal(c, base) for c in cands)
    for c in cands:
        assert np.count_nonzero(c != base) == 1
        np.testing.assert_array_equal(quantize(c, s), c)


@given(spaces, st.integers(0, 2**32))
def test_random_point_seeded(s, seed):
    a = random_point(s, np.random.default_rng(seed))
    b = random_point(s, np.random.default_rng(seed))
    assert a.tobytes() == b.tobytes()
    assert s.contains(a)
