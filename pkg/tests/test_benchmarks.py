import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fluidtabu.benchmarks import BENCHMARKS, SCHWEFEL_ARGMIN, rastrigin, schwefel


def test_rastrigin_examples():
    assert rastrigin(0.0, 0.0) == -2.0
    assert rastrigin(1.0, 1.0) == pytest.approx(2 - 2 * math.cos(18), abs=1e-12)
    assert rastrigin(0.5, -0.5) == pytest.approx(0.5 - 2 * math.cos(9), abs=1e-12)
    assert rastrigin(np.array([0.5, -0.5])) == rastrigin(0.5, -0.5)


def test_schwefel_examples():
    assert schwefel(np.zeros(10)) == 0.0
    term = 420.9687 * math.sin(math.sqrt(420.9687))
    assert schwefel(np.full(10, 420.9687)) == pytest.approx(-10 * term, rel=1e-12)
    assert schwefel(np.full(10, 420.9687)) == pytest.approx(-4189.829, abs=1e-3)
    x = np.zeros(10)
    x[0] = 420.9687
    assert schwefel(x) == pytest.approx(-418.9829, abs=1e-4)


def test_schwefel_dimension():
    with pytest.raises(ValueError):
        schwefel(np.zeros(9))


@pytest.mark.parametrize("name", sorted(BENCHMARKS))
def test_known_optimum(name):
    spec = BENCHMARKS[name]()
    assert spec.evaluator(spec.known_optimum_point) == pytest.approx(spec.known_optimum_value, abs=1e-12)
    spec.schedule.check_against(spec.space)


def test_rastrigin_grid_minimum():
    g = np.round(np.arange(-100, 101) * 0.01, 2)
    xx, yy = np.meshgrid(g, g)
    vals = xx**2 + yy**2 - np.cos(18 * xx) - np.cos(18 * yy)
    i = np.unravel_index(np.argmin(vals), vals.shape)
    assert xx[i] == 0.0 and yy[i] == 0.0


def test_schwefel_term_scan():
    xs = np.arange(-5000, 5001) * 0.1
    terms = -xs * np.sin(np.sqrt(np.abs(xs)))
    assert abs(xs[np.argmin(terms)] - SCHWEFEL_ARGMIN) < 0.1


unit = st.floats(-1, 1)


@given(unit, unit)
def test_rastrigin_symmetry(x, y):
    f = rastrigin(x, y)
    assert rastrigin(-x, -y) == pytest.approx(f, abs=1e-12)
    assert rastrigin(y, x) == pytest.approx(f, abs=1e-12)


@given(st.lists(st.floats(-500, 500), min_size=10, max_size=10), st.randoms())
def test_schwefel_permutation_invariant(x, rnd):
    y = list(x)
    rnd.shuffle(y)
    assert schwefel(np.array(y)) == pytest.approx(schwefel(np.array(x)), abs=1e-9)
