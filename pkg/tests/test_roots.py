"""Bracketing and bisection helpers."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from altchain.errors import NumericError
from altchain.roots import bisect, bracket_sign_changes


def test_brackets_simple_cubic():
    # roots at -1, 0, 1
    cells = bracket_sign_changes(lambda x: x**3 - x, -2.0, 2.0, 37)
    assert len(cells) == 3
    for lo, hi in cells:
        root = bisect(lambda x: x**3 - x, lo, hi)
        assert min(abs(root + 1), abs(root), abs(root - 1)) < 1e-12


def test_bisect_runs_to_machine_resolution():
    root = bisect(math.cos, 1.0, 2.0)
    assert root == pytest.approx(math.pi / 2.0, abs=1e-15)


def test_bisect_requires_sign_change():
    with pytest.raises(NumericError):
        bisect(lambda x: x * x + 1.0, -1.0, 1.0)


def test_grid_is_open():
    # endpoint zeros must not be sampled
    cells = bracket_sign_changes(np.sin, 0.0, math.pi, 50)
    assert cells == []


@given(st.floats(-5.0, 5.0), st.floats(0.1, 5.0))
def test_bisect_linear(offset, slope):
    root = bisect(lambda x: slope * (x - offset), offset - 1.0, offset + 1.0)
    assert abs(root - offset) < 1e-12
