import cmath
import math

import numpy as np
import pytest

from stepfreeze.errors import IndexOutOfRange, OutOfDisk
from stepfreeze.grid import (
    PolarGrid,
    box_center,
    box_center_phase_deg,
    from_linear,
    ind,
    ind_array,
)


def test_ind_inner_box():
    g = PolarGrid(2, 6)
    b = ind(g, 0.25 * cmath.exp(1j * math.pi / 2))
    assert (b.k, b.l, b.i) == (1, 2, 2)


def test_ind_outer_boundary():
    g = PolarGrid(2, 6)
    b = ind(g, 1.0 + 0j)
    assert (b.k, b.l, b.i) == (2, 1, 7)


def test_ind_origin_clamps_to_innermost_annulus():
    g = PolarGrid(2, 6)
    b = ind(g, 0j)
    assert (b.k, b.l, b.i) == (1, 1, 1)


def test_ind_rejects_points_outside_disk():
    g = PolarGrid(2, 6)
    with pytest.raises(OutOfDisk):
        ind(g, 1.1 + 0j)
    # within tolerance is clamped, not rejected
    assert ind(g, (1.0 + 5e-10) + 0j).k == 2


def test_box_center_examples():
    g = PolarGrid(2, 6)
    assert box_center(g, 1) == pytest.approx(0.25 * cmath.exp(1j * math.pi / 6))
    assert box_center(g, 7) == pytest.approx(0.75 * cmath.exp(1j * math.pi / 6))


def test_from_linear_examples():
    g = PolarGrid(2, 6)
    assert from_linear(g, 6) == (1, 6)
    assert from_linear(g, 7) == (2, 1)
    assert from_linear(g, 12) == (2, 6)
    with pytest.raises(IndexOutOfRange):
        from_linear(g, 13)
    with pytest.raises(IndexOutOfRange):
        from_linear(g, 0)


@pytest.mark.parametrize("P", [1, 2, 3, 5, 7, 10, 20])
@pytest.mark.parametrize("Q", [1, 6, 12, 72, 120])
def test_linear_index_round_trip(P, Q):
    g = PolarGrid(P, Q)
    for k in range(1, P + 1):
        for l in range(1, Q + 1):
            i = l + Q * (k - 1)
            assert from_linear(g, i) == (k, l)


@pytest.mark.parametrize("P,Q", [(2, 6), (10, 72), (20, 120), (7, 24)])
def test_center_round_trip(P, Q):
    g = PolarGrid(P, Q)
    for i in range(1, g.n_boxes + 1):
        assert ind(g, box_center(g, i)).i == i


def test_partition_property_random_points():
    rng = np.random.default_rng(7)
    z = rng.uniform(-1, 1, 10_000) + 1j * rng.uniform(-1, 1, 10_000)
    z = z[np.abs(z) <= 1.0]
    for P, Q in [(2, 6), (10, 72), (5, 12)]:
        g = PolarGrid(P, Q)
        idx = ind_array(g, z)
        assert np.all((idx >= 1) & (idx <= g.n_boxes))
        # vectorized and scalar paths agree
        for zz in z[:50]:
            assert ind(g, complex(zz)).i == idx[np.nonzero(z == zz)[0][0]]


def test_boundary_ownership():
    g = PolarGrid(4, 8)
    # radius on an annulus boundary belongs to the inner-indexed annulus
    assert ind(g, 0.25 + 0j).k == 1
    assert ind(g, 0.5 + 0j).k == 2
    # angle on a cone boundary belongs to the higher cone
    quarter = 0.6 * cmath.exp(1j * math.pi / 2)
    assert ind(g, quarter).l == 3


def test_box_center_phase_deg():
    g = PolarGrid.from_box_sizes(0.1, 5.0)
    assert (g.P, g.Q) == (10, 72)
    assert box_center_phase_deg(g, 25) == pytest.approx(122.5)
