import numpy as np
import pytest

from spotdeconv.kernels import (
    SIGMA_MIN,
    build_kernel_bank,
    gaussian_factor_1d,
    make_scale_grid,
)

# Center tap for sigma = 1: integral of the unit Gaussian pdf over [-1/2, 1/2],
# frozen from 60-digit quadrature.
CENTER_TAP_SIGMA1 = 0.38292492254802620728


def test_scale_grid_uniform():
    np.testing.assert_allclose(make_scale_grid(4.0, 4).edges, [0, 1, 2, 3, 4])
    np.testing.assert_allclose(make_scale_grid(1.0, 1).edges, [0, 1])
    np.testing.assert_allclose(
        make_scale_grid(2.5, 5).edges, [0, 0.5, 1.0, 1.5, 2.0, 2.5]
    )


def test_scale_grid_invalid():
    with pytest.raises(ValueError):
        make_scale_grid(0.0, 3)
    with pytest.raises(ValueError):
        make_scale_grid(2.0, 0)


def test_near_delta_factor():
    # first bin of a fine grid: midpoint clamps to SIGMA_MIN, nearly all mass
    # lands on the center tap
    grid = make_scale_grid(0.4, 8)
    assert max(grid.midpoint(0), SIGMA_MIN) == SIGMA_MIN
    factor = gaussian_factor_1d(grid, 0)
    center = factor.taps[factor.radius]
    assert center >= 1 - 1e-10
    others = np.delete(factor.taps, factor.radius)
    assert np.all(others <= 1e-10)


def test_center_tap_sigma1():
    # grid with a bin whose midpoint is exactly 1.0
    grid = make_scale_grid(2.0, 1)
    factor = gaussian_factor_1d(grid, 0, truncation=4.0)
    assert factor.taps[factor.radius] == pytest.approx(CENTER_TAP_SIGMA1, abs=1e-12)


def test_tap_mass_and_truncation_limit():
    grid = make_scale_grid(3.0, 4)
    for k in range(4):
        s = gaussian_factor_1d(grid, k).taps.sum()
        assert 0 < s <= 1 + 1e-9
    # mass approaches 1 as the truncation radius grows
    loose = gaussian_factor_1d(grid, 3, truncation=2.0).taps.sum()
    tight = gaussian_factor_1d(grid, 3, truncation=8.0).taps.sum()
    assert loose < tight
    assert tight == pytest.approx(1.0, abs=1e-12)


def test_palindromic_taps():
    grid = make_scale_grid(3.0, 5)
    for k in range(5):
        taps = gaussian_factor_1d(grid, k).taps
        np.testing.assert_array_equal(taps, taps[::-1])
        assert len(taps) % 2 == 1
        assert np.all(taps >= 0)


def test_bank_radii_monotone():
    bank = build_kernel_bank(make_scale_grid(3.0, 6))
    radii = [f.radius for f in bank.factors]
    assert radii == sorted(radii)


def test_bank_deterministic():
    b1 = build_kernel_bank(make_scale_grid(2.7, 3))
    b2 = build_kernel_bank(make_scale_grid(2.7, 3))
    for f1, f2 in zip(b1.factors, b2.factors):
        assert f1.taps.tobytes() == f2.taps.tobytes()


def test_bad_bin_or_truncation():
    grid = make_scale_grid(1.0, 2)
    with pytest.raises(ValueError):
        gaussian_factor_1d(grid, 2)
    with pytest.raises(ValueError):
        gaussian_factor_1d(grid, 0, truncation=0.0)
