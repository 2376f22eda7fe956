import numpy as np
import pytest

from spotdeconv.kernels import build_kernel_bank, make_scale_grid
from spotdeconv.synth import SceneSpec, generate_scene, render_observation
from spotdeconv.convolution import forward


def _spec(**kw):
    base = dict(
        rows=32, cols=32, depth=3, n_sources=5, min_separation=4.0,
        amplitude_lo=1.0, amplitude_hi=2.0, noise_sigma=0.0, seed=7,
    )
    base.update(kw)
    return SceneSpec(**base)


def test_zero_sources():
    a, gt = generate_scene(_spec(n_sources=0))
    assert np.all(a == 0)
    assert gt == []


def test_deterministic_for_fixed_seed():
    a1, gt1 = generate_scene(_spec())
    a2, gt2 = generate_scene(_spec())
    assert a1.tobytes() == a2.tobytes()
    assert gt1 == gt2


def test_pairwise_separation():
    spec = _spec(n_sources=8, min_separation=6.0)
    _, gt = generate_scene(spec)
    for i in range(len(gt)):
        for j in range(i + 1, len(gt)):
            d = np.hypot(gt[i][0] - gt[j][0], gt[i][1] - gt[j][1])
            assert d >= spec.min_separation


def test_source_count_and_amplitudes():
    spec = _spec()
    a, gt = generate_scene(spec)
    assert len(gt) == spec.n_sources
    nz = np.nonzero(a)
    assert len(set(zip(nz[0], nz[1]))) == spec.n_sources
    assert np.all(a[nz] >= spec.amplitude_lo)
    assert np.all(a[nz] <= spec.amplitude_hi)


def test_scale_profile():
    spec = _spec(n_sources=2, scale_profile=[0.5, 0.3, 0.2])
    a, gt = generate_scene(spec)
    for r, c in gt:
        vec = a[int(r), int(c), :]
        np.testing.assert_allclose(vec / vec.sum(), [0.5, 0.3, 0.2])


def test_infeasible_placement_raises():
    with pytest.raises(RuntimeError, match="could not place"):
        generate_scene(_spec(rows=4, cols=4, n_sources=10, min_separation=10.0))


def test_render_noise_free():
    bank = build_kernel_bank(make_scale_grid(2.0, 3))
    a, _ = generate_scene(_spec())
    d = render_observation(a, bank, 0.0, seed=1)
    np.testing.assert_array_equal(d, forward(a, bank))


def test_render_zero_scene():
    bank = build_kernel_bank(make_scale_grid(2.0, 3))
    d = render_observation(np.zeros((8, 8, 3)), bank, 0.0, seed=1)
    assert np.all(d == 0)


def test_noise_mean_law_of_large_numbers():
    bank = build_kernel_bank(make_scale_grid(2.0, 1))
    a = np.zeros((100, 100, 1))
    sigma = 0.5
    d = render_observation(a, bank, sigma, seed=99)
    assert abs(np.mean(d)) <= 3 * sigma / 100


def test_spec_validation():
    with pytest.raises(ValueError):
        _spec(min_separation=0.5)
    with pytest.raises(ValueError):
        _spec(amplitude_lo=2.0, amplitude_hi=1.0)
    with pytest.raises(ValueError):
        _spec(noise_sigma=-0.1)
