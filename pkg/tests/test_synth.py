import numpy as np
import pytest

from normalmark import codec
from normalmark.matrix import quantize_u8, skew_part, symmetric_part
from normalmark.synth import (
    _walsh_basis,
    blocky_logo,
    conditioned_host,
    gapped_host,
    gaussian_matrix,
    random_u8_image,
    smooth_image,
    smooth_u8_image,
)


def test_generators_are_deterministic():
    assert np.array_equal(random_u8_image(8, 8, 5), random_u8_image(8, 8, 5))
    assert np.array_equal(smooth_u8_image(8, 8, 5), smooth_u8_image(8, 8, 5))
    assert np.array_equal(gaussian_matrix(4, 4, 5), gaussian_matrix(4, 4, 5))
    assert np.array_equal(conditioned_host(16, 5), conditioned_host(16, 5))
    assert np.array_equal(blocky_logo(16, 5), blocky_logo(16, 5))


def test_generators_vary_with_seed():
    assert not np.array_equal(random_u8_image(8, 8, 1), random_u8_image(8, 8, 2))
    assert not np.array_equal(conditioned_host(16, 1), conditioned_host(16, 2))


def test_smooth_image_range():
    img = smooth_image(32, 32, 9)
    assert img.min() >= 0.0 and img.max() <= 255.0
    assert img.max() - img.min() > 100.0  # actually uses the range


def test_walsh_basis_is_orthonormal_and_sequency_ordered():
    b = _walsh_basis(16)
    assert np.allclose(b.T @ b, np.eye(16), atol=1e-12)
    assert np.allclose(b[:, 0], 1.0 / 4.0)  # constant column first
    changes = np.sum(np.abs(np.diff(np.sign(b), axis=0)) > 0, axis=0)
    assert np.all(np.diff(changes) >= 0)


def test_walsh_basis_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        _walsh_basis(12)


def test_gapped_host_spectrum_structure():
    n, m = 24, 6
    host = gapped_host(n, m, 3)
    from normalmark.eigen import eig_sym

    vals = eig_sym(symmetric_part(host)).values
    mags = np.abs(vals)
    # top m+1 slots well separated, tail well below the ladder
    assert np.all(np.diff(mags[: m + 1]) < 0)
    assert mags[m + 1 :].max() < mags[m] / 2.0


def test_gapped_host_requires_room():
    with pytest.raises(ValueError):
        gapped_host(4, 4, 0)


def test_conditioned_host_is_u8_with_interior_range():
    host = conditioned_host(64, 42)
    assert host.dtype == np.uint8
    assert host.min() > 0 and host.max() < 255


def test_conditioned_host_leaves_embedding_headroom():
    # pairing used by the robustness benchmark: embedding must not clip
    for seed in (42, 1, 7):
        x = conditioned_host(64, seed).astype(float)
        w = blocky_logo(32, seed).astype(float)
        y, _ = codec.embed_dual(x, w, 1.0)
        assert y.min() >= 0.0 and y.max() <= 255.0


def test_conditioned_host_mean_near_target():
    host = conditioned_host(64, 11, mean_level=78.0)
    assert abs(host.astype(float).mean() - 78.0) < 6.0


def test_blocky_logo_values_and_rank():
    logo = blocky_logo(32, 8, cell=8, low=235, high=255)
    assert logo.dtype == np.uint8
    assert set(np.unique(logo)) <= {235, 255}
    # kron by a constant cell caps the rank at the coarse side
    assert np.linalg.matrix_rank(logo.astype(float)) <= 4


def test_blocky_logo_rejects_bad_cell():
    with pytest.raises(ValueError):
        blocky_logo(30, 1, cell=8)
