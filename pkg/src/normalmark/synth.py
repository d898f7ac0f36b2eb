"""Seeded synthetic images and matrices for tests, benchmarks, and demos.

Everything draws from the package's own counter-based stream, so fixtures are
identical across platforms and sessions. Substreams are derived per purpose:
the same seed never feeds two generators.
"""

import numpy as np

from .matrix import quantize_u8, skew_part
from .rng import SplitMix64, mix_seed


def gaussian_matrix(rows, cols, seed, scale=1.0):
    """Matrix of independent N(0, scale^2) entries."""
    rng = SplitMix64(seed)
    return scale * rng.gaussian(rows * cols).reshape(rows, cols)


def random_u8_image(rows, cols, seed):
    """Uniformly random 8-bit image."""
    rng = SplitMix64(seed)
    levels = np.floor(rng.uniform(rows * cols) * 256.0)
    return np.clip(levels, 0, 255).astype(np.uint8).reshape(rows, cols)


def smooth_image(rows, cols, seed, waves=6):
    """Low-frequency cosine mixture spanning [0, 255]; natural-image-like."""
    rng = SplitMix64(seed)
    y, x = np.mgrid[0:rows, 0:cols].astype(np.float64)
    field = np.zeros((rows, cols))
    for k in range(waves):
        fy = 0.5 + 2.5 * rng.uniform(1)[0]
        fx = 0.5 + 2.5 * rng.uniform(1)[0]
        phase = 2.0 * np.pi * rng.uniform(1)[0]
        field += (1.0 / (k + 1.0)) * np.cos(
            2.0 * np.pi * (fy * y / rows + fx * x / cols) + phase
        )
    lo, hi = field.min(), field.max()
    if hi <= lo:
        return np.full((rows, cols), 128.0)
    # the division can overshoot 255 by an ulp; keep the documented range exact
    return np.clip(255.0 * (field - lo) / (hi - lo), 0.0, 255.0)


def smooth_u8_image(rows, cols, seed, waves=6):
    return quantize_u8(smooth_image(rows, cols, seed, waves))


def _random_orthogonal(n, seed):
    g = gaussian_matrix(n, n, seed)
    q, r = np.linalg.qr(g)
    return q * np.where(np.diag(r) < 0.0, -1.0, 1.0)


def gapped_host(n, m, seed, gap=10000.0):
    """Unquantized host whose symmetric spectrum has engineered gaps.

    The top m+1 symmetric eigenvalue magnitudes are spaced gap apart, far above
    a small tail, so adding watermark spectra (u8-scale, alpha <= 2) into the
    top m slots provably cannot reorder the spectrum. The skew part needs no
    engineering: paired magnitudes stay sorted under any aligned addition.
    """
    if m + 1 > n:
        raise ValueError(f"gapped_host: need m + 1 <= n, got m={m}, n={n}")
    q = _random_orthogonal(n, mix_seed(seed, 1))
    rng = SplitMix64(mix_seed(seed, 2))
    mags = np.empty(n)
    mags[: m + 1] = gap * np.arange(m + 2, 1, -1.0)
    mags[m + 1 :] = gap / 5.0 * rng.uniform(n - m - 1)
    signs = np.where(rng.uniform(n) < 0.5, -1.0, 1.0)
    sym = (q * (signs * mags)) @ q.T
    sym = (sym + sym.T) / 2.0
    skew = skew_part(gaussian_matrix(n, n, mix_seed(seed, 3), scale=gap / 10.0))
    return sym + skew


def _walsh_basis(n):
    """Orthonormal Hadamard columns in sequency order (power-of-two n)."""
    if n < 1 or n & (n - 1):
        raise ValueError(f"walsh basis needs a power-of-two size, got {n}")
    h = np.array([[1.0]])
    while h.shape[0] < n:
        h = np.block([[h, h], [h, -h]])
    changes = np.sum(np.abs(np.diff(np.sign(h), axis=0)) > 0, axis=0)
    return h[:, np.argsort(changes, kind="stable")] / np.sqrt(n)


def conditioned_host(n, seed, payload_slots=4, gap=560.0, mean_level=78.0,
                     pair_gap=400.0, roughness=0.05):
    """u8 host conditioned for spectral stability under mild attacks.

    Both parts are built on low-sequency Walsh directions. Those vectors have
    flat +-1/sqrt(n) profiles, so an eigenvalue lambda costs exactly lambda/n
    gray levels per pixel: the engineered gaps can be far larger than random
    directions would allow inside the 8-bit range. They are also piecewise
    constant across 8x8 blocks, which keeps block-transform attacks from
    dumping their full error norm into the protected slots.

    The symmetric spectrum is a dominant slot on the constant direction (the
    mean gray level), then payload_slots - 1 slots spaced gap apart, then a
    small random tail. The skew spectrum is one strong pair at pair_gap over a
    weak random tail. Slotwise extraction stays aligned as long as the
    watermark's spectral spread plus attack-induced shifts stay below the
    gaps, so keep the watermark's rank at or below payload_slots (see
    blocky_logo).

    The defaults keep pixels well inside [0, 255] both here and after a
    faint-logo embedding lifts the mean: clipping is a large non-linear
    spectral perturbation and would defeat the conditioning.

    The constant direction is roughened by a small random component. With an
    exactly piecewise-constant basis the embedding delta repeats the same
    fractional value across whole cells, so rounding to u8 makes a structured
    error that projects coherently into the protected slots; a few levels of
    jitter on the dominant slot decorrelates the rounding.
    """
    basis = _walsh_basis(n)
    jitter = gaussian_matrix(n, 1, mix_seed(seed, 31), scale=roughness / np.sqrt(n))
    cols = basis.copy()
    # clipped tails: the dominant slot pays jitter^2 * n * mean_level in gray
    # levels at the worst pixel, so unbounded gaussians would clip there
    cols[:, 0] += np.clip(jitter[:, 0], -2.0 * roughness / np.sqrt(n),
                          2.0 * roughness / np.sqrt(n))
    basis, r = np.linalg.qr(cols)
    basis = basis * np.where(np.diag(r) < 0.0, -1.0, 1.0)
    rng = SplitMix64(mix_seed(seed, 32))
    vals = np.zeros(n)
    vals[0] = n * mean_level
    for k in range(1, payload_slots):
        vals[k] = gap * (payload_slots - k)
    # all one sign: near-equal magnitudes of opposite sign sit adjacent in
    # magnitude order, and any noise-driven swap would cost their full sum
    vals[payload_slots:] = gap / 12.5 * rng.uniform(n - payload_slots)
    sym = (basis * vals) @ basis.T
    pairs = (n - 1) // 2  # columns 1 .. 2*pairs, never the constant column
    pair_mags = np.empty(pairs)
    pair_mags[0] = pair_gap
    pair_mags[1:] = pair_gap / 20.0 * rng.uniform(pairs - 1)
    skew = np.zeros((n, n))
    for j, b in enumerate(pair_mags):
        a_vec = basis[:, 2 * j + 1]
        b_vec = basis[:, 2 * j + 2]
        skew += b * (np.outer(a_vec, b_vec) - np.outer(b_vec, a_vec))
    return quantize_u8(sym + skew)


def blocky_logo(m, seed, cell=8, low=235, high=255):
    """Faint two-level logo: a coarse random pattern expanded by a square cell.

    The expansion keeps the rank low: an m/cell-sided pattern gives spectral
    rank at most m/cell, which is what conditioned_host can protect.
    """
    if m % cell != 0:
        raise ValueError(f"blocky_logo: cell {cell} does not divide side {m}")
    coarse = m // cell
    rng = SplitMix64(mix_seed(seed, 21))
    pattern = np.where(rng.uniform(coarse * coarse) < 0.5, low, high)
    grid = pattern.reshape(coarse, coarse)
    return np.kron(grid, np.ones((cell, cell))).astype(np.uint8)
