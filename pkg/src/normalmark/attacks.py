"""Deterministic robustness attacks on 8-bit grayscale images.

Every attack maps u8 -> u8, preserves shape, and is pure given (input, spec):
noise kinds draw from a counter-based stream seeded by the spec, so identical
seeds give byte-identical outputs. Window operations replicate edges.
"""

from dataclasses import dataclass

import numpy as np

from .matrix import quantize_u8
from .rng import SplitMix64

FILTER_KINDS = ("median", "gaussian_lp", "average", "wiener")
NOISE_KINDS = ("awgn", "salt_pepper")
ALL_KINDS = FILTER_KINDS + ("jpeg",) + NOISE_KINDS + ("resize", "intensity")

GAUSSIAN_SIGMA = 0.5  # kernel width for gaussian_lp, per 3x3 convention

# standard JPEG luminance quantization table (quality 50 base)
JPEG_LUMA_TABLE = np.array(
    [
        [16, 11, 10, 16, 24, 40, 51, 61],
        [12, 12, 14, 19, 26, 58, 60, 55],
        [14, 13, 16, 24, 40, 57, 69, 56],
        [14, 17, 22, 29, 51, 87, 80, 62],
        [18, 22, 37, 56, 68, 109, 103, 77],
        [24, 35, 55, 64, 81, 104, 113, 92],
        [49, 64, 78, 87, 103, 121, 120, 101],
        [72, 92, 95, 98, 112, 100, 103, 99],
    ],
    dtype=np.int64,
)


@dataclass(frozen=True)
class AttackSpec:
    """One attack invocation; only the fields for the chosen kind matter."""

    kind: str
    window: int = 3
    quality: int = 70
    sigma: float = 5.0
    density: float = 0.01
    intermediate_size: int | None = None
    low_pct: float = 1.0
    high_pct: float = 99.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ALL_KINDS:
            raise ValueError(f"unknown attack kind {self.kind!r}")
        if self.window % 2 == 0 or self.window < 1:
            raise ValueError(f"window must be odd and positive, got {self.window}")


def apply_attack(img, spec):
    """Dispatch an AttackSpec to its implementation."""
    img = _as_u8(img)
    if spec.kind in FILTER_KINDS:
        return filter_attack(img, spec.kind, spec.window)
    if spec.kind == "jpeg":
        return jpeg_attack(img, spec.quality)
    if spec.kind in NOISE_KINDS:
        value = spec.sigma if spec.kind == "awgn" else spec.density
        return noise_attack(img, spec.kind, value, spec.seed)
    if spec.kind == "resize":
        if spec.intermediate_size is None:
            raise ValueError("resize attack needs intermediate_size")
        return resize_attack(img, spec.intermediate_size)
    return intensity_adjust(img, spec.low_pct, spec.high_pct)


def _as_u8(img):
    img = np.asarray(img)
    if img.dtype != np.uint8 or img.ndim != 2:
        raise ValueError(f"attack input must be a 2-D u8 image, got {img.dtype} {img.shape}")
    return img


def _windows(img, window):
    """All window x window neighborhoods, edge-replicated, shape (r, c, w, w)."""
    half = window // 2
    padded = np.pad(img, half, mode="edge")
    return np.lib.stride_tricks.sliding_window_view(padded, (window, window))


def filter_attack(img, kind, window=3):
    """3x3-style local filters: median, gaussian_lp, average, wiener."""
    img = _as_u8(img)
    if kind not in FILTER_KINDS:
        raise ValueError(f"unknown filter kind {kind!r}")
    if window % 2 == 0 or window < 3:
        raise ValueError(f"window must be odd and >= 3, got {window}")
    win = _windows(img, window).astype(np.float64)
    if kind == "median":
        return np.median(win, axis=(2, 3)).astype(np.uint8)
    if kind == "average":
        return quantize_u8(np.mean(win, axis=(2, 3)))
    if kind == "gaussian_lp":
        half = window // 2
        ax = np.arange(-half, half + 1, dtype=np.float64)
        prof = np.exp(-(ax * ax) / (2.0 * GAUSSIAN_SIGMA**2))
        kernel = np.outer(prof, prof)
        kernel /= kernel.sum()
        return quantize_u8(np.einsum("rcij,ij->rc", win, kernel))
    # wiener: local adaptive shrinkage toward the window mean
    mean = np.mean(win, axis=(2, 3))
    var = np.mean(win * win, axis=(2, 3)) - mean * mean
    var = np.maximum(var, 0.0)
    noise = float(np.mean(var))
    den = np.maximum(var, noise)
    gain = np.divide(
        np.maximum(var - noise, 0.0), den, out=np.zeros_like(var), where=den > 0
    )
    return quantize_u8(mean + gain * (img.astype(np.float64) - mean))


def _dct_matrix():
    k = np.arange(8.0)
    u = k[:, None]
    mat = np.cos((2.0 * k + 1.0) * u * np.pi / 16.0)
    mat[0, :] *= np.sqrt(1.0 / 8.0)
    mat[1:, :] *= 0.5
    return mat


_DCT8 = _dct_matrix()


def _round_half_away(x):
    return np.trunc(x + np.copysign(0.5, x))


def jpeg_quant_table(quality):
    """Luminance table scaled for a quality setting, clamped to [1, 255]."""
    if not 1 <= quality <= 100:
        raise ValueError(f"quality must be in 1..100, got {quality}")
    s = 5000 // quality if quality < 50 else 200 - 2 * quality
    return np.clip((JPEG_LUMA_TABLE * s + 50) // 100, 1, 255).astype(np.float64)


def jpeg_attack(img, quality):
    """DCT + quantization core of baseline JPEG (entropy coding is lossless)."""
    img = _as_u8(img)
    table = jpeg_quant_table(quality)
    rows, cols = img.shape
    pr = (-rows) % 8
    pc = (-cols) % 8
    work = np.pad(img, ((0, pr), (0, pc)), mode="edge").astype(np.float64) - 128.0
    h8, w8 = work.shape[0] // 8, work.shape[1] // 8
    blocks = work.reshape(h8, 8, w8, 8).transpose(0, 2, 1, 3)
    coef = np.einsum("ij,bcjk,lk->bcil", _DCT8, blocks, _DCT8)
    coef = _round_half_away(coef / table) * table
    # undo the transform: D^T coef D blockwise
    pixels = np.einsum("ji,bcjk,kl->bcil", _DCT8, coef, _DCT8)
    out = pixels.transpose(0, 2, 1, 3).reshape(h8 * 8, w8 * 8) + 128.0
    return quantize_u8(out[:rows, :cols])


def noise_attack(img, kind, value, seed):
    """Seeded additive Gaussian noise or salt-and-pepper impulses."""
    img = _as_u8(img)
    rng = SplitMix64(seed)
    if kind == "awgn":
        if value < 0:
            raise ValueError(f"awgn sigma must be >= 0, got {value}")
        if value == 0:
            return img.copy()
        noise = value * rng.gaussian(img.size).reshape(img.shape)
        return quantize_u8(img.astype(np.float64) + noise)
    if kind == "salt_pepper":
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"density must be in [0, 1], got {value}")
        out = img.copy().reshape(-1)
        hit = rng.uniform(out.size) < value
        count = int(np.count_nonzero(hit))
        if count:
            salt = (rng.next_raw(count) & np.uint64(1)).astype(bool)
            out[hit] = np.where(salt, 255, 0).astype(np.uint8)
        return out.reshape(img.shape)
    raise ValueError(f"unknown noise kind {kind!r}")


def _resize_axis(arr, new_len, axis):
    """Bilinear resample along one axis with pixel-center alignment."""
    old_len = arr.shape[axis]
    scale = old_len / new_len
    src = (np.arange(new_len) + 0.5) * scale - 0.5
    base = np.floor(src)
    frac = src - base
    lo = np.clip(base, 0, old_len - 1).astype(np.intp)
    hi = np.clip(base + 1, 0, old_len - 1).astype(np.intp)
    a = np.take(arr, lo, axis=axis)
    b = np.take(arr, hi, axis=axis)
    shape = [1] * arr.ndim
    shape[axis] = new_len
    t = frac.reshape(shape)
    return a * (1.0 - t) + b * t


def bilinear_resize(img, rows, cols):
    out = _resize_axis(np.asarray(img, dtype=np.float64), rows, 0)
    out = _resize_axis(out, cols, 1)
    return quantize_u8(out)


def resize_attack(img, intermediate_size):
    """Scale to an intermediate square-ish size and back, bilinear both ways."""
    img = _as_u8(img)
    if intermediate_size < 2:
        raise ValueError(f"intermediate_size must be >= 2, got {intermediate_size}")
    rows, cols = img.shape
    mid_rows = intermediate_size
    mid_cols = max(2, round(cols * intermediate_size / rows))
    mid = bilinear_resize(img, mid_rows, mid_cols)
    return bilinear_resize(mid, rows, cols)


def _nearest_rank(sorted_values, pct):
    n = sorted_values.size
    k = max(1, int(np.ceil(pct / 100.0 * n)))
    return float(sorted_values[min(k, n) - 1])


def intensity_adjust(img, low_pct=1.0, high_pct=99.0):
    """Contrast stretch: map the low/high percentiles to 0/255, clamped."""
    img = _as_u8(img)
    if low_pct >= high_pct:
        raise ValueError(f"need low_pct < high_pct, got {low_pct} >= {high_pct}")
    flat = np.sort(img, axis=None)
    lo = _nearest_rank(flat, low_pct)
    hi = _nearest_rank(flat, high_pct)
    if hi <= lo:
        return img.copy()
    stretched = (img.astype(np.float64) - lo) * (255.0 / (hi - lo))
    return quantize_u8(stretched)


def benchmark_battery(size, seed):
    """The standard robustness battery: (attack_id, AttackSpec) pairs.

    Mirrors the usual evaluation set: 3x3 filters, two JPEG qualities, seeded
    noise, down/up resize chains, and a contrast stretch.
    """
    down = max(2, (3 * size) // 4)
    up = 2 * size
    return [
        ("median", AttackSpec(kind="median")),
        ("gaussian_lp", AttackSpec(kind="gaussian_lp")),
        ("average", AttackSpec(kind="average")),
        ("wiener", AttackSpec(kind="wiener")),
        ("jpeg70", AttackSpec(kind="jpeg", quality=70)),
        ("jpeg50", AttackSpec(kind="jpeg", quality=50)),
        ("awgn", AttackSpec(kind="awgn", sigma=5.0, seed=seed)),
        ("salt_pepper", AttackSpec(kind="salt_pepper", density=0.01, seed=seed)),
        ("resize_down", AttackSpec(kind="resize", intermediate_size=down)),
        ("resize_up", AttackSpec(kind="resize", intermediate_size=up)),
        ("intensity", AttackSpec(kind="intensity")),
    ]
