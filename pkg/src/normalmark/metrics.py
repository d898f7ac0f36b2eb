"""Fidelity and robustness metrics over images and extracted marks."""

import numpy as np

from .matrix import quantize_u8


def mse(a, b):
    """Mean squared error between two equal-shaped arrays, in float64."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"mse: shape mismatch {a.shape} vs {b.shape}")
    d = a - b
    return float(np.mean(d * d))


def psnr(reference, test, peak=255.0):
    """Peak signal-to-noise ratio in dB; +inf when the inputs are identical."""
    err = mse(reference, test)
    if err == 0.0:
        return float("inf")
    return float(10.0 * np.log10(peak * peak / err))


def ber(reference_bits, test_bits):
    """Bit error rate between two equal-shaped u8 images, as a percent in [0, 100].

    Arrays are quantized to u8 if not already, unpacked to 8 bits per pixel,
    and 100 * (differing bit positions) / (total bit positions) is returned.
    """
    a = _to_u8(reference_bits)
    b = _to_u8(test_bits)
    if a.shape != b.shape:
        raise ValueError(f"ber: shape mismatch {a.shape} vs {b.shape}")
    bits_a = np.unpackbits(a.reshape(-1))
    bits_b = np.unpackbits(b.reshape(-1))
    return float(100.0 * np.mean(bits_a != bits_b))


def _to_u8(img):
    img = np.asarray(img)
    if img.dtype == np.uint8:
        return img
    return quantize_u8(np.asarray(img, dtype=np.float64))
