"""Watermarking via eigendecomposition of the normal parts of images.

A grayscale image, viewed as a real square matrix, splits into a symmetric and
a skew-symmetric part; both are normal, so each has a full orthonormal
eigenbasis. The toolkit hides a watermark's spectrum inside the host's spectra
(three variants, plus an SVD baseline), recovers it with a key, and measures
robustness under a deterministic attack battery.
"""

from .attacks import AttackSpec, apply_attack, benchmark_battery
from .codec import (
    METHOD_DUAL,
    METHOD_SKEW,
    METHOD_SVD,
    METHOD_SYM,
    EmbedConfig,
    ExtractResult,
    PairingError,
    WatermarkKey,
    block_embed,
    block_extract,
    embed,
    embed_dual,
    embed_skew,
    embed_svd,
    embed_sym,
    extract,
    extract_dual,
    extract_skew,
    extract_svd,
    extract_sym,
    pad_spectrum,
)
from .eigen import ConvergenceError, SkewEigen, SvdResult, SymEigen, eig_skew, eig_sym, svd
from .imageio import (
    FormatError,
    read_float_image,
    read_key,
    read_keys,
    read_pgm,
    write_float_image,
    write_key,
    write_keys,
    write_pgm,
)
from .matrix import (
    quantize_u8,
    reconstruct_from_skew,
    reconstruct_from_sym,
    skew_part,
    symmetric_part,
)
from .metrics import ber, mse, psnr
from .rng import SplitMix64, mix_seed

__version__ = "0.1.0"

__all__ = [
    "AttackSpec",
    "ConvergenceError",
    "EmbedConfig",
    "ExtractResult",
    "FormatError",
    "METHOD_DUAL",
    "METHOD_SKEW",
    "METHOD_SVD",
    "METHOD_SYM",
    "PairingError",
    "SkewEigen",
    "SplitMix64",
    "SvdResult",
    "SymEigen",
    "WatermarkKey",
    "apply_attack",
    "benchmark_battery",
    "ber",
    "block_embed",
    "block_extract",
    "eig_skew",
    "eig_sym",
    "embed",
    "embed_dual",
    "embed_skew",
    "embed_svd",
    "embed_sym",
    "extract",
    "extract_dual",
    "extract_skew",
    "extract_svd",
    "extract_sym",
    "mix_seed",
    "mse",
    "pad_spectrum",
    "psnr",
    "quantize_u8",
    "read_float_image",
    "read_key",
    "read_keys",
    "read_pgm",
    "reconstruct_from_skew",
    "reconstruct_from_sym",
    "skew_part",
    "svd",
    "symmetric_part",
    "write_float_image",
    "write_key",
    "write_keys",
    "write_pgm",
    "__version__",
]
