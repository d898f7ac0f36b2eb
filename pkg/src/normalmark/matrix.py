"""Dense matrix plumbing: symmetric/skew splitting, triangle reconstruction, quantization.

Matrices are float64 numpy arrays; 8-bit images are uint8 arrays. Images are
converted u8 -> float64 on ingestion because the eigen-based embedding is
meaningless at integer precision.
"""

import numpy as np


def as_matrix(data):
    """Validate and return a finite float64 matrix."""
    m = np.asarray(data, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if not np.isfinite(m).all():
        raise ValueError("matrix contains NaN or Inf")
    return m


def _require_square(m, who):
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{who}: matrix must be square, got {m.shape}")


def symmetric_part(m):
    """B = (M + M^T)/2."""
    m = as_matrix(m)
    _require_square(m, "symmetric_part")
    return (m + m.T) / 2.0


def skew_part(m):
    """C = (M - M^T)/2."""
    m = as_matrix(m)
    _require_square(m, "skew_part")
    return (m - m.T) / 2.0


def check_symmetric(b, rtol=1e-12):
    b = as_matrix(b)
    _require_square(b, "check_symmetric")
    scale = np.linalg.norm(b)
    if np.linalg.norm(b - b.T) > rtol * max(scale, 1.0):
        raise ValueError("matrix is not symmetric within tolerance")
    return b


def check_skew(c, rtol=1e-12):
    c = as_matrix(c)
    _require_square(c, "check_skew")
    scale = np.linalg.norm(c)
    if np.linalg.norm(c + c.T) > rtol * max(scale, 1.0):
        raise ValueError("matrix is not skew-symmetric within tolerance")
    return c


def upper_strict(m):
    """Strict upper triangle as a row-major vector (n(n-1)/2 values)."""
    m = as_matrix(m)
    _require_square(m, "upper_strict")
    return m[np.triu_indices(m.shape[0], 1)]


def upper_with_diag(m):
    """Upper triangle including the diagonal, row-major (n(n+1)/2 values)."""
    m = as_matrix(m)
    _require_square(m, "upper_with_diag")
    return m[np.triu_indices(m.shape[0], 0)]


def reconstruct_from_sym(b_y, upper_ref):
    """Rebuild Y from its symmetric part, keeping a reference strict upper triangle.

    2*B_Y = Y + Y^T pins the lower triangle once the upper is fixed:
    Y_ij = ref_ij (i<j), Y_ii = (B_Y)_ii, Y_ji = 2*(B_Y)_ij - ref_ij.
    """
    b_y = check_symmetric(b_y)
    n = b_y.shape[0]
    ref = np.asarray(upper_ref, dtype=np.float64).reshape(-1)
    if ref.size != n * (n - 1) // 2:
        raise ValueError(f"upper_ref must have {n*(n-1)//2} values, got {ref.size}")
    iu = np.triu_indices(n, 1)
    y = np.zeros((n, n))
    y[iu] = ref
    y[np.diag_indices(n)] = b_y[np.diag_indices(n)]
    y[(iu[1], iu[0])] = 2.0 * b_y[iu] - ref
    return y


def reconstruct_from_skew(c_y, upper_diag_ref):
    """Rebuild Y from its skew part, keeping a reference upper triangle plus diagonal.

    2*C_Y = Y - Y^T gives Y_ji = ref_ij - 2*(C_Y)_ij for i<j; diagonal kept.
    """
    c_y = check_skew(c_y)
    n = c_y.shape[0]
    ref = np.asarray(upper_diag_ref, dtype=np.float64).reshape(-1)
    if ref.size != n * (n + 1) // 2:
        raise ValueError(f"upper_diag_ref must have {n*(n+1)//2} values, got {ref.size}")
    y = np.zeros((n, n))
    y[np.triu_indices(n, 0)] = ref
    iu = np.triu_indices(n, 1)
    y[(iu[1], iu[0])] = y[iu] - 2.0 * c_y[iu]
    return y


def quantize_u8(m):
    """Round half-away-from-zero, clamp to [0, 255], return uint8."""
    m = np.asarray(m, dtype=np.float64)
    rounded = np.trunc(m + np.copysign(0.5, m))
    return np.clip(rounded, 0.0, 255.0).astype(np.uint8)
