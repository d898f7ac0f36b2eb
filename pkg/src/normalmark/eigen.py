"""Eigendecomposition of symmetric and skew-symmetric real matrices, plus an SVD.

Everything is built on one dtype-generic cyclic Jacobi kernel. Pivot pairs are
visited in round-robin (tournament) order so that each round holds n/2 disjoint
pivots, which lets the 2x2 rotations of a round be applied as one vectorized
update; a sweep still visits every off-diagonal pair exactly once, so classical
cyclic-Jacobi convergence applies unchanged.

Skew-symmetric matrices are routed through the Hermitian transform H = iC and a
complex Jacobi, then the purely imaginary spectrum is re-paired canonically.

Decompositions are deterministic: fixed pivot order, fixed tie-breaking, fixed
eigenvector sign/phase normalization.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .matrix import as_matrix, check_skew, check_symmetric

DEFAULT_TOL = 1e-12
DEFAULT_MAX_SWEEPS = 64


class ConvergenceError(RuntimeError):
    """Jacobi iteration failed to reach the requested off-diagonal norm."""

    def __init__(self, achieved, required, sweeps):
        self.achieved = achieved
        self.required = required
        self.sweeps = sweeps
        super().__init__(
            f"no convergence after {sweeps} sweeps: off-diagonal norm "
            f"{achieved:.3e} > required {required:.3e}"
        )


@dataclass(frozen=True)
class SymEigen:
    """Eigendecomposition of a real symmetric matrix, canonically ordered."""

    values: np.ndarray   # n reals, |values| non-ascending
    vectors: np.ndarray  # n x n real orthogonal, columns are eigenvectors


@dataclass(frozen=True)
class SkewEigen:
    """Eigendecomposition of a real skew matrix: eigenvalues i*imag_values."""

    imag_values: np.ndarray  # n reals in conjugate pairs (+b, -b), |b| non-ascending
    vectors: np.ndarray      # n x n complex unitary


@dataclass(frozen=True)
class SvdResult:
    u: np.ndarray  # n x n real orthogonal
    s: np.ndarray  # n non-negative reals, non-increasing
    v: np.ndarray  # n x n real orthogonal


@lru_cache(maxsize=32)
def _tournament_rounds(n):
    """Round-robin schedule: n-1 rounds of disjoint index pairs covering all pairs."""
    m = n if n % 2 == 0 else n + 1
    rounds = []
    for r in range(m - 1):
        layout = [(r + i) % (m - 1) for i in range(m - 1)] + [m - 1]
        pairs = []
        for i in range(m // 2):
            a, b = layout[i], layout[m - 1 - i]
            if a < n and b < n:
                pairs.append((min(a, b), max(a, b)))
        if pairs:
            arr = np.array(pairs, dtype=np.intp)
            rounds.append((arr[:, 0].copy(), arr[:, 1].copy()))
    return tuple(rounds)


def _offdiag_norm(a):
    # direct masked norm: the ||A||^2 - ||diag||^2 form cancels catastrophically
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return np.linalg.norm(off)


def _jacobi(a, tol, max_sweeps):
    """Diagonalize a (real symmetric or complex Hermitian) in place.

    Returns (real eigenvalues, accumulated rotation matrix V) with a @ V = V @ diag.
    """
    n = a.shape[0]
    v = np.eye(n, dtype=a.dtype)
    norm0 = np.linalg.norm(a)
    if n < 2 or norm0 == 0.0:
        return np.real(np.diag(a)).copy(), v
    required = tol * norm0
    rounds = _tournament_rounds(n)
    for _ in range(max_sweeps):
        if _offdiag_norm(a) <= required:
            break
        for p_all, q_all in rounds:
            apq = a[p_all, q_all]
            active = np.abs(apq) > 0.0
            if not active.any():
                continue
            p, q, h = p_all[active], q_all[active], apq[active]
            app = np.real(a[p, p])
            aqq = np.real(a[q, q])
            mag = np.abs(h)
            phase = h / mag
            tau = (aqq - app) / (2.0 * mag)
            # tau*tau may overflow to inf for extreme ratios; the limit t -> 0
            # is the right rotation there, so only the warning is suppressed
            with np.errstate(over="ignore"):
                t = np.sign(tau) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t = np.where(tau == 0.0, 1.0, t)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            sp = s * phase
            spc = np.conj(sp)
            # disjoint pairs: all rotations of a round commute, apply at once
            cp = a[:, p].copy()
            cq = a[:, q].copy()
            a[:, p] = c * cp - spc * cq
            a[:, q] = sp * cp + c * cq
            rp = a[p, :].copy()
            rq = a[q, :].copy()
            a[p, :] = c[:, None] * rp - sp[:, None] * rq
            a[q, :] = spc[:, None] * rp + c[:, None] * rq
            vp = v[:, p].copy()
            vq = v[:, q].copy()
            v[:, p] = c * vp - spc * vq
            v[:, q] = sp * vp + c * vq
    else:
        achieved = _offdiag_norm(a)
        if achieved > required:
            raise ConvergenceError(achieved, required, max_sweeps)
    return np.real(np.diag(a)).copy(), v


def _fix_sign_real(vectors):
    """Flip column signs so each column's largest-magnitude entry is positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    picked = vectors[idx, np.arange(vectors.shape[1])]
    flip = np.where(picked < 0.0, -1.0, 1.0)
    return vectors * flip


def _fix_phase_column(col):
    """Rotate a complex column so its largest-magnitude entry is positive real."""
    k = int(np.argmax(np.abs(col)))
    pivot = col[k]
    mag = abs(pivot)
    if mag == 0.0:
        return col
    return col * (np.conj(pivot) / mag)


def canonicalize(values, vectors=None):
    """Canonical symmetric ordering: |value| descending, ties by signed value
    descending, then by original index; eigenvector signs fixed."""
    values = np.asarray(values, dtype=np.float64)
    order = np.lexsort((np.arange(values.size), -values, -np.abs(values)))
    ordered = values[order]
    if vectors is None:
        return ordered
    return ordered, _fix_sign_real(np.asarray(vectors)[:, order])


def canonicalize_skew(imag_values, vectors, zero_tol):
    """Canonical skew ordering: conjugate pairs (+b, -b) adjacent, positive slot
    first, pairs by |b| descending; negative-slot vectors are the conjugates of
    their positive partners; near-zero values become an explicit real
    orthonormal basis of the null space."""
    b = np.asarray(imag_values, dtype=np.float64)
    vecs = np.asarray(vectors, dtype=np.complex128)
    n = b.size
    pos = [i for i in np.argsort(-b, kind="stable") if b[i] > zero_tol]
    neg = [i for i in np.argsort(b, kind="stable") if b[i] < -zero_tol]
    npairs = min(len(pos), len(neg))
    out_b = np.zeros(n)
    out_v = np.zeros((n, n), dtype=np.complex128)
    for k in range(npairs):
        i, j = pos[k], neg[k]
        bhat = (b[i] - b[j]) / 2.0
        col = _fix_phase_column(vecs[:, i])
        out_b[2 * k] = bhat
        out_b[2 * k + 1] = -bhat
        out_v[:, 2 * k] = col
        out_v[:, 2 * k + 1] = np.conj(col)
    # everything else spans the null space; give it a real orthonormal basis
    filled = 2 * npairs
    if filled < n:
        leftover = [i for i in range(n) if i not in set(pos[:npairs]) | set(neg[:npairs])]
        cands = []
        for i in leftover:
            cands.append(np.real(vecs[:, i]))
            cands.append(np.imag(vecs[:, i]))
        cands.extend(np.eye(n)[:, i] for i in range(n))  # fallback completions
        k = filled
        for cand in cands:
            if k == n:
                break
            w = cand.astype(np.float64).copy()
            w -= out_v[:, :k].real @ (out_v[:, :k].real.T @ w)
            w -= out_v[:, :k].imag @ (out_v[:, :k].imag.T @ w)
            nrm = np.linalg.norm(w)
            if nrm > 1e-6:
                w /= nrm
                if w[np.argmax(np.abs(w))] < 0.0:
                    w = -w
                out_v[:, k] = w
                k += 1
    return out_b, out_v


def eig_sym(s, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS):
    """Eigendecomposition of a real symmetric matrix with canonical ordering."""
    s = check_symmetric(s)
    a = (s + s.T) / 2.0  # exact-symmetry hygiene before iterating
    values, vectors = _jacobi(a, tol, max_sweeps)
    values, vectors = canonicalize(values, vectors)
    return SymEigen(values=values, vectors=vectors)


def eig_skew(c, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS):
    """Eigendecomposition of a real skew matrix via the Hermitian transform H = iC.

    Eigenvalues of C are i*b with b real; H = iC has real eigenvalues mu = -b.
    """
    c = check_skew(c)
    c = (c - c.T) / 2.0
    h = 1j * c.astype(np.complex128)
    mu, vectors = _jacobi(h, tol, max_sweeps)
    zero_tol = max(tol * np.linalg.norm(c), 0.0)
    imag_values, vectors = canonicalize_skew(-mu, vectors, zero_tol)
    return SkewEigen(imag_values=imag_values, vectors=vectors)


def svd(a, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS):
    """SVD of a square real matrix via the eigendecomposition of A^T A.

    s_k = sqrt(max(0, eig_k)); U columns are A v_k / s_k for s_k above the rank
    tolerance 1e-12 * s_1, re-orthonormalized; remaining columns are completed
    to an orthonormal basis by Gram-Schmidt.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"svd: matrix must be square, got {a.shape}")
    n = a.shape[0]
    gram = eig_sym(a.T @ a, tol=tol, max_sweeps=max_sweeps)
    s = np.sqrt(np.maximum(gram.values, 0.0))
    v = gram.vectors
    rank_tol = 1e-12 * (s[0] if n else 0.0)
    u = np.zeros((n, n))
    pending = []
    for k in range(n):
        if s[k] > rank_tol:
            col = a @ v[:, k] / s[k]
            col -= u[:, :k] @ (u[:, :k].T @ col)
            nrm = np.linalg.norm(col)
            if nrm > 0.5:
                u[:, k] = col / nrm
                continue
        pending.append(k)
        s[k] = 0.0 if s[k] <= rank_tol else s[k]
    if pending:
        cands = iter(np.eye(n).T)
        for k in pending:
            for cand in cands:
                w = cand - u @ (u.T @ cand)
                nrm = np.linalg.norm(w)
                if nrm > 0.5:
                    w /= nrm
                    if w[np.argmax(np.abs(w))] < 0.0:
                        w = -w
                    u[:, k] = w
                    break
    return SvdResult(u=u, s=s, v=v)
