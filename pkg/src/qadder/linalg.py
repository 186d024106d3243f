"""Dense complex linear algebra for small qubit registers.

Matrices are plain ``numpy`` arrays of dtype complex128. Everything here is a
pure function of its inputs; random generators take an explicit seed.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
CLAMP_TOL = 1e-10
NEGATIVE_EIG_LIMIT = 1e-8
MAX_DIM = 2**16


class NotHermitianError(ValueError):
    pass


class NotAStateError(ValueError):
    pass


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def hermitian_deviation(h: np.ndarray) -> float:
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def check_density(rho, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``rho`` as an array after checking it is a density matrix."""
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise NotAStateError(f"density matrix must be square, got {rho.shape}")
    dev = hermitian_deviation(rho)
    if dev > tol:
        raise NotAStateError(f"not Hermitian (max deviation {dev:.3e})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise NotAStateError(f"trace is {tr!r}, expected 1")
    lo = np.linalg.eigvalsh(rho).min()
    if lo < -CLAMP_TOL:
        raise NotAStateError(f"minimum eigenvalue {lo:.3e} is negative")
    return rho


def check_pure(v, tol: float = 1e-12) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > tol:
        raise NotAStateError(f"state vector has norm {norm!r}")
    return v


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    return np.outer(v, v.conj())


def kron(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if rows > MAX_DIM or cols > MAX_DIM:
        raise ValueError(f"kron result {rows}x{cols} exceeds the {MAX_DIM} cap")
    return np.kron(a, b)


def kron_all(*factors) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for f in factors:
        out = kron(out, f)
    return out


def ket(bits: str) -> np.ndarray:
    """Computational basis vector for a big-endian bit string such as ``'010'``."""
    v = np.zeros(2 ** len(bits), dtype=np.complex128)
    v[int(bits, 2) if bits else 0] = 1.0
    return v


def hermitian_eigensystem(h, tol: float = HERMITIAN_TOL):
    """Eigenvalues in ascending order and orthonormal eigenvectors as columns."""
    h = as_matrix(h)
    dev = hermitian_deviation(h)
    if dev > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    # symmetrize so LAPACK sees exactly Hermitian input
    return np.linalg.eigh((h + h.conj().T) / 2)


def _clamped_spectrum(rho) -> np.ndarray:
    w = np.linalg.eigvalsh(rho)
    if w.min(initial=0.0) < -NEGATIVE_EIG_LIMIT:
        raise NotAStateError(f"eigenvalue {w.min():.3e} below {-NEGATIVE_EIG_LIMIT}")
    return w.clip(min=0.0)


def entropy_of_spectrum(w) -> float:
    w = np.asarray(w, dtype=float)
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w))) if w.size else 0.0


def von_neumann_entropy(rho) -> float:
    """Entropy in bits, treating eigenvalues in [-1e-10, 0] as exact zeros."""
    rho = as_matrix(rho)
    dev = hermitian_deviation(rho)
    if dev > HERMITIAN_TOL:
        raise NotHermitianError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    s = entropy_of_spectrum(_clamped_spectrum((rho + rho.conj().T) / 2))
    return max(s, 0.0)


def batch_entropy(rhos: np.ndarray) -> np.ndarray:
    """Entropies of a stack of density matrices, shape (..., d, d) -> (...)."""
    w = np.linalg.eigvalsh(rhos)
    if w.size and w.min() < -NEGATIVE_EIG_LIMIT:
        raise NotAStateError(f"eigenvalue {w.min():.3e} below {-NEGATIVE_EIG_LIMIT}")
    w = np.clip(w, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(w > 0, -w * np.log2(np.where(w > 0, w, 1.0)), 0.0)
    return terms.sum(axis=-1)


def shannon_entropy(p: Sequence[float]) -> float:
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size and p.min() < -1e-12:
        raise ValueError(f"negative probability {p.min()!r}")
    total = math.fsum(p)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {total!r}")
    return entropy_of_spectrum(p.clip(min=0.0))


def binary_entropy(x: float) -> float:
    return shannon_entropy([x, 1.0 - x])


def partial_trace(rho, factor_dims: Sequence[int], keep) -> np.ndarray:
    """Reduce ``rho`` to the factors listed in ``keep`` (0-based, any order is sorted)."""
    rho = as_matrix(rho)
    dims = [int(d) for d in factor_dims]
    n = len(dims)
    total = math.prod(dims)
    if rho.shape != (total, total):
        raise ValueError(f"factor dims {dims} do not match matrix shape {rho.shape}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} factors")
    t = rho.reshape(dims + dims)
    row = list(range(n))
    col = [i + n if i in keep else i for i in range(n)]
    out_idx = keep + [k + n for k in keep]
    reduced = np.einsum(t, row + col, out_idx)
    d = math.prod(dims[k] for k in keep)
    return reduced.reshape(d, d)


def psd_sqrt(m) -> np.ndarray:
    w, v = hermitian_eigensystem(m)
    if w.min() < -CLAMP_TOL:
        raise NotAStateError(f"matrix has eigenvalue {w.min():.3e} < 0")
    return (v * np.sqrt(w.clip(min=0.0))) @ v.conj().T


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a complex Ginibre matrix."""
    if dim < 1:
        raise ValueError("dim must be positive")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_density(dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def random_pure(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
