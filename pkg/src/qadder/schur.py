"""Rate sums for L senders, each sharing an ebit with the receiver.

The Schur-Weyl split of ``(C^2)^{⊗L}`` has spin blocks of dimension
``L - 2k + 1`` with multiplicity ``d_k = C(L,k) - C(L,k-1)``. Up to ``L = 64``
everything is computed with exact integers; beyond that, in log space.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .channels import PAULIS, adder_channel, apply_channel, extend_channel, permutation_operator
from .linalg import kron_all, von_neumann_entropy

EXACT_MAX_L = 64
LN2 = math.log(2)


@dataclass(frozen=True)
class SchurSpectrum:
    L: int
    spin_dims: tuple
    p: tuple
    log2_d: tuple
    d: tuple | None = None  # exact multiplicities, only in exact mode

    @property
    def exact(self) -> bool:
        return self.d is not None


def _log2_binom(L: int, k: np.ndarray) -> np.ndarray:
    return (gammaln(L + 1) - gammaln(k + 1) - gammaln(L - k + 1)) / LN2


def schur_spectrum(L: int, mode: str = "auto") -> SchurSpectrum:
    """Multiplicities and block weights ``p_k = d_k (L-2k+1) / 2^L``.

    ``mode`` is ``"exact"``, ``"log"`` or ``"auto"`` (exact up to L=64).
    """
    if L < 1:
        raise ValueError("L must be at least 1")
    if mode == "auto":
        mode = "exact" if L <= EXACT_MAX_L else "log"
    ks = range(L // 2 + 1)
    spin = tuple(L - 2 * k + 1 for k in ks)
    if mode == "exact":
        if L > EXACT_MAX_L:
            raise OverflowError(f"exact mode supports L <= {EXACT_MAX_L}; use mode='log'")
        d = tuple(math.comb(L, k) - (math.comb(L, k - 1) if k else 0) for k in ks)
        if sum(dk * s for dk, s in zip(d, spin)) != 2**L:
            raise AssertionError("dimension count failed")
        p = tuple(dk * s / 2**L for dk, s in zip(d, spin))
        return SchurSpectrum(L, spin, p, tuple(math.log2(dk) for dk in d), d)
    if mode != "log":
        raise ValueError(f"unknown mode {mode!r}")
    k = np.arange(L // 2 + 1, dtype=float)
    s = L - 2 * k + 1
    # d_k = C(L,k) * (L-2k+1)/(L-k+1)
    log2_d = _log2_binom(L, k) + np.log2(s / (L - k + 1))
    p = np.exp2(log2_d + np.log2(s) - L)
    return SchurSpectrum(L, spin, tuple(p), tuple(log2_d))


def quantum_rate_sum(L: int, mode: str = "auto") -> float:
    """``2L - H(p) - sum_k p_k log2(d_k^2)``."""
    sp = schur_spectrum(L, mode)
    p = np.array(sp.p)
    log2_p = np.array(sp.log2_d) + np.log2(np.array(sp.spin_dims, dtype=float)) - L
    h = -math.fsum(p * log2_p)
    mult = math.fsum(2 * p * np.array(sp.log2_d))
    return 2 * L - h - mult


def classical_rate_sum(L: int) -> float:
    """Shannon entropy of Binomial(L, 1/2) in bits."""
    if L < 1:
        raise ValueError("L must be at least 1")
    k = np.arange(L + 1, dtype=float)
    if L <= EXACT_MAX_L:
        log2_p = np.array([math.log2(math.comb(L, int(j))) for j in k]) - L
    else:
        log2_p = _log2_binom(L, k) - L
    return -math.fsum(np.exp2(log2_p) * log2_p)


def maximally_entangled_senders(L: int) -> np.ndarray:
    """``2^{-L/2} sum_x |x>_senders ⊗ |x>_R`` as a vector of length ``4^L``."""
    dim = 2**L
    v = np.zeros(dim * dim, dtype=np.complex128)
    v[np.arange(dim) * dim + np.arange(dim)] = 1 / math.sqrt(dim)
    return v


def tau_state(L: int) -> np.ndarray:
    """Average of ``(F_pi ⊗ 1)|Phi><Phi|(F_pi* ⊗ 1)`` over all permutations of the senders."""
    if not 1 <= L <= 4:
        raise ValueError("tau_state is only built for 1 <= L <= 4")
    phi = maximally_entangled_senders(L)
    eye = np.eye(2**L)
    vecs = np.stack([np.kron(permutation_operator(pi), eye) @ phi for pi in itertools.permutations(range(L))])
    return vecs.T @ vecs.conj() / len(vecs)


def tau_entropy_oracle(L: int) -> float:
    return von_neumann_entropy(tau_state(L))


def pauli_signal(L: int, paulis: tuple) -> np.ndarray:
    """Adder-channel output when sender ``l`` applies ``PAULIS[paulis[l]]`` to its share of Phi."""
    u = np.kron(kron_all(*(PAULIS[i] for i in paulis)), np.eye(2**L))
    v = u @ maximally_entangled_senders(L)
    rho = np.outer(v, v.conj())
    return apply_channel(extend_channel(adder_channel(L), 2**L), rho)


def pauli_average(L: int) -> np.ndarray:
    """Uniform average of the ``4^L`` Pauli-modulated signal states."""
    states = [pauli_signal(L, idx) for idx in itertools.product(range(4), repeat=L)]
    return sum(states) / len(states)


@dataclass(frozen=True)
class RateSumRow:
    L: int
    quantum_sum: float
    classical_sum: float
    asymptote: float
    oracle_sum: float | None = None


def rate_sum_table(L_values) -> list:
    rows = []
    for L in sorted(set(int(v) for v in L_values)):
        oracle = 2 * L - tau_entropy_oracle(L) if L <= 4 else None
        rows.append(RateSumRow(L, quantum_rate_sum(L), classical_rate_sum(L), 1.5 * math.log2(L), oracle))
    return rows
