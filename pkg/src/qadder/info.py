"""Holevo quantities and the entropy identities used in the capacity bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import (
    as_matrix,
    batch_entropy,
    binary_entropy,
    check_pure,
    psd_sqrt,
    shannon_entropy,
    von_neumann_entropy,
)


def _check_probs(p) -> np.ndarray:
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size == 0:
        raise ValueError("empty distribution")
    if p.min() < -1e-12:
        raise ValueError(f"negative probability {p.min()!r}")
    if abs(math.fsum(p) - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {math.fsum(p)!r}")
    return p.clip(min=0.0)


@dataclass(frozen=True)
class Ensemble:
    """Finite ensemble of (probability, label, state) triples."""

    probs: np.ndarray
    labels: tuple
    states: np.ndarray

    def __post_init__(self):
        probs = _check_probs(self.probs)
        states = np.asarray(self.states, dtype=np.complex128)
        labels = tuple(self.labels)
        if states.ndim != 3 or states.shape[0] != probs.size or len(labels) != probs.size:
            raise ValueError("probs, labels and states must have matching lengths")
        if len(set(labels)) != len(labels):
            raise ValueError("ensemble labels must be unique")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "states", states)

    @classmethod
    def from_items(cls, items: Sequence[tuple]) -> "Ensemble":
        probs, labels, states = zip(*items)
        return cls(np.array(probs), tuple(labels), np.stack([as_matrix(s) for s in states]))

    def average(self) -> np.ndarray:
        return np.tensordot(self.probs, self.states, axes=1)


@dataclass(frozen=True)
class ProductEnsemble:
    """Independent sender distributions and the signal state for each action pair.

    ``signals[i, j]`` is the output when sender 1 takes ``labels1[i]`` and
    sender 2 takes ``labels2[j]``.
    """

    p: np.ndarray
    q: np.ndarray
    signals: np.ndarray
    labels1: tuple = ()
    labels2: tuple = ()

    def __post_init__(self):
        p, q = _check_probs(self.p), _check_probs(self.q)
        signals = np.asarray(self.signals, dtype=np.complex128)
        if signals.ndim != 4 or signals.shape[:2] != (p.size, q.size):
            raise ValueError(f"signals shape {signals.shape} does not match ({p.size}, {q.size}, d, d)")
        labels1 = tuple(self.labels1) or tuple(range(p.size))
        labels2 = tuple(self.labels2) or tuple(range(q.size))
        if len(labels1) != p.size or len(labels2) != q.size:
            raise ValueError("label count does not match distribution size")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "signals", signals)
        object.__setattr__(self, "labels1", labels1)
        object.__setattr__(self, "labels2", labels2)

    @property
    def dim(self) -> int:
        return self.signals.shape[-1]

    def joint(self) -> Ensemble:
        probs = np.outer(self.p, self.q).reshape(-1)
        labels = tuple((a, b) for a in self.labels1 for b in self.labels2)
        return Ensemble(probs, labels, self.signals.reshape(-1, self.dim, self.dim))


def holevo(e: Ensemble) -> float:
    """``H(sum p rho) - sum p H(rho)`` in bits."""
    return _holevo(e.probs, e.states)


def _holevo(probs: np.ndarray, states: np.ndarray) -> float:
    avg = np.tensordot(probs, states, axes=1)
    mask = probs > 0
    inner = float(np.dot(probs[mask], batch_entropy(states[mask]))) if mask.any() else 0.0
    return max(von_neumann_entropy(avg) - inner, 0.0)


def joint_holevo(pe: ProductEnsemble) -> float:
    """``I(P x Q; W)``."""
    probs = np.outer(pe.p, pe.q).reshape(-1)
    return _holevo(probs, pe.signals.reshape(-1, pe.dim, pe.dim))


def conditional_holevo_1(pe: ProductEnsemble) -> float:
    """``I(P; W | Q) = sum_j q_j I(P; W_.j)``."""
    return math.fsum(qj * _holevo(pe.p, pe.signals[:, j]) for j, qj in enumerate(pe.q) if qj > 0)


def conditional_holevo_2(pe: ProductEnsemble) -> float:
    """``I(Q; W | P) = sum_i p_i I(Q; W_i.)``."""
    return math.fsum(pi * _holevo(pe.q, pe.signals[i]) for i, pi in enumerate(pe.p) if pi > 0)


def pair_mixture_entropy(v, w) -> float:
    """Entropy of ``(|v><v| + |w><w|)/2`` from the overlap ``t = |<v|w>|``."""
    v, w = check_pure(v), check_pure(w)
    if v.shape != w.shape:
        raise ValueError("vectors have different dimensions")
    t = min(abs(np.vdot(v, w)), 1.0)
    return binary_entropy((1 - t) / 2)


def entropy_sandwich(x: float) -> tuple:
    """``(1 - x^2, h((1-x)/2), 1 - x^2/2)``; the middle term lies between the outer two."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x} outside [0, 1]")
    return 1 - x * x, binary_entropy((1 - x) / 2), 1 - x * x / 2


def measurement_decomposition(rho, povm: Sequence, dims: tuple, cutoff: float = 1e-12) -> list:
    """Outcome probabilities and post-measurement states for a POVM on factor 2.

    Returns ``[(lambda_i, sigma_i), ...]`` with ``sigma_i`` the state left by
    the square-root measurement ``sqrt(1 ⊗ E_i)``. Outcomes with probability
    below ``cutoff`` are dropped.
    """
    rho = as_matrix(rho)
    d1, d2 = dims
    if rho.shape != (d1 * d2, d1 * d2):
        raise ValueError(f"state shape {rho.shape} does not match dims {dims}")
    effects = [as_matrix(e) for e in povm]
    completeness = np.max(np.abs(sum(effects) - np.eye(d2)))
    if completeness > 1e-9:
        raise ValueError(f"POVM elements do not sum to identity (error {completeness:.3e})")
    out = []
    eye = np.eye(d1)
    for e in effects:
        root = np.kron(eye, psd_sqrt(e))
        post = root @ rho @ root
        lam = float(np.trace(post).real)
        if lam < cutoff:
            continue
        out.append((lam, post / lam))
    return out


def measurement_entropy_gap(rho, povm: Sequence, dims: tuple) -> float:
    """``H(lambda) + sum lambda_i H(sigma_i) - H(rho)``, never negative for a valid POVM."""
    parts = measurement_decomposition(rho, povm, dims)
    lams = np.array([lam for lam, _ in parts])
    lams = lams / lams.sum()
    inner = math.fsum(lam * von_neumann_entropy(s) for lam, s in parts)
    return shannon_entropy(lams) + inner - von_neumann_entropy(rho)


def random_povm(dim: int, outcomes: int, rng: np.random.Generator) -> list:
    """Random full-rank POVM: ``E_i = S^{-1/2} A_i S^{-1/2}`` with ``S = sum A_i``."""
    a = []
    for _ in range(outcomes):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        a.append(g @ g.conj().T)
    w, v = np.linalg.eigh(sum(a))
    inv_root = (v / np.sqrt(w)) @ v.conj().T
    return [(inv_root @ ai @ inv_root + (inv_root @ ai @ inv_root).conj().T) / 2 for ai in a]
