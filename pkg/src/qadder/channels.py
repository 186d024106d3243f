"""States and channels for the quantum binary adder.

Register order is fixed everywhere: sender 1, sender 2, ..., sender L, then the
receiver's factors. Basis indices are big-endian in that order.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import as_matrix, check_density, check_pure, kron_all, ket, projector

I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (I2, X, Y, Z)
PAULI_NAMES = ("I", "X", "Y", "Z")


@dataclass(frozen=True)
class QuantumChannel:
    """A CPTP map given by Kraus operators of shape (out_dim, in_dim)."""

    kraus: tuple

    def __post_init__(self):
        ks = tuple(as_matrix(k) for k in self.kraus)
        if not ks:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ks[0].shape
        if any(k.shape != shape for k in ks):
            raise ValueError("Kraus operators have inconsistent shapes")
        object.__setattr__(self, "kraus", ks)
        dev = trace_preservation_error(self)
        if dev > 1e-9:
            raise ValueError(f"Kraus operators are not trace preserving (error {dev:.3e})")

    @property
    def in_dim(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.kraus[0].shape[0]

    def __call__(self, rho) -> np.ndarray:
        return apply_channel(self, rho)


def trace_preservation_error(c: QuantumChannel) -> float:
    s = sum(k.conj().T @ k for k in c.kraus)
    return float(np.max(np.abs(s - np.eye(c.in_dim))))


def unitary_channel(u) -> QuantumChannel:
    return QuantumChannel((as_matrix(u),))


def identity_channel(dim: int) -> QuantumChannel:
    return QuantumChannel((np.eye(dim, dtype=np.complex128),))


def tensor_channels(*channels: QuantumChannel) -> QuantumChannel:
    kraus = [kron_all(*ks) for ks in itertools.product(*(c.kraus for c in channels))]
    return QuantumChannel(tuple(kraus))


def apply_channel(c: QuantumChannel, rho) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape != (c.in_dim, c.in_dim):
        raise ValueError(f"channel input dim {c.in_dim} does not match state shape {rho.shape}")
    k = np.stack(c.kraus)
    out = np.einsum("kij,jl,kml->im", k, rho, k.conj())
    return (out + out.conj().T) / 2


def extend_channel(c: QuantumChannel, extra_dim: int) -> QuantumChannel:
    """``c ⊗ id`` with the identity acting on trailing factors of size ``extra_dim``."""
    return tensor_channels(c, identity_channel(extra_dim))


@dataclass(frozen=True)
class SharedResource:
    """Pure state shared by the two senders (one qubit each) and the receiver."""

    state: np.ndarray
    receiver_dim: int

    def __post_init__(self):
        v = check_pure(self.state)
        if v.size != 4 * self.receiver_dim:
            raise ValueError(f"state size {v.size} does not match dims (2, 2, {self.receiver_dim})")
        object.__setattr__(self, "state", v)

    @property
    def dims(self) -> tuple:
        return (2, 2, self.receiver_dim)

    @property
    def dim(self) -> int:
        return 4 * self.receiver_dim

    def density(self) -> np.ndarray:
        return projector(self.state)


def _check_permutation(pi: Sequence[int], L: int) -> tuple:
    pi = tuple(int(p) for p in pi)
    if sorted(pi) != list(range(L)):
        raise ValueError(f"{pi} is not a permutation of 0..{L - 1}")
    return pi


def permutation_operator(pi: Sequence[int], L: int | None = None) -> np.ndarray:
    """Unitary ``F_pi`` with ``|x_0 ... x_{L-1}>  ->  |x_pi(0) ... x_pi(L-1)>``.

    Position ``l`` of the output carries the qubit that sat at ``pi[l]``. With
    this convention ``F_pi @ F_sigma == F_{sigma o pi}``.
    """
    L = len(pi) if L is None else L
    if L > 8:
        raise ValueError("at most 8 qubits are supported")
    pi = _check_permutation(pi, L)
    dim = 2**L
    f = np.zeros((dim, dim), dtype=np.complex128)
    for x in range(dim):
        bits = [(x >> (L - 1 - l)) & 1 for l in range(L)]
        y = 0
        for l in range(L):
            y = (y << 1) | bits[pi[l]]
        f[y, x] = 1.0
    return f


def compose(pi: Sequence[int], sigma: Sequence[int]) -> tuple:
    """``(pi o sigma)(l) = pi[sigma[l]]``."""
    return tuple(pi[s] for s in sigma)


def adder_channel(L: int) -> QuantumChannel:
    """Random permuter of ``L`` qubits: Kraus set ``F_pi / sqrt(L!)``."""
    if not 1 <= L <= 4:
        raise ValueError("adder channel is built for 1 <= L <= 4")
    scale = 1 / math.sqrt(math.factorial(L))
    return QuantumChannel(tuple(scale * permutation_operator(p) for p in itertools.permutations(range(L))))


FLIP = permutation_operator((1, 0))


def swap(rho) -> np.ndarray:
    """Super-operator ``S(rho) = F rho F*`` on the first two qubits of ``rho``."""
    rho = as_matrix(rho)
    rest = rho.shape[0] // 4
    f = np.kron(FLIP, np.eye(rest))
    return f @ rho @ f.conj().T


def bell_states(psi_minus_sign: int = -1) -> tuple:
    """``(Phi+, Phi-, Psi+, Psi-)``.

    ``psi_minus_sign`` exists only as a negative-control hook for the
    verification suite; anything but -1 produces a wrong Psi-.
    """
    s = 1 / math.sqrt(2)
    return (
        s * (ket("00") + ket("11")),
        s * (ket("00") - ket("11")),
        s * (ket("01") + ket("10")),
        s * (ket("01") + psi_minus_sign * ket("10")),
    )


def symmetric_projectors() -> tuple:
    """Projectors onto span{Phi+, Phi-, Psi+} and onto C Psi-."""
    minus = projector(bell_states()[3])
    return np.eye(4) - minus, minus


def ghz_state() -> SharedResource:
    v = (ket("000") + ket("111")) / math.sqrt(2)
    return SharedResource(v, 2)


def max_entangled_resource() -> SharedResource:
    """``1/2 sum_i Bell_i ⊗ |i>`` with a two-qubit receiver."""
    v = sum(np.kron(b, np.eye(4)[i]) for i, b in enumerate(bell_states())) / 2
    return SharedResource(v, 4)


def partial_entangled_resource(alpha: float) -> SharedResource:
    """``alpha|00> + beta|11>`` between the senders, receiver trivial."""
    if not (1 / math.sqrt(2) - 1e-8 <= alpha <= 1 + 1e-12):
        raise ValueError(f"alpha={alpha} outside [1/sqrt(2), 1]")
    alpha = min(max(alpha, 1 / math.sqrt(2)), 1.0)
    beta = math.sqrt(max(0.0, 1 - alpha**2))
    return SharedResource(alpha * ket("00") + beta * ket("11"), 1)


def unassisted_resource() -> SharedResource:
    return SharedResource(ket("00"), 1)


def pauli_channels() -> tuple:
    return tuple(unitary_channel(p) for p in PAULIS)


def encoded_state(f: QuantumChannel, g: QuantumChannel, iota: SharedResource) -> np.ndarray:
    """``(f ⊗ g ⊗ id)(|iota><iota|)`` before the channel acts."""
    if f.in_dim != 2 or g.in_dim != 2 or f.out_dim != 2 or g.out_dim != 2:
        raise ValueError("encodings must be single-qubit channels")
    return apply_channel(tensor_channels(f, g, identity_channel(iota.receiver_dim)), iota.density())


def assisted_output(f: QuantumChannel, g: QuantumChannel, iota: SharedResource) -> np.ndarray:
    """Signal state ``W_fg = 1/2 (s + (S ⊗ id)(s))`` with ``s`` the encoded resource."""
    s = encoded_state(f, g, iota)
    return check_density((s + swap(s)) / 2, tol=1e-9)
