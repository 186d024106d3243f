"""Exact error analysis of explicit codes for the adder channel.

Classical codes are evaluated by enumeration. Quantum codes are evaluated by
density-matrix arithmetic: each block symbol carries its own copy of the shared
resource, the receiver measures symbol by symbol and then decodes the outcome
string classically, so success probabilities are exact sums of products.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import channels as ch
from .linalg import kron_all, ket, projector

Word = tuple


def _word(w) -> Word:
    if isinstance(w, str):
        w = [int(c) for c in w]
    w = tuple(int(b) for b in w)
    if any(b not in (0, 1) for b in w):
        raise ValueError(f"{w} is not a bit word")
    return w


def classical_adder_output(x1, x2) -> Word:
    x1, x2 = _word(x1), _word(x2)
    if len(x1) != len(x2):
        raise ValueError(f"word lengths differ: {len(x1)} vs {len(x2)}")
    return tuple(a + b for a, b in zip(x1, x2))


@dataclass(frozen=True)
class AdderCode:
    """Codebooks for the two-sender binary adder channel.

    ``decoder`` maps sum words to message-index pairs; sums missing from it
    decode to failure. ``None`` means the inverse table built by
    :func:`inverse_decoder`.
    """

    n: int
    book1: tuple
    book2: tuple
    decoder: dict | None = None

    def __post_init__(self):
        b1 = tuple(_word(w) for w in self.book1)
        b2 = tuple(_word(w) for w in self.book2)
        if self.n < 1:
            raise ValueError("block length must be positive")
        for name, book in (("book1", b1), ("book2", b2)):
            if not book:
                raise ValueError(f"{name} is empty")
            if any(len(w) != self.n for w in book):
                raise ValueError(f"{name} has words of length other than n={self.n}")
            if len(set(book)) != len(book):
                raise ValueError(f"{name} has repeated words")
        object.__setattr__(self, "book1", b1)
        object.__setattr__(self, "book2", b2)
        if self.decoder is not None:
            dec = {tuple(k): (tuple(v) if v is not None else None) for k, v in self.decoder.items()}
            object.__setattr__(self, "decoder", dec)

    @property
    def rates(self) -> tuple:
        return math.log2(len(self.book1)) / self.n, math.log2(len(self.book2)) / self.n

    @property
    def sizes(self) -> tuple:
        return len(self.book1), len(self.book2)

    def table(self) -> dict:
        return self.decoder if self.decoder is not None else inverse_decoder(self)


def zero_error_check(c: AdderCode):
    """``(True, None)`` if all sums are distinct, else ``(False, (pair_a, pair_b))``."""
    if len(c.book1) * len(c.book2) > 2**20:
        raise ValueError("code too large for exhaustive checking")
    seen = {}
    for i, x1 in enumerate(c.book1):
        for j, x2 in enumerate(c.book2):
            y = classical_adder_output(x1, x2)
            if y in seen:
                return False, (seen[y], (i, j))
            seen[y] = (i, j)
    return True, None


def inverse_decoder(c: AdderCode, guess: bool = False) -> dict:
    """Sum word -> message pair. Ambiguous sums fail unless ``guess`` picks the first preimage."""
    pre: dict = {}
    for i, x1 in enumerate(c.book1):
        for j, x2 in enumerate(c.book2):
            pre.setdefault(classical_adder_output(x1, x2), []).append((i, j))
    return {y: ps[0] for y, ps in pre.items() if guess or len(ps) == 1}


@dataclass(frozen=True)
class CodePerformance:
    """Per-message error probabilities, rows for sender 1 and columns for sender 2."""

    per_message_errors: np.ndarray
    rates: tuple = (0.0, 0.0)

    @property
    def average_error(self) -> float:
        return float(math.fsum(self.per_message_errors.ravel()) / self.per_message_errors.size)

    @property
    def max_message_error(self) -> float:
        return float(self.per_message_errors.max())

    @property
    def zero_error(self) -> bool:
        return self.max_message_error <= 1e-12


def classical_code_performance(c: AdderCode, decoder: dict | None = None) -> CodePerformance:
    table = c.table() if decoder is None else decoder
    err = np.zeros(c.sizes)
    for i, x1 in enumerate(c.book1):
        for j, x2 in enumerate(c.book2):
            err[i, j] = 0.0 if table.get(classical_adder_output(x1, x2)) == (i, j) else 1.0
    return CodePerformance(err, c.rates)


# ---------------------------------------------------------------- assisted codes


@dataclass(frozen=True)
class AssistedCode:
    """Block code over the entanglement-assisted channel.

    Each of the ``n`` block symbols uses a fresh copy of ``resource``.
    ``encoders1[m]`` is the tuple of single-qubit channels sender 1 applies
    for message ``m`` (one per symbol), likewise ``encoders2``. The receiver
    measures every symbol with the POVM ``effects`` (pairs of outcome label
    and operator on the 2-qubit-plus-receiver space) and maps the outcome
    string to a message pair with ``decode``; ``None`` means failure.
    """

    resource: ch.SharedResource
    n: int
    encoders1: dict
    encoders2: dict
    effects: tuple
    decode: Callable
    rates: tuple = field(default=(0.0, 0.0))

    def __post_init__(self):
        for name, enc in (("encoders1", self.encoders1), ("encoders2", self.encoders2)):
            if not enc:
                raise ValueError(f"{name} is empty")
            if any(len(fs) != self.n for fs in enc.values()):
                raise ValueError(f"{name} must give one channel per block symbol")
        check_povm([e for _, e in self.effects], self.resource.dim)

    @property
    def messages1(self) -> list:
        return list(self.encoders1)

    @property
    def messages2(self) -> list:
        return list(self.encoders2)

    def outcome_strings(self):
        return itertools.product([o for o, _ in self.effects], repeat=self.n)

    def block_povm(self) -> dict:
        """Decoding POVM on the whole block, keyed by message pair (``None`` = failure)."""
        if (self.resource.dim**self.n) > 256:
            raise ValueError("block too large to materialize")
        ops = dict(self.effects)
        out: dict = {}
        for s in self.outcome_strings():
            d = kron_all(*(ops[o] for o in s))
            key = self.decode(s)
            out[key] = out[key] + d if key in out else d
        return out


def check_povm(effects: Sequence, dim: int, tol: float = 1e-9) -> None:
    total = sum(np.asarray(e) for e in effects)
    err = float(np.max(np.abs(total - np.eye(dim))))
    if err > tol:
        raise ValueError(f"POVM is incomplete (error {err:.3e})")
    for e in effects:
        if np.linalg.eigvalsh(e).min() < -1e-10:
            raise ValueError("POVM element is not positive semidefinite")


def symbol_state(f: ch.QuantumChannel, g: ch.QuantumChannel, iota: ch.SharedResource, channel) -> np.ndarray:
    """``(channel ⊗ id_R)((f ⊗ g ⊗ id_R)|iota><iota|)`` for one block symbol."""
    s = ch.encoded_state(f, g, iota)
    return ch.apply_channel(ch.extend_channel(channel, iota.receiver_dim), s)


def error_probability(code: AssistedCode, channel: ch.QuantumChannel | None = None) -> CodePerformance:
    """Exact per-message error ``1 - Tr(W_{m1 m2} D_{m1 m2})`` (default channel: the adder)."""
    channel = ch.adder_channel(2) if channel is None else channel
    if channel.in_dim != 4 or channel.out_dim != 4:
        raise ValueError("channel must act on the two sender qubits")
    labels = [o for o, _ in code.effects]
    ops = np.stack([e for _, e in code.effects])
    decoded = {s: code.decode(s) for s in code.outcome_strings()}
    index = {o: k for k, o in enumerate(labels)}
    cache: dict = {}

    def outcome_probs(f, g):
        key = (id(f), id(g))
        if key not in cache:
            w = symbol_state(f, g, code.resource, channel)
            cache[key] = np.einsum("ij,kji->k", w, ops).real.clip(min=0.0)
        return cache[key]

    m1s, m2s = code.messages1, code.messages2
    err = np.zeros((len(m1s), len(m2s)))
    for a, m1 in enumerate(m1s):
        for b, m2 in enumerate(m2s):
            probs = [outcome_probs(f, g) for f, g in zip(code.encoders1[m1], code.encoders2[m2])]
            success = math.fsum(
                math.prod(probs[t][index[o]] for t, o in enumerate(s))
                for s, msg in decoded.items()
                if msg == (m1, m2)
            )
            err[a, b] = min(max(1.0 - success, 0.0), 1.0)
    return CodePerformance(err, code.rates)


def block_error_probability(code: AssistedCode, channel: ch.QuantumChannel | None = None) -> CodePerformance:
    """Same as :func:`error_probability` but with the full block state and POVM.

    Only feasible for small blocks; used as an independent cross-check.
    """
    channel = ch.adder_channel(2) if channel is None else channel
    povm = code.block_povm()
    m1s, m2s = code.messages1, code.messages2
    err = np.zeros((len(m1s), len(m2s)))
    for a, m1 in enumerate(m1s):
        for b, m2 in enumerate(m2s):
            w = kron_all(
                *(symbol_state(f, g, code.resource, channel) for f, g in zip(code.encoders1[m1], code.encoders2[m2]))
            )
            d = povm.get((m1, m2))
            err[a, b] = 1.0 - (float(np.trace(w @ d).real) if d is not None else 0.0)
    return CodePerformance(err, code.rates)


def dense_coding_code(decoder: str = "bell") -> AssistedCode:
    """Sender 1 Pauli-modulates one half of a shared Phi+; sender 2 sends nothing.

    ``decoder="computational"`` swaps the Bell measurement for a
    computational-basis one (a negative control).
    """
    bell = ch.bell_states()
    iota = ch.SharedResource(bell[0], 1)
    paulis = ch.pauli_channels()
    enc1 = {m: (paulis[m],) for m in range(4)}
    enc2 = {0: (ch.identity_channel(2),)}
    if decoder == "bell":
        # Pauli_m ⊗ 1 |Phi+> up to phase
        vecs = [np.kron(p, ch.I2) @ bell[0] for p in ch.PAULIS]
    elif decoder == "computational":
        vecs = [ket(f"{m:02b}") for m in range(4)]
    else:
        raise ValueError(f"unknown decoder {decoder!r}")
    effects = tuple((m, projector(v)) for m, v in enumerate(vecs))
    return AssistedCode(iota, 1, enc1, enc2, effects, lambda s: (s[0], 0), rates=(2.0, 0.0))


def _pauli_power(z: int, x: int) -> ch.QuantumChannel:
    return ch.unitary_channel(np.linalg.matrix_power(ch.Z, z) @ np.linalg.matrix_power(ch.X, x))


def ghz_receiver_effects() -> tuple:
    """Per-symbol POVM ``{(phase, a, b)}`` on sender qubits plus the receiver's GHZ share.

    First the P/N subspace test, then (on the N branch) a Z on the receiver
    qubit to rotate back into P, then CNOTs from the receiver qubit onto both
    channel qubits and a computational measurement of the channel qubits.
    """
    s = 1 / math.sqrt(2)
    plus, minus = np.zeros((8, 8), complex), np.zeros((8, 8), complex)
    for a, b in itertools.product((0, 1), repeat=2):
        u, v = ket(f"{a}{b}0"), ket(f"{1 - a}{1 - b}1")
        plus += projector(s * (u + v))
        minus += projector(s * (u - v))
    cnots = np.zeros((8, 8), complex)
    for idx in range(8):
        a, b, r = (idx >> 2) & 1, (idx >> 1) & 1, idx & 1
        cnots[((a ^ r) << 2) | ((b ^ r) << 1) | r, idx] = 1.0
    z3 = np.kron(np.eye(4), ch.Z)
    effects = []
    for phase, (proj, corr) in enumerate(((plus, cnots), (minus, cnots @ z3))):
        for a, b in itertools.product((0, 1), repeat=2):
            meas = np.kron(projector(ket(f"{a}{b}")), ch.I2)
            e = proj @ corr.conj().T @ meas @ corr @ proj
            effects.append(((phase, a, b), (e + e.conj().T) / 2))
    return tuple(effects)


def ghz_subspace_projectors() -> tuple:
    effects = dict(ghz_receiver_effects())
    plus = sum(effects[(0, a, b)] for a, b in itertools.product((0, 1), repeat=2))
    minus = sum(effects[(1, a, b)] for a, b in itertools.product((0, 1), repeat=2))
    return plus, minus


def ghz_lift(base: AdderCode) -> AssistedCode:
    """Run a classical adder code over GHZ-assisted symbols with an extra phase bit per symbol.

    Sender 1's messages become ``(i, phase_word)`` with codeword ``book1[i]``
    sent as ``Z^c X^b`` on sender 1's GHZ share; sender 2 applies ``X^b``. The rates
    become ``(1 + R1, R2)``.
    """
    n = base.n
    table = base.table()
    phase_words = list(itertools.product((0, 1), repeat=n))
    enc1 = {
        (i, c): tuple(_pauli_power(ct, bt) for ct, bt in zip(c, w))
        for i, w in enumerate(base.book1)
        for c in phase_words
    }
    enc2 = {j: tuple(_pauli_power(0, bt) for bt in w) for j, w in enumerate(base.book2)}

    def decode(outcomes):
        phase = tuple(o[0] for o in outcomes)
        y = tuple(o[1] + o[2] for o in outcomes)
        msg = table.get(y)
        return None if msg is None else ((msg[0], phase), msg[1])

    r1, r2 = base.rates
    return AssistedCode(ch.ghz_state(), n, enc1, enc2, ghz_receiver_effects(), decode, rates=(1 + r1, r2))


def classical_lift(base: AdderCode) -> AssistedCode:
    """Basis-state inputs without entanglement and a computational-basis receiver."""
    table = base.table()
    enc1 = {i: tuple(_pauli_power(0, b) for b in w) for i, w in enumerate(base.book1)}
    enc2 = {j: tuple(_pauli_power(0, b) for b in w) for j, w in enumerate(base.book2)}
    effects = tuple(((a, b), projector(ket(f"{a}{b}"))) for a, b in itertools.product((0, 1), repeat=2))

    def decode(outcomes):
        return table.get(tuple(a + b for a, b in outcomes))

    return AssistedCode(ch.unassisted_resource(), base.n, enc1, enc2, effects, decode, rates=base.rates)


def base_error_matrix_for_lift(base: AdderCode) -> np.ndarray:
    """Classical per-message errors repeated over the phase words, in ``ghz_lift`` row order."""
    err = classical_code_performance(base).per_message_errors
    return np.repeat(err, 2**base.n, axis=0)


# ---------------------------------------------------------------- shared randomness


@dataclass(frozen=True)
class SharedRandomnessCode:
    """Base code with messages shifted by uniform shared keys ``X_i`` modulo ``M_i``."""

    base: AdderCode

    @property
    def key_ranges(self) -> tuple:
        return self.base.sizes

    def performance(self) -> CodePerformance:
        """Exact per-message error, averaged over all key pairs."""
        m1, m2 = self.key_ranges
        table = self.base.table()
        err = np.zeros((m1, m2))
        for i in range(m1):
            for j in range(m2):
                wrong = 0
                for x1 in range(m1):
                    for x2 in range(m2):
                        n1, n2 = (i + x1) % m1, (j + x2) % m2
                        y = classical_adder_output(self.base.book1[n1], self.base.book2[n2])
                        est = table.get(y)
                        if est is None or ((est[0] - x1) % m1, (est[1] - x2) % m2) != (i, j):
                            wrong += 1
                err[i, j] = wrong / (m1 * m2)
        return CodePerformance(err, self.base.rates)


def wrap_shared_randomness(base: AdderCode) -> SharedRandomnessCode:
    return SharedRandomnessCode(base)


def random_adder_code(rng: np.random.Generator, max_n: int = 2, max_words: int = 4) -> AdderCode:
    """Small random code whose decoder is a partly corrupted guessing table."""
    n = int(rng.integers(1, max_n + 1))
    words = list(itertools.product((0, 1), repeat=n))
    k1 = int(rng.integers(1, min(max_words, len(words)) + 1))
    k2 = int(rng.integers(1, min(max_words, len(words)) + 1))
    book1 = [words[i] for i in rng.choice(len(words), k1, replace=False)]
    book2 = [words[i] for i in rng.choice(len(words), k2, replace=False)]
    code = AdderCode(n, tuple(book1), tuple(book2))
    decoder = inverse_decoder(code, guess=True)
    for y in itertools.product((0, 1, 2), repeat=n):
        r = rng.random()
        if r < 0.25:
            decoder.pop(y, None)
        elif r < 0.5:
            decoder[y] = (int(rng.integers(k1)), int(rng.integers(k2)))
    return AdderCode(n, code.book1, code.book2, decoder)
