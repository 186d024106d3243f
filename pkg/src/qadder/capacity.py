"""Rate regions and rate-sum maximization for the two-sender adder channel."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from . import channels as ch
from .info import ProductEnsemble, conditional_holevo_1, conditional_holevo_2, joint_holevo
from .linalg import batch_entropy, binary_entropy, check_density, projector, von_neumann_entropy

VERTEX_TOL = 1e-9
TIE_TOL = 1e-12

CONJECTURE_NOTE = (
    "sum-rate constraint is achievable by time sharing; "
    "its optimality is a conjectured converse, not proven"
)


# ---------------------------------------------------------------- regions


@dataclass(frozen=True)
class RateRegion:
    """Intersection of half-planes ``a*R1 + b*R2 <= c`` with the nonnegative quadrant."""

    constraints: tuple
    notes: tuple = ()

    def __post_init__(self):
        cons = tuple((float(a), float(b), float(c)) for a, b, c in self.constraints)
        if any(c < -VERTEX_TOL for _, _, c in cons):
            raise ValueError("region must contain the origin")
        object.__setattr__(self, "constraints", cons)
        object.__setattr__(self, "notes", tuple(self.notes))

    @property
    def vertices(self) -> tuple:
        return extract_vertices(self.constraints)

    def contains(self, point, tol: float = VERTEX_TOL) -> bool:
        r1, r2 = point
        if r1 < -tol or r2 < -tol:
            return False
        return all(a * r1 + b * r2 <= c + tol for a, b, c in self.constraints)

    def bound(self, a: float, b: float) -> float | None:
        """Right-hand side of the constraint with normal ``(a, b)``, if present."""
        for ca, cb, cc in self.constraints:
            if math.isclose(ca, a, abs_tol=1e-12) and math.isclose(cb, b, abs_tol=1e-12):
                return cc
        return None


def extract_vertices(constraints: Sequence[tuple]) -> tuple:
    """Corner points of the region, counterclockwise starting at the origin."""
    lines = list(constraints) + [(-1.0, 0.0, 0.0), (0.0, -1.0, 0.0)]
    pts = []
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            a1, b1, c1 = lines[i]
            a2, b2, c2 = lines[j]
            det = a1 * b2 - a2 * b1
            if abs(det) < TIE_TOL:
                continue
            x = (c1 * b2 - c2 * b1) / det
            y = (a1 * c2 - a2 * c1) / det
            if x < -VERTEX_TOL or y < -VERTEX_TOL:
                continue
            if all(a * x + b * y <= c + VERTEX_TOL for a, b, c in constraints):
                x, y = (x if x > 0 else 0.0), (y if y > 0 else 0.0)
                if not any(abs(x - px) <= 1e-9 and abs(y - py) <= 1e-9 for px, py in pts):
                    pts.append((x, y))
    if not pts:
        return ((0.0, 0.0),)
    # every region contains the origin, so sort by angle around an interior point
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    origin_angle = math.atan2(-cy, -cx)
    pts.sort(key=lambda p: (math.atan2(p[1] - cy, p[0] - cx) - origin_angle) % (2 * math.pi))
    return tuple(pts)


def pentagon(pe: ProductEnsemble) -> RateRegion:
    """Region ``R1 <= I(P;W|Q)``, ``R2 <= I(Q;W|P)``, ``R1 + R2 <= I(PxQ;W)``."""
    return RateRegion(
        (
            (1.0, 0.0, conditional_holevo_1(pe)),
            (0.0, 1.0, conditional_holevo_2(pe)),
            (1.0, 1.0, joint_holevo(pe)),
        )
    )


@dataclass(frozen=True)
class TimeSharingParams:
    alpha: float

    def __post_init__(self):
        # 1e-8 slack admits 8-digit spellings of 1/sqrt(2)
        if not (1 / math.sqrt(2) - 1e-8 <= self.alpha <= 1 + 1e-12):
            raise ValueError(f"alpha={self.alpha} outside [1/sqrt(2), 1]")
        object.__setattr__(self, "alpha", min(max(self.alpha, 1 / math.sqrt(2)), 1.0))

    @property
    def beta(self) -> float:
        return math.sqrt(max(0.0, 1 - self.alpha**2))

    @property
    def entropy(self) -> float:
        return binary_entropy(min(self.alpha**2, 1.0))


def time_sharing_region(t: TimeSharingParams | float) -> RateRegion:
    """Time sharing between concentrated EPR pairs and the unassisted scheme."""
    if not isinstance(t, TimeSharingParams):
        t = TimeSharingParams(float(t))
    h = t.entropy
    return RateRegion(
        ((1.0, 0.0, 1 + h), (0.0, 1.0, 1 + h), (1.0, 1.0, 1.5 + h / 2)),
        notes=(CONJECTURE_NOTE,),
    )


TWO_EBIT_SUM = 4 - binary_entropy(0.25)

_NAMED = {
    "classical": ((1.0, 1.0, 1.5), ()),
    "ghz": ((2.0, 2.0, 2.5), ()),
    "two_ebit_unitary": ((2.0, 2.0, TWO_EBIT_SUM), ("sum bound holds for unitary encodings",)),
    "ss_maximal": ((2.0, 2.0, 2.0), ()),
}


def named_region(tag: str) -> RateRegion:
    try:
        (r1, r2, s), notes = _NAMED[tag]
    except KeyError:
        raise ValueError(f"unknown region {tag!r}; expected one of {sorted(_NAMED)}") from None
    return RateRegion(((1.0, 0.0, r1), (0.0, 1.0, r2), (1.0, 1.0, s)), notes=notes)


def _hull(points: list) -> list:
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= TIE_TOL:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= TIE_TOL:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def convex_hull_union(regions: Sequence[RateRegion]) -> RateRegion:
    """Closed convex hull of the union of down-closed regions in the quadrant."""
    if not regions:
        raise ValueError("need at least one region")
    verts = [v for r in regions for v in r.vertices]
    # down-closure: axis projections keep the hull unchanged and nondegenerate
    pts = [(0.0, 0.0)] + verts + [(x, 0.0) for x, _ in verts] + [(0.0, y) for _, y in verts]
    pts = [(round(x, 12), round(y, 12)) for x, y in pts]
    cons = [(1.0, 0.0, max(x for x, _ in pts)), (0.0, 1.0, max(y for _, y in pts))]
    hull = _hull(pts)
    if len(hull) >= 3:
        for (x1, y1), (x2, y2) in zip(hull, hull[1:] + hull[:1]):
            a, b = y2 - y1, x1 - x2  # outward normal for a counterclockwise hull
            if a <= TIE_TOL or b <= TIE_TOL:
                continue
            norm = max(a, b)
            a, b = a / norm, b / norm
            cons.append((a, b, a * x1 + b * y1))
    return RateRegion(tuple(cons))


# ---------------------------------------------------------------- no-entanglement bound


def unassisted_upper_expr(rho_p, rho_q) -> float:
    """``H((rho_P⊗rho_Q + rho_Q⊗rho_P)/2) - 1 + Tr(rho_P rho_Q)``."""
    rho_p, rho_q = check_density(rho_p), check_density(rho_q)
    if rho_p.shape != (2, 2) or rho_q.shape != (2, 2):
        raise ValueError("both states must be single-qubit")
    mix = (np.kron(rho_p, rho_q) + np.kron(rho_q, rho_p)) / 2
    return von_neumann_entropy(mix) - 1 + float(np.trace(rho_p @ rho_q).real)


# ---------------------------------------------------------------- scenarios and labels


@dataclass(frozen=True)
class Prep:
    """Pure qubit state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""

    theta: float
    phi: float

    def vector(self) -> np.ndarray:
        return bloch_vector(self.theta, self.phi)


@dataclass(frozen=True)
class Unitary:
    """Single-qubit unitary with Euler angles, global phase dropped."""

    theta: float
    phi: float
    lam: float

    def matrix(self) -> np.ndarray:
        return euler_unitary(self.theta, self.phi, self.lam)


@dataclass(frozen=True)
class Pauli:
    index: int

    def __post_init__(self):
        if self.index not in (0, 1, 2, 3):
            raise ValueError(f"Pauli index {self.index} not in 0..3")

    def matrix(self) -> np.ndarray:
        return ch.PAULIS[self.index]

    def __str__(self):
        return ch.PAULI_NAMES[self.index]


def bloch_vector(theta, phi) -> np.ndarray:
    theta, phi = np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
    return np.stack([np.cos(theta / 2) + 0j, np.exp(1j * phi) * np.sin(theta / 2)], axis=-1)


def euler_unitary(theta, phi, lam) -> np.ndarray:
    theta, phi, lam = (np.asarray(v, dtype=float) for v in (theta, phi, lam))
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    u = np.empty(theta.shape + (2, 2), dtype=np.complex128)
    u[..., 0, 0] = c
    u[..., 0, 1] = -np.exp(1j * lam) * s
    u[..., 1, 0] = np.exp(1j * phi) * s
    u[..., 1, 1] = np.exp(1j * (phi + lam)) * c
    return u


SCENARIO_TAGS = ("unassisted", "sender_sender", "ghz", "two_ebit")
MODES = ("prepare", "unitary", "pauli")


@dataclass(frozen=True)
class Scenario:
    tag: str
    alpha: float | None = None

    def __post_init__(self):
        if self.tag not in SCENARIO_TAGS:
            raise ValueError(f"unknown scenario {self.tag!r}")
        if (self.tag == "sender_sender") != (self.alpha is not None):
            raise ValueError("alpha is required for, and only for, sender_sender")

    @property
    def resource(self) -> ch.SharedResource:
        if self.tag == "unassisted":
            return ch.unassisted_resource()
        if self.tag == "sender_sender":
            return ch.partial_entangled_resource(self.alpha)
        if self.tag == "ghz":
            return ch.ghz_state()
        return ch.max_entangled_resource()

    @property
    def modes(self) -> tuple:
        return ("prepare",) if self.tag == "unassisted" else ("unitary", "pauli")

    def check_mode(self, mode: str) -> None:
        if mode not in self.modes:
            raise ValueError(f"mode {mode!r} is not available for scenario {self.tag!r} (use {self.modes})")


def _label_mode(label) -> str:
    if isinstance(label, Prep):
        return "prepare"
    if isinstance(label, Unitary):
        return "unitary"
    if isinstance(label, Pauli):
        return "pauli"
    raise TypeError(f"unsupported label {label!r}")


def scenario_signal(s: Scenario, label1, label2) -> np.ndarray:
    """Channel output for one pair of sender actions."""
    m1, m2 = _label_mode(label1), _label_mode(label2)
    if m1 != m2:
        raise ValueError("both senders must use the same kind of label")
    s.check_mode(m1)
    if m1 == "prepare":
        inp = projector(np.kron(label1.vector(), label2.vector()))
        return ch.apply_channel(ch.adder_channel(2), inp)
    f = ch.unitary_channel(label1.matrix())
    g = ch.unitary_channel(label2.matrix())
    return ch.assisted_output(f, g, s.resource)


def product_ensemble(s: Scenario, p, labels1, q, labels2) -> ProductEnsemble:
    signals = np.array([[scenario_signal(s, a, b) for b in labels2] for a in labels1])
    return ProductEnsemble(np.asarray(p, float), np.asarray(q, float), signals, tuple(labels1), tuple(labels2))


# ---------------------------------------------------------------- fast objectives


def _pair_entropy(t: np.ndarray) -> np.ndarray:
    """Entropy of an equal mixture of two pure states with overlap modulus ``t``."""
    x = np.clip((1 - t) / 2, 0.0, 0.5)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -x * np.log2(np.where(x > 0, x, 1)) - (1 - x) * np.log2(1 - x)
    return np.where(x > 0, h, 0.0)


def _prep_objective(p, q, phis, psis) -> float:
    """Joint Holevo quantity for unassisted pure-state preparations."""
    rho_p = np.einsum("a,ai,aj->ij", p, phis, phis.conj())
    rho_q = np.einsum("b,bi,bj->ij", q, psis, psis.conj())
    avg = (np.kron(rho_p, rho_q) + np.kron(rho_q, rho_p)) / 2
    overlaps = np.abs(phis.conj() @ psis.T) ** 2
    inner = p @ _pair_entropy(overlaps) @ q
    return float(batch_entropy(avg) - inner)


def _unitary_objective(p, q, us, vs, iota: ch.SharedResource) -> float:
    """Joint Holevo quantity when both senders apply unitaries to ``iota``."""
    r = iota.receiver_dim
    psi = iota.state.reshape(2, 2, r)
    # encoded[a, b] = (U_a ⊗ V_b ⊗ 1)|iota>
    enc = np.einsum("aij,bkl,jlr->abikr", us, vs, psi)
    flipped = enc.transpose(0, 1, 3, 2, 4)
    k1, k2 = len(p), len(q)
    enc = enc.reshape(k1, k2, -1)
    flipped = flipped.reshape(k1, k2, -1)
    w = np.outer(p, q)
    avg = (np.einsum("ab,abi,abj->ij", w, enc, enc.conj()) + np.einsum("ab,abi,abj->ij", w, flipped, flipped.conj())) / 2
    t = np.abs(np.einsum("abi,abi->ab", enc.conj(), flipped))
    inner = float(np.sum(w * _pair_entropy(t)))
    return float(batch_entropy(avg) - inner)


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    n = v.size
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1
    rho = np.nonzero(u * np.arange(1, n + 1) > css)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


# ---------------------------------------------------------------- optimizer


@dataclass
class OptimizationResult:
    best_value: float
    best_ensemble: ProductEnsemble
    scenario: Scenario
    mode: str
    seed: int
    restarts: int
    budget: int
    evaluations: int
    restart_values: list = field(default_factory=list)


class _Problem:
    """Parameter layout: weights1, weights2, then per-support angles."""

    def __init__(self, s: Scenario, mode: str, support: int):
        self.s, self.mode, self.k = s, mode, support
        self.iota = s.resource
        self.n_angles = {"prepare": 2, "unitary": 3, "pauli": 0}[mode]
        if mode == "pauli":
            self.k = 4
            self.paulis = np.stack(ch.PAULIS)

    @property
    def dim(self) -> int:
        return 2 * self.k + 2 * self.k * self.n_angles

    def unpack(self, x: np.ndarray):
        k, na = self.k, self.n_angles
        p = project_simplex(x[:k])
        q = project_simplex(x[k : 2 * k])
        a1 = x[2 * k : 2 * k + k * na].reshape(k, na) if na else None
        a2 = x[2 * k + k * na :].reshape(k, na) if na else None
        return p, q, a1, a2

    def value(self, x: np.ndarray) -> float:
        p, q, a1, a2 = self.unpack(x)
        if self.mode == "prepare":
            return _prep_objective(p, q, bloch_vector(a1[:, 0], a1[:, 1]), bloch_vector(a2[:, 0], a2[:, 1]))
        if self.mode == "pauli":
            return _unitary_objective(p, q, self.paulis, self.paulis, self.iota)
        us = euler_unitary(a1[:, 0], a1[:, 1], a1[:, 2])
        vs = euler_unitary(a2[:, 0], a2[:, 1], a2[:, 2])
        return _unitary_objective(p, q, us, vs, self.iota)

    def initial(self, rng: np.random.Generator, centered: bool) -> np.ndarray:
        k, na = self.k, self.n_angles
        w = np.full(2 * k, 1.0 / k) if centered else np.concatenate([rng.dirichlet(np.ones(k)) for _ in range(2)])
        angles = rng.uniform(0, 2 * np.pi, 2 * k * na)
        if na:
            angles.reshape(2 * k, na)[:, 0] = np.arccos(rng.uniform(-1, 1, 2 * k))
        return np.concatenate([w, angles])

    def labels(self, a: np.ndarray | None) -> list:
        if self.mode == "pauli":
            return [Pauli(i) for i in range(4)]
        if self.mode == "prepare":
            return [Prep(float(t), float(f)) for t, f in a]
        return [Unitary(float(t), float(f), float(l)) for t, f, l in a]

    def ensemble(self, x: np.ndarray) -> ProductEnsemble:
        p, q, a1, a2 = self.unpack(x)
        p, l1 = _merge_support(p, self.labels(a1))
        q, l2 = _merge_support(q, self.labels(a2))
        return product_ensemble(self.s, p, l1, q, l2)


def _merge_support(w: np.ndarray, labels: list):
    """Drop zero-weight points and pool the weight of repeated labels."""
    pooled: dict = {}
    for wi, label in zip(w, labels):
        if wi > 0:
            pooled[label] = pooled.get(label, 0.0) + float(wi)
    total = sum(pooled.values())
    return np.array([v / total for v in pooled.values()]), list(pooled)


def optimize_rate_sum(
    s: Scenario,
    restarts: int = 20,
    seed: int = 42,
    budget: int = 20000,
    mode: str | None = None,
    support: int = 4,
) -> OptimizationResult:
    """Multi-start Nelder-Mead search for the largest joint Holevo quantity.

    Restart ``r`` draws its start from an independent child of
    ``SeedSequence(seed)``; restart 0 starts from uniform weights. The
    returned value is recomputed from the explicit signal states of the best
    ensemble.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if not 1 <= support <= 8:
        raise ValueError("support must be between 1 and 8")
    mode = mode or s.modes[0]
    s.check_mode(mode)
    prob = _Problem(s, mode, support)
    children = np.random.SeedSequence(seed).spawn(restarts)
    best_x, best_val, evaluations, values = None, -np.inf, 0, []
    for r, child in enumerate(children):
        rng = np.random.default_rng(child)
        x0 = prob.initial(rng, centered=(r == 0))
        res = minimize(
            lambda x: -prob.value(x),
            x0,
            method="Nelder-Mead",
            options={"maxfev": budget, "fatol": 1e-8, "xatol": 1e-8, "adaptive": True},
        )
        evaluations += int(res.nfev)
        values.append(float(-res.fun))
        if -res.fun > best_val:
            best_x, best_val = res.x, -res.fun
    ensemble = prob.ensemble(best_x)
    return OptimizationResult(
        best_value=joint_holevo(ensemble),
        best_ensemble=ensemble,
        scenario=s,
        mode=mode,
        seed=seed,
        restarts=restarts,
        budget=budget,
        evaluations=evaluations,
        restart_values=values,
    )


def classical_uniform_ensemble() -> ProductEnsemble:
    """Uniform basis-state inputs for both senders, no entanglement."""
    labels = [Prep(0.0, 0.0), Prep(math.pi, 0.0)]
    return product_ensemble(Scenario("unassisted"), [0.5, 0.5], labels, [0.5, 0.5], labels)


def pauli_ensemble(s: Scenario) -> ProductEnsemble:
    """Uniform distribution over the four Pauli encodings for both senders."""
    labels = [Pauli(i) for i in range(4)]
    return product_ensemble(s, np.full(4, 0.25), labels, np.full(4, 0.25), labels)
