"""Probabilistic exact anti-cloning.

For a known finite set of linearly independent states, an ordinary unitary
plus a probe measurement can anti-clone *exactly*, some of the time. The
achievable success probability f is governed by positive semidefiniteness of
G - f H, where G is the Gram matrix of the inputs and H the Gram matrix of
the target output products. ``max_feasible_f`` finds the supremum by
bisection on the minimum eigenvalue; for two states the answer has the
closed form (1 - c) / (1 - c^(L+M)).

``build_two_state_anticloner`` realizes the optimal two-state machine as an
explicit 8x8 unitary on (copy 1, copy 2, probe), and ``build_prob_spinflip``
does the same for the flip-only variant with orthogonal flag kets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import RankError, hermitian_eigenvalues, tensor, unitary_from_correspondence
from .qubit import QubitState, antiunitary_flip
from .rng import philox_stream

__all__ = [
    "StateSet",
    "CopySpec",
    "FeasibilityResult",
    "ProbCloner",
    "ShotStats",
    "two_state_efficiency",
    "max_feasible_f",
    "build_two_state_anticloner",
    "run_prob_anticlone",
    "build_prob_spinflip",
]

PSD_TOLERANCE = 1e-12   # minimum-eigenvalue threshold for the PSD test
BISECTION_WIDTH = 1e-12


def _basis(dim: int, k: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[k] = 1.0
    return v


@dataclass(frozen=True)
class StateSet:
    """Known candidate input states, optionally labeled."""

    states: list[QubitState]
    labels: list[str] | None = None

    def __post_init__(self):
        if not self.states:
            raise ValueError("state set must be non-empty")
        if self.labels is not None and len(self.labels) != len(self.states):
            raise ValueError("labels, when given, must match the states one-to-one")

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class CopySpec:
    """Output layout: L aligned copies and M anti-aligned copies."""

    L: int
    M: int

    def __post_init__(self):
        if self.L < 0 or self.M < 0 or self.L + self.M < 1:
            raise ValueError("need non-negative copy counts with L + M >= 1")


@dataclass(frozen=True)
class FeasibilityResult:
    """Maximum exact-cloning probability with its eigenvalue certificate."""

    f_max: float
    min_eigenvalue_at_f: float
    gram_G: np.ndarray
    gram_H: np.ndarray


@dataclass(frozen=True)
class ProbCloner:
    """Explicit two-state probabilistic anti-cloner.

    ``u`` acts on (copy 1, copy 2, probe); measuring the probe in
    {success, fail} reveals whether the copies are exact.
    """

    u: np.ndarray
    theta: float
    f: float
    probe_success_ket: np.ndarray
    probe_fail_ket: np.ndarray
    garbage: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=complex)
        object.__setattr__(self, "u", u)
        if u.shape != (8, 8):
            raise ValueError(f"expected an 8x8 unitary, got {u.shape}")
        if np.max(np.abs(u.conj().T @ u - np.eye(8))) > 1e-10:
            raise ValueError("matrix is not unitary within tolerance")
        expected = two_state_efficiency(np.cos(self.theta))
        if abs(self.f - expected) > 1e-12:
            raise ValueError(f"f={self.f!r} does not match the efficiency bound {expected!r}")

    def input_state(self, which: int) -> QubitState:
        """The two cloneable inputs: 1 -> |0>, 2 -> cos(theta)|0> + sin(theta)|1>."""
        if which == 1:
            return QubitState(1.0, 0.0)
        if which == 2:
            return QubitState.normalized(np.cos(self.theta), np.sin(self.theta))
        raise ValueError(f"input index must be 1 or 2, got {which!r}")


@dataclass(frozen=True)
class ShotStats:
    """Outcome counts of a probe-measurement experiment.

    ``shots == 0`` marks exact-amplitude mode: no sampling, only the exact
    ``success_probability`` and the post-selected fidelity.
    """

    shots: int
    successes: int
    success_probability: float
    post_selected_fidelity: float
    seed: int

    def __post_init__(self):
        if self.successes > max(self.shots, 0):
            raise ValueError("successes cannot exceed shots")


def two_state_efficiency(overlap: float, L: int = 1, M: int = 1) -> float:
    """Closed-form maximum success probability for two states.

    ``overlap`` is |<m1|m2>|. Equals (1 - c) / (1 - c^(L+M)); the many-copy
    limit is the unambiguous-discrimination probability 1 - c.
    """
    c = float(overlap)
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"overlap must lie in [0, 1], got {c}")
    k = L + M
    if k < 1:
        raise ValueError("need at least one copy")
    if c > 1.0 - 1e-12:
        return 1.0 / k  # limit of (1-c)/(1-c^k) as c -> 1
    return (1.0 - c) / (1.0 - c**k)


def _aligned_kets(states: list[QubitState]) -> list[np.ndarray]:
    """Phase-redefine so every overlap against state 1 is real non-negative."""
    kets = [s.ket() for s in states]
    out = [kets[0]]
    for k in kets[1:]:
        ov = np.vdot(kets[0], k)
        if abs(ov) > 1e-14:
            k = k * (np.conj(ov) / abs(ov))
        out.append(k)
    return out


def _flip_ket(k: np.ndarray) -> np.ndarray:
    return np.array([-np.conj(k[1]), np.conj(k[0])])


def max_feasible_f(state_set: StateSet, mu: CopySpec = CopySpec(1, 1)) -> FeasibilityResult:
    """Largest f with G - f H positive semidefinite, by bisection.

    G collects the input overlaps; H the overlaps of the target outputs,
    i.e. elementwise G^L times the anti-aligned overlaps^M. Linearly
    dependent sets drive f to zero: no machine can clone more states than
    the dimension supports.
    """
    kets = _aligned_kets(state_set.states)
    flipped = [_flip_ket(k) for k in kets]
    n = len(kets)
    g = np.array([[np.vdot(kets[i], kets[j]) for j in range(n)] for i in range(n)])
    gf = np.array([[np.vdot(flipped[i], flipped[j]) for j in range(n)] for i in range(n)])
    h = (g**mu.L) * (gf**mu.M)

    def feasible(f: float) -> bool:
        return hermitian_eigenvalues(g - f * h)[0] >= -PSD_TOLERANCE

    lo, hi = 0.0, 1.0
    if feasible(hi):
        f_max = 1.0
    else:
        while hi - lo > BISECTION_WIDTH:
            mid = 0.5 * (lo + hi)
            if feasible(mid):
                lo = mid
            else:
                hi = mid
        f_max = lo
    min_eig = float(hermitian_eigenvalues(g - f_max * h)[0])
    return FeasibilityResult(f_max=f_max, min_eigenvalue_at_f=min_eig, gram_G=g, gram_H=h)


def build_two_state_anticloner(theta: float) -> ProbCloner:
    """Optimal anti-cloner for {|0>, cos(theta)|0> + sin(theta)|1>}.

    The unitary sends |000> and |100> to the two explicit image states whose
    probe-success components are exactly the anti-cloned pairs; the other six
    basis images come from deterministic orthonormal completion. The factors
    (1 - cos)/sin are evaluated as tan(theta/2) so nothing blows up near the
    ends of the allowed range.
    """
    theta = float(theta)
    if not 0.0 < theta <= np.pi / 2:
        raise ValueError(f"theta must lie in (0, pi/2], got {theta}")
    ct, st = np.cos(theta), np.sin(theta)
    if ct < 1e-15:
        ct = 0.0  # exact zero at theta = pi/2, where cos() leaves ~6e-17 dust
    t2 = np.tan(theta / 2)
    root = np.sqrt(1.0 + ct)

    n1 = np.zeros(8, dtype=complex)
    n1[0b010] = 1.0 / root
    n1[0b001] = np.sqrt(ct) / root

    n2 = np.zeros(8, dtype=complex)
    n2[0b000] = -ct / root
    n2[0b010] = -ct * t2 / root
    n2[0b100] = -st / root
    n2[0b110] = ct / root
    n2[0b001] = np.sqrt(ct) * t2 / root

    u = unitary_from_correspondence([_basis(8, 0b000), _basis(8, 0b100)], [n1, n2])
    return ProbCloner(
        u=u,
        theta=theta,
        f=two_state_efficiency(ct),
        probe_success_ket=_basis(2, 0),
        probe_fail_ket=_basis(2, 1),
        garbage=_basis(4, 0),
    )


def run_prob_anticlone(
    pc: ProbCloner, which: int, shots: int, seed: int = 0, batch_size: int = 1 << 16
) -> ShotStats:
    """Feed one of the two known inputs through the machine and measure.

    Prepares |m>|0> |success-probe>, applies the unitary, and projects the
    probe. The exact success probability and the post-selected fidelity
    against (|m>, |-m>) come from the amplitudes; ``shots`` > 0 additionally
    samples the success count (``shots == 0`` skips sampling entirely).
    """
    m = pc.input_state(which)
    if shots < 0:
        raise ValueError("shots must be >= 0")
    start = tensor(m.ket(), _basis(2, 0), pc.probe_success_ket)
    out = pc.u @ start
    # probe is the last register: amplitudes reshape to (copies, probe)
    amps = out.reshape(4, 2)
    success_branch = amps @ pc.probe_success_ket.conj()
    p_success = float(np.vdot(success_branch, success_branch).real)

    target = tensor(m.ket(), antiunitary_flip(m).ket())
    if p_success > 1e-15:
        post = success_branch / np.sqrt(p_success)
        fidelity = float(abs(np.vdot(target, post)) ** 2)
    else:
        fidelity = 0.0

    successes = 0
    done = 0
    batch_index = 0
    while done < shots:
        b = min(batch_size, shots - done)
        rng = philox_stream(seed, batch_index)
        successes += int(rng.binomial(b, p_success))
        done += b
        batch_index += 1
    return ShotStats(
        shots=shots,
        successes=successes,
        success_probability=p_success,
        post_selected_fidelity=fidelity,
        seed=seed,
    )


def build_prob_spinflip(m1: QubitState, m2: QubitState) -> tuple[np.ndarray, float]:
    """Probabilistic exact spin flip for two known states.

    Success probability F = 1 - |<m1|m2>|, the two-state distinguishability.
    On success the flipped state arrives tagged with one of two orthogonal
    flag kets, so the machine simultaneously identifies which input it got.
    Registers: (output qubit, flag, status), status |0> = success.
    """
    k1, k2 = _aligned_kets([m1, m2])
    c = float(np.vdot(k1, k2).real)
    if c > 1.0 - 1e-12:
        raise RankError("inputs are linearly dependent; flip probability would be zero")
    big_f = 1.0 - c

    ok, fail = _basis(2, 0), _basis(2, 1)
    garbage = _basis(4, 0)
    inputs = [tensor(k, _basis(2, 0), _basis(2, 0)) for k in (k1, k2)]
    images = [
        np.sqrt(big_f) * tensor(_flip_ket(k), flag, ok) + np.sqrt(c) * tensor(garbage, fail)
        for k, flag in ((k1, _basis(2, 0)), (k2, _basis(2, 1)))
    ]
    u = unitary_from_correspondence(inputs, images)
    return u, big_f
