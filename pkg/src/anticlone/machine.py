"""The universal anti-cloner.

A single unitary acting on (input qubit, blank qubit, 4-dim ancilla) that
emits one copy aligned with the unknown input direction and one copy
anti-aligned, both shrunk by the same factor eta. The machine is represented
as a 16x2 isometry: the images of |0> and |1> as 4-qubit states ordered
(clone 1, clone 2, ancilla qubit 1, ancilla qubit 2).

The optimal machine reaches eta = 1/3 (fidelity 2/3) for every input
direction; ``constraint_residuals`` evaluates the full constraint system that
pins that solution down, and ``measure_prepare_baseline`` estimates the
measure-and-prepare strategy it has to beat.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import partial_trace, tensor
from .rng import philox_stream
from .qubit import PAULI, BlochVector, QubitState, fidelity_direction, state_to_bloch

__all__ = [
    "COEFF_KEYS",
    "AnticlonerParams",
    "CloneOutput",
    "ConstraintReport",
    "BaselineReport",
    "optimal_params",
    "build_isometry",
    "anticlone",
    "target_forms",
    "constraint_residuals",
    "measure_prepare_baseline",
    "haar_directions",
]

# Coefficient slots of the two-row transform: plain row is the image of |0>,
# "t"-suffixed (tilded) row the image of |1>.
COEFF_KEYS = ("a", "b", "c", "d", "at", "bt", "ct", "dt")

OPTIMAL_ETA = 1.0 / 3.0
OPTIMAL_FIDELITY = 2.0 / 3.0


def _basis(dim: int, k: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[k] = 1.0
    return v


@dataclass(frozen=True)
class AnticlonerParams:
    """Coefficients and 4-dim ancilla kets of the general two-row transform.

    Ancillas must be normalized; the coefficient rows are *not* forced to be
    normalized here, since ``constraint_residuals`` exists precisely to report
    how far a parameter set is from satisfying the constraint system.
    """

    coeffs: dict[str, complex]
    ancillas: dict[str, np.ndarray]

    def __post_init__(self):
        if set(self.coeffs) != set(COEFF_KEYS):
            raise ValueError(f"coeffs must have exactly the keys {COEFF_KEYS}")
        if set(self.ancillas) != set(COEFF_KEYS):
            raise ValueError(f"ancillas must have exactly the keys {COEFF_KEYS}")
        object.__setattr__(
            self, "coeffs", {k: complex(self.coeffs[k]) for k in COEFF_KEYS}
        )
        ancs = {}
        for k in COEFF_KEYS:
            v = np.asarray(self.ancillas[k], dtype=complex)
            if v.shape != (4,):
                raise ValueError(f"ancilla {k!r} must be a 4-dim ket, got shape {v.shape}")
            if abs(np.linalg.norm(v) - 1.0) > 1e-10:
                raise ValueError(f"ancilla {k!r} is not normalized")
            ancs[k] = v
        object.__setattr__(self, "ancillas", ancs)

    def replace_coeff(self, key: str, value: complex) -> "AnticlonerParams":
        coeffs = dict(self.coeffs)
        coeffs[key] = complex(value)
        return AnticlonerParams(coeffs, self.ancillas)


@dataclass(frozen=True)
class CloneOutput:
    """Joint output state and the two reduced single-qubit outputs."""

    joint: np.ndarray
    rho1: np.ndarray
    rho2: np.ndarray
    f1: float
    f2: float
    eta1: float
    eta2: float


@dataclass(frozen=True)
class ConstraintReport:
    """Residual magnitudes of the anti-cloner constraint system.

    ``eta_values`` holds the four independent expressions that must agree on
    the shrinking factor; their maximum pairwise spread is the
    ``eta_consistency`` residual.
    """

    residuals: dict[str, float]
    eta_values: dict[str, float]

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())


@dataclass(frozen=True)
class BaselineReport:
    """Monte Carlo estimate of the measure-and-prepare strategy."""

    avg_fidelity_clone: float
    avg_fidelity_anticlone: float
    samples: int
    seed: int
    stderr: float


def optimal_params() -> AnticlonerParams:
    """The optimal anti-cloner solution: eta = 1/3 for every input direction.

    Moduli (1/sqrt(6) everywhere except |b| = 1/sqrt(2)), the two non-zero
    phases pi and arccos(1/sqrt(3)), and one fixed orthogonality pattern for
    the ancilla kets.
    """
    r6 = np.sqrt(1.0 / 6.0)
    b = np.sqrt(0.5) * np.exp(1j * np.arccos(1.0 / np.sqrt(3.0)))
    coeffs = {
        "a": r6, "b": b, "c": -r6, "d": r6,
        "at": r6, "bt": b, "ct": -r6, "dt": r6,
    }
    ancillas = {
        "a": _basis(4, 0), "at": _basis(4, 1),
        "b": _basis(4, 1), "bt": _basis(4, 0),
        "c": _basis(4, 1), "ct": _basis(4, 0),
        "d": _basis(4, 2), "dt": _basis(4, 3),
    }
    return AnticlonerParams(coeffs, ancillas)


def build_isometry(p: AnticlonerParams, tol: float = 1e-10) -> np.ndarray:
    """Assemble the 16x2 isometry from a parameter set.

    Image of |0>: a|00>A + b|01>B + c|10>C + d|11>D; image of |1> is the
    tilded row on the bit-flipped clone kets: at|11>At + bt|10>Bt + ct|01>Ct
    + dt|00>Dt. Raises if the result is not an isometry within ``tol``.
    """
    c, anc = p.coeffs, p.ancillas
    e0, e1 = _basis(2, 0), _basis(2, 1)
    col0 = (
        c["a"] * tensor(e0, e0, anc["a"])
        + c["b"] * tensor(e0, e1, anc["b"])
        + c["c"] * tensor(e1, e0, anc["c"])
        + c["d"] * tensor(e1, e1, anc["d"])
    )
    col1 = (
        c["at"] * tensor(e1, e1, anc["at"])
        + c["bt"] * tensor(e1, e0, anc["bt"])
        + c["ct"] * tensor(e0, e1, anc["ct"])
        + c["dt"] * tensor(e0, e0, anc["dt"])
    )
    v = np.stack([col0, col1], axis=1)
    err = np.max(np.abs(v.conj().T @ v - np.eye(2)))
    if err > tol:
        raise ValueError(f"parameters do not define an isometry (deviation {err:.3e})")
    return v


def _split_dims(rows: int) -> list[int]:
    if rows % 4 != 0 or rows < 4:
        raise ValueError(f"isometry must map one qubit into (2 x 2 x k), got {rows} rows")
    anc = rows // 4
    return [2, 2] + ([anc] if anc > 1 else [])


def anticlone(psi: QubitState, v: np.ndarray, tol: float = 1e-10) -> CloneOutput:
    """Send one qubit through the machine and reduce to the two clones.

    ``v`` is an isometry from the input qubit into (clone 1, clone 2,
    ancilla); the ancilla may have dimension 1, 2 or 4. Fidelities are taken
    against the input direction for clone 1 and the opposite direction for
    clone 2.
    """
    v = np.asarray(v, dtype=complex)
    if v.ndim != 2 or v.shape[1] != 2:
        raise ValueError(f"expected an isometry with two columns, got {v.shape}")
    dims = _split_dims(v.shape[0])
    if np.max(np.abs(v.conj().T @ v - np.eye(2))) > tol:
        raise ValueError("matrix is not an isometry within tolerance")

    joint = v @ psi.ket()
    rho_joint = np.outer(joint, joint.conj())
    rho1 = partial_trace(rho_joint, dims, [0])
    rho2 = partial_trace(rho_joint, dims, [1])
    n = state_to_bloch(psi.density())
    f1 = fidelity_direction(rho1, n)
    f2 = fidelity_direction(rho2, -n)
    return CloneOutput(
        joint=joint, rho1=rho1, rho2=rho2,
        f1=f1, f2=f2, eta1=2 * f1 - 1, eta2=2 * f2 - 1,
    )


def target_forms(n: BlochVector, eta: float) -> tuple[np.ndarray, np.ndarray]:
    """Ideal output pair ((1 + eta n.sigma)/2, (1 - eta n.sigma)/2)."""
    if abs(n.norm() - 1.0) > 1e-10:
        raise ValueError("direction must be a unit vector")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"shrinking factor must lie in [0, 1], got {eta}")
    ndots = sum(comp * s for comp, s in zip(n.as_array(), PAULI))
    eye = np.eye(2, dtype=complex)
    return 0.5 * (eye + eta * ndots), 0.5 * (eye - eta * ndots)


def constraint_residuals(p: AnticlonerParams) -> ConstraintReport:
    """Evaluate every constraint of the anti-cloner system as a residual.

    Normalization of both coefficient rows, orthogonality of the two images,
    the modulus ties, the z cross-term cancellation, consistency of the four
    expressions for eta, the eight cross-term zero conditions, and the
    0 <-> 1 relabeling symmetry. Nothing raises; residuals just get reported.
    """
    c = p.coeffs
    ip = {k1 + k2: complex(np.vdot(p.ancillas[k1], p.ancillas[k2]))
          for k1 in COEFF_KEYS for k2 in COEFF_KEYS}

    a, b, cc, d = c["a"], c["b"], c["c"], c["d"]
    at, bt, ct, dt = c["at"], c["bt"], c["ct"], c["dt"]

    eta_moduli = abs(b) ** 2 - abs(cc) ** 2
    eta_moduli_alt = 2 * abs(b) ** 2 + 2 * abs(a) ** 2 - 1
    cross_aligned = np.conj(a) * bt * ip["abt"] + np.conj(b) * at * ip["bat"]
    cross_flipped = ct * np.conj(a) * ip["act"] + at * np.conj(cc) * ip["cat"]
    # The flipped copy's transverse terms enter with opposite sign, so this
    # expression equals -eta when the system is satisfied.
    eta_values = {
        "moduli": float(eta_moduli),
        "moduli_alt": float(eta_moduli_alt),
        "aligned_cross": float(np.real(cross_aligned)),
        "flipped_cross": float(-np.real(cross_flipped)),
    }
    etas = list(eta_values.values())
    eta_spread = max(abs(x - y) for x in etas for y in etas)

    residuals = {
        "norm_input0": abs(abs(a) ** 2 + abs(b) ** 2 + abs(cc) ** 2 + abs(d) ** 2 - 1),
        "norm_input1": abs(abs(at) ** 2 + abs(bt) ** 2 + abs(ct) ** 2 + abs(dt) ** 2 - 1),
        "orthogonality": abs(
            np.conj(a) * dt * ip["adt"] + np.conj(cc) * bt * ip["cbt"]
            + np.conj(b) * ct * ip["bct"] + np.conj(d) * at * ip["dat"]
        ),
        "mod_a_d": abs(abs(a) - abs(d)),
        "mod_at_dt": abs(abs(at) - abs(dt)),
        "z_cross": abs(
            a * np.conj(dt) * ip["dta"] + b * np.conj(ct) * ip["ctb"]
            - cc * np.conj(bt) * ip["btc"] - d * np.conj(at) * ip["atd"]
        ),
        "eta_consistency": float(eta_spread),
        "im_aligned_cross": abs(np.imag(cross_aligned)),
        "im_flipped_cross": abs(np.imag(cross_flipped)),
        "cross_b_dt": abs(b * np.conj(dt) * ip["dtb"] + d * np.conj(bt) * ip["btd"]),
        "cross_c_a": abs(cc * np.conj(a) * ip["ac"] + d * np.conj(b) * ip["bd"]),
        "cross_at_ct": abs(at * np.conj(ct) * ip["ctat"] + bt * np.conj(dt) * ip["dtbt"]),
        "cross_c_dt": abs(cc * np.conj(dt) * ip["dtc"] + d * np.conj(ct) * ip["ctd"]),
        "cross_a_b": abs(np.conj(a) * b * ip["ab"] + np.conj(cc) * d * ip["cd"]),
        "cross_bt_at": abs(np.conj(bt) * at * ip["btat"] + np.conj(dt) * ct * ip["dtct"]),
        "sym_a": abs(abs(a) - abs(at)),
        "sym_b": abs(abs(b) - abs(bt)),
        "sym_c": abs(abs(cc) - abs(ct)),
    }
    residuals = {k: float(v) for k, v in residuals.items()}
    return ConstraintReport(residuals=residuals, eta_values=eta_values)


def _unit_rows(rng: np.random.Generator, count: int) -> np.ndarray:
    v = rng.standard_normal((count, 3))
    norms = np.linalg.norm(v, axis=1)
    # a Gaussian triple is never numerically zero in practice; guard anyway
    bad = norms < 1e-12
    if np.any(bad):
        v[bad] = np.array([0.0, 0.0, 1.0])
        norms[bad] = 1.0
    return v / norms[:, None]


def haar_directions(count: int, seed: int = 0) -> np.ndarray:
    """``count`` directions uniform on the sphere, as an (N, 3) array."""
    if count < 1:
        raise ValueError("need at least one direction")
    return _unit_rows(philox_stream(seed, 0), count)


def measure_prepare_baseline(
    samples: int,
    seed: int = 0,
    align_with_input: bool = False,
    batch_size: int = 1 << 15,
) -> BaselineReport:
    """Monte Carlo fidelity of "measure, then prepare an opposite pair".

    Each sample draws a uniform input direction n and a uniform measurement
    axis m, projects onto {|m>, |-m>}, and prepares (|m>, |-m>) or
    (|-m>, |m>) according to the outcome. Reports the average fidelity of
    each output against its target (n for the copy, -n for the anti-copy)
    and the standard error of the anti-copy average.

    ``align_with_input`` is a diagnostic mode that forces m = n, making the
    measurement deterministic and both fidelities exactly 1.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    sum1 = sum2 = sum2_sq = 0.0
    done = 0
    batch_index = 0
    while done < samples:
        m = min(batch_size, samples - done)
        rng = philox_stream(seed, batch_index)
        n_dirs = _unit_rows(rng, m)
        m_dirs = n_dirs if align_with_input else _unit_rows(rng, m)
        p_up = 0.5 * (1.0 + np.sum(n_dirs * m_dirs, axis=1))
        got_up = rng.random(m) < p_up
        sign = np.where(got_up, 1.0, -1.0)
        prep1 = sign[:, None] * m_dirs   # copy aligned with the outcome
        prep2 = -prep1                   # anti-copy
        f1 = 0.5 * (1.0 + np.sum(n_dirs * prep1, axis=1))
        f2 = 0.5 * (1.0 - np.sum(n_dirs * prep2, axis=1))
        sum1 += float(np.sum(f1))
        sum2 += float(np.sum(f2))
        sum2_sq += float(np.sum(f2 * f2))
        done += m
        batch_index += 1

    mean1 = sum1 / samples
    mean2 = sum2 / samples
    var2 = max(0.0, sum2_sq / samples - mean2 * mean2)
    stderr = float(np.sqrt(var2 / samples))
    return BaselineReport(
        avg_fidelity_clone=mean1,
        avg_fidelity_anticlone=mean2,
        samples=samples,
        seed=seed,
        stderr=stderr,
    )
