"""Single-qubit states: Bloch-vector conversions, the anti-unitary spin flip,
direction fidelity, and shrinking-factor extraction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import hermitian_eigenvalues

__all__ = [
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "BlochVector",
    "QubitState",
    "ShrinkReport",
    "check_density_matrix",
    "bloch_to_state",
    "state_to_bloch",
    "antiunitary_flip",
    "fidelity_direction",
    "shrink_factor",
]

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(frozen=True)
class BlochVector:
    """Real 3-vector inside the unit ball; |n| = 1 for pure states."""

    nx: float
    ny: float
    nz: float

    def __post_init__(self):
        n2 = self.nx**2 + self.ny**2 + self.nz**2
        if not np.isfinite(n2) or n2 > 1.0 + 1e-12:
            raise ValueError(f"Bloch vector has norm {np.sqrt(n2):.12f} > 1")

    @classmethod
    def from_array(cls, arr) -> "BlochVector":
        x, y, z = np.asarray(arr, dtype=float)
        return cls(float(x), float(y), float(z))

    def as_array(self) -> np.ndarray:
        return np.array([self.nx, self.ny, self.nz])

    def norm(self) -> float:
        return float(np.sqrt(self.nx**2 + self.ny**2 + self.nz**2))

    def __neg__(self) -> "BlochVector":
        return BlochVector(-self.nx, -self.ny, -self.nz)


@dataclass(frozen=True)
class QubitState:
    """Pure qubit state alpha|0> + beta|1>, normalized."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        n = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(n - 1.0) > 1e-12:
            raise ValueError(f"amplitudes have squared norm {n!r}, expected 1")

    @classmethod
    def normalized(cls, alpha: complex, beta: complex) -> "QubitState":
        n = np.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
        if n < 1e-12:
            raise ValueError("cannot normalize the zero vector")
        return cls(complex(alpha) / n, complex(beta) / n)

    def ket(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)

    def density(self) -> np.ndarray:
        k = self.ket()
        return np.outer(k, k.conj())


@dataclass(frozen=True)
class ShrinkReport:
    """Shrinking factor eta of an output along a reference direction.

    fidelity = (1 + eta) / 2 when the reference direction is pure.
    """

    eta: float
    fidelity: float
    direction: BlochVector


def check_density_matrix(rho, tol: float = 1e-10) -> np.ndarray:
    """Validate a 2x2 density matrix: Hermitian, unit trace, PSD."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol or abs(np.trace(rho).imag) > tol:
        raise ValueError("density matrix does not have unit trace")
    if hermitian_eigenvalues(rho)[0] < -tol:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def _require_unit(n: BlochVector, tol: float = 1e-10) -> BlochVector:
    if abs(n.norm() - 1.0) > tol:
        raise ValueError(f"direction must be a unit vector, got norm {n.norm():.12f}")
    return n


def bloch_to_state(n: BlochVector) -> QubitState:
    """Pure state along a unit Bloch direction.

    alpha = cos(theta/2), beta = e^{i phi} sin(theta/2); the global phase is
    fixed so the first non-negligible amplitude is real non-negative.
    """
    _require_unit(n)
    theta = np.arccos(np.clip(n.nz, -1.0, 1.0))
    phi = np.arctan2(n.ny, n.nx)
    alpha = np.cos(theta / 2)
    beta = np.exp(1j * phi) * np.sin(theta / 2)
    if alpha < 1e-12:
        alpha, beta = 0.0, abs(beta)
    return QubitState.normalized(alpha, beta)


def state_to_bloch(rho) -> BlochVector:
    """Bloch vector n_k = Tr(rho sigma_k) of a 2x2 density matrix."""
    rho = check_density_matrix(rho)
    return BlochVector(*(float(np.trace(rho @ s).real) for s in PAULI))


def antiunitary_flip(psi: QubitState) -> QubitState:
    """Spin flip (alpha, beta) -> (-beta*, alpha*); negates the Bloch vector.

    Anti-linear, so it is not a physical single-copy operation; it is the
    target map that anti-cloning approximates.
    """
    return QubitState(-np.conj(psi.beta), np.conj(psi.alpha))


def fidelity_direction(rho, n: BlochVector) -> float:
    """Overlap <n|rho|n> of a density matrix with the pure state along n."""
    rho = check_density_matrix(rho)
    _require_unit(n)
    k = bloch_to_state(n).ket()
    return float(np.real(k.conj() @ rho @ k))


def shrink_factor(rho, n: BlochVector) -> ShrinkReport:
    """Shrinking factor along n: eta = 2 <n|rho|n> - 1."""
    f = fidelity_direction(rho, n)
    return ShrinkReport(eta=2.0 * f - 1.0, fidelity=f, direction=n)
