"""Bloch-vector state reconstruction from expectation values.

Protective measurements along an orthonormal direction triple {n_k} yield the
expectation values e_k = <sigma . n_k>; the state follows from the Bloch
inversion rho = (I + r . sigma)/2 with r = sum_k e_k n_k.  A sign-corrupted
reading on one axis tilts r but keeps it on the unit sphere, so the
reconstruction stays a pure state while its overlap with the true one drops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import direction_vector
from .oracle import SpinState

ORTHONORMALITY_TOLERANCE = 1e-9
BLOCH_EXCESS_TOLERANCE = 1e-9
_HERMITICITY_TOLERANCE = 1e-12


@dataclass(frozen=True)
class DensityMatrix:
    """2x2 density matrix, validated on construction.

    Hermiticity and unit trace within 1e-12; positive semidefiniteness up to
    -1e-12 on the diagonal and determinant.
    """

    rho00: complex
    rho01: complex
    rho10: complex
    rho11: complex

    def __post_init__(self):
        for name in ("rho00", "rho01", "rho10", "rho11"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if abs(self.rho10 - self.rho01.conjugate()) > _HERMITICITY_TOLERANCE:
            raise ValueError("density matrix must be Hermitian")
        if abs(self.rho00.imag) > _HERMITICITY_TOLERANCE or abs(self.rho11.imag) > _HERMITICITY_TOLERANCE:
            raise ValueError("diagonal entries must be real")
        if abs(self.rho00 + self.rho11 - 1.0) > _HERMITICITY_TOLERANCE:
            raise ValueError("trace must equal 1")
        det = (self.rho00 * self.rho11 - self.rho01 * self.rho10).real
        if self.rho00.real < -1e-12 or self.rho11.real < -1e-12 or det < -1e-12:
            raise ValueError("density matrix must be positive semidefinite")

    @classmethod
    def from_bloch(cls, r) -> "DensityMatrix":
        rx, ry, rz = (float(c) for c in r)
        return cls(
            rho00=0.5 * (1.0 + rz),
            rho01=0.5 * (rx - 1j * ry),
            rho10=0.5 * (rx + 1j * ry),
            rho11=0.5 * (1.0 - rz),
        )

    @property
    def bloch_vector(self) -> np.ndarray:
        return np.array([
            2.0 * self.rho01.real,
            -2.0 * self.rho01.imag,
            (self.rho00 - self.rho11).real,
        ])

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.rho00, self.rho01], [self.rho10, self.rho11]])

    def as_dict(self) -> dict:
        bloch = self.bloch_vector
        return {
            "rho00": {"re": self.rho00.real, "im": self.rho00.imag},
            "rho01": {"re": self.rho01.real, "im": self.rho01.imag},
            "rho10": {"re": self.rho10.real, "im": self.rho10.imag},
            "rho11": {"re": self.rho11.real, "im": self.rho11.imag},
            "bloch_vector": [float(c) for c in bloch],
        }


@dataclass(frozen=True)
class ExpectationTriple:
    """Spin expectation values along an orthonormal direction triple."""

    directions: tuple[tuple[float, float, float], ...]
    values: tuple[float, float, float]

    def __post_init__(self):
        dirs = tuple(tuple(float(c) for c in d) for d in self.directions)
        vals = tuple(float(v) for v in self.values)
        if len(dirs) != 3 or any(len(d) != 3 for d in dirs):
            raise ValueError("directions must be three 3-vectors")
        if len(vals) != 3:
            raise ValueError("exactly three expectation values required")
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "values", vals)
        mat = np.array(dirs)
        gram = mat @ mat.T
        if np.max(np.abs(gram - np.eye(3))) > ORTHONORMALITY_TOLERANCE:
            raise ValueError("directions must form an orthonormal triple")
        if any(abs(v) > 1.0 + BLOCH_EXCESS_TOLERANCE for v in vals):
            raise ValueError(f"expectation values must lie in [-1, 1], got {vals!r}")
        r = mat.T @ np.array(vals)
        if np.linalg.norm(r) > 1.0 + BLOCH_EXCESS_TOLERANCE:
            raise ValueError(
                f"expectation values imply |r| = {float(np.linalg.norm(r))!r} > 1"
            )

    def bloch_vector(self) -> np.ndarray:
        mat = np.array(self.directions)
        return mat.T @ np.array(self.values)


@dataclass(frozen=True)
class ReconstructionResult:
    rho: DensityMatrix
    bloch_vector: np.ndarray
    clipped: bool


def reconstruct_state(data: ExpectationTriple) -> ReconstructionResult:
    """Invert expectation values to a density matrix.

    A Bloch vector pushed past unit length by measurement noise is clipped
    radially back to the sphere and flagged.
    """
    r = data.bloch_vector()
    norm = float(np.linalg.norm(r))
    clipped = norm > 1.0
    if clipped:
        r = r / norm
    return ReconstructionResult(rho=DensityMatrix.from_bloch(r), bloch_vector=r, clipped=clipped)


def fidelity(rho: DensityMatrix, reference: SpinState) -> float:
    """sqrt(<ref| rho |ref>) for a pure reference state."""
    if abs(reference.norm() - 1.0) > 1e-10:
        raise ValueError(f"reference state must be normalized, |psi| = {reference.norm()!r}")
    psi = reference.as_array()
    overlap = (psi.conjugate() @ (rho.as_matrix() @ psi)).real
    return math.sqrt(max(overlap, 0.0))


def measurement_triple(gamma: float, eta: float = 0.0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Orthonormal triple whose third axis has polar angle gamma, azimuth eta."""
    n3 = direction_vector(gamma, eta)
    n1 = np.array([
        math.cos(gamma) * math.cos(eta),
        math.cos(gamma) * math.sin(eta),
        -math.sin(gamma),
    ])
    n2 = np.cross(n3, n1)
    return n1, n2, n3


def corrupted_reconstruction(gamma: float, eta: float = 0.0) -> tuple[DensityMatrix, float]:
    """Reconstruction of |+> with the reading along the third axis sign-flipped.

    The true expectation values of |+> along the triple are the z-components
    of the axes; corrupting e_3 = cos(gamma) to -cos(gamma) rotates the
    reconstructed Bloch vector to r = e_z - 2 cos(gamma) n_3, still a pure
    state, whose fidelity against |+> is sin(gamma).
    """
    if not (math.isfinite(gamma) and 0.0 <= gamma <= math.pi):
        raise ValueError(f"gamma must lie in [0, pi], got {gamma!r}")
    n1, n2, n3 = measurement_triple(gamma, eta)
    values = (float(n1[2]), float(n2[2]), -float(n3[2]))
    triple = ExpectationTriple(
        directions=(tuple(n1), tuple(n2), tuple(n3)),
        values=values,
    )
    result = reconstruct_state(triple)
    return result.rho, fidelity(result.rho, SpinState.plus())
