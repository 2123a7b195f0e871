"""Measuring along three orthogonal directions: together or one after another.

At first order the three weak fields contribute additively.  Applied
simultaneously for a window T they reduce to a single effective field (the
vector sum of the three), while applying them in three successive windows of
duration T tags each term with an extra phase exp(i (k-2) omega0T).  The
per-term magnitudes are identical either way, and at omega0T equal to a
multiple of 2 pi the full complex amplitudes coincide.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import CouplingProfile, FieldSpec, MeasurementGeometry, direction_angles, sinc
from .oracle import HamiltonianSchedule

ORTHOGONALITY_TOLERANCE = 1e-12


@dataclass(frozen=True)
class MultiFieldConfig:
    """Three measurement fields sharing one omega0T window each.

    Directions must be mutually orthogonal unit vectors unless relaxed=True,
    in which case the orthogonal flag records the failed check instead of
    raising.
    """

    fields: tuple[FieldSpec, FieldSpec, FieldSpec]
    omega0T: float
    relaxed: bool = False
    orthogonal: bool = True

    def __post_init__(self):
        fields = tuple(self.fields)
        if len(fields) != 3:
            raise ValueError(f"exactly three fields required, got {len(fields)}")
        object.__setattr__(self, "fields", fields)
        if not (math.isfinite(self.omega0T) and self.omega0T >= 0.0):
            raise ValueError(f"omega0T must be finite and >= 0, got {self.omega0T!r}")
        dirs = [f.direction() for f in fields]
        worst = max(
            abs(float(np.dot(dirs[i], dirs[j])))
            for i in range(3)
            for j in range(i + 1, 3)
        )
        ok = worst < ORTHOGONALITY_TOLERANCE
        object.__setattr__(self, "orthogonal", ok)
        if not ok and not self.relaxed:
            raise ValueError(
                f"field directions must be mutually orthogonal "
                f"(worst |n_i . n_j| = {worst!r}); pass relaxed=True to override"
            )

    @classmethod
    def axes(cls, xi1: float, xi2: float, xi3: float, omega0T: float) -> "MultiFieldConfig":
        """Fields along the x, y and z axes with the given strengths."""
        half_pi = 0.5 * math.pi
        return cls(
            fields=(
                FieldSpec(xi1, half_pi, 0.0, direction_index=1),
                FieldSpec(xi2, half_pi, half_pi, direction_index=2),
                FieldSpec(xi3, 0.0, 0.0, direction_index=3),
            ),
            omega0T=omega0T,
        )


def _term_coefficients(config: MultiFieldConfig) -> list[complex]:
    x = 0.5 * config.omega0T
    return [
        x * f.xi * math.sin(f.gamma) * cmath.exp(1j * f.eta)
        for f in config.fields
    ]


def simultaneous_amplitude(config: MultiFieldConfig) -> complex:
    """First-order spin-flip amplitude with all three fields on at once.

    i * (sum_k (omega0T/2) xi_k sin(gamma_k) e^{i eta_k}) * sinc(omega0T/2).
    """
    x = 0.5 * config.omega0T
    return 1j * sum(_term_coefficients(config)) * sinc(x)


def successive_amplitude(config: MultiFieldConfig) -> complex:
    """First-order amplitude after three back-to-back windows of duration T.

    Term k (k = 1, 2, 3 in schedule order) picks up the relative phase
    e^{i (k-2) omega0T}; magnitudes per term match the simultaneous case.
    """
    x = 0.5 * config.omega0T
    total = 0j
    for k, coeff in enumerate(_term_coefficients(config), start=1):
        total += coeff * cmath.exp(1j * (k - 2) * config.omega0T)
    return 1j * total * sinc(x)


def term_magnitudes(config: MultiFieldConfig) -> list[float]:
    """Per-field amplitude magnitudes, common to both protocols."""
    x = 0.5 * config.omega0T
    return [abs(coeff) * abs(sinc(x)) for coeff in _term_coefficients(config)]


def combined_field_geometry(config: MultiFieldConfig) -> MeasurementGeometry:
    """Single-field geometry equivalent to the three simultaneous fields.

    The superposed measurement field is (sum_k xi_k n_k); its magnitude is the
    effective xi and its direction the effective (gamma, eta).
    """
    w = np.zeros(3)
    for f in config.fields:
        w += f.xi * f.direction()
    xi_eff = float(np.linalg.norm(w))
    if xi_eff == 0.0:
        return MeasurementGeometry(0.0, 0.0, 0.0, config.omega0T)
    gamma, eta = direction_angles(w / xi_eff)
    return MeasurementGeometry(xi_eff, gamma, eta, config.omega0T)


def simultaneous_schedule(config: MultiFieldConfig) -> HamiltonianSchedule:
    """Schedule for one window with the superposed field, constant coupling."""
    return HamiltonianSchedule.single(combined_field_geometry(config), CouplingProfile.constant())


def successive_schedule(config: MultiFieldConfig) -> HamiltonianSchedule:
    """Schedule for three equal windows, one field each, constant coupling."""
    geoms = [
        MeasurementGeometry(f.xi, f.gamma, f.eta, config.omega0T)
        for f in config.fields
    ]
    return HamiltonianSchedule.successive(geoms)
