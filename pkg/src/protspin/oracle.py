"""Direct numerical propagation of the two-level Schrodinger equation.

This module is the ground truth the closed forms are checked against.  It
shares no algebra with them: each time step applies the exact 2x2 unitary
exp(+i (omega0T/2) ds [sigma_z + xi gT(s) (n.sigma)]) evaluated at the step
midpoint (exponential midpoint rule, second order in the step size, exactly
unitary at every step).  For a constant profile the Hamiltonian is static and
the stepping is exact at any step count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CouplingProfile, MeasurementGeometry, ProfileKind, coupling_eval
from .dyson import first_order_amplitude
from .exact import amplitude_exact, survival_split

DEFAULT_STEPS = 2 ** 14
MAX_ADAPTIVE_STEPS = 2 ** 22
ADAPTIVE_TOLERANCE = 1e-10
_CHUNK = 2 ** 17


class ConvergenceError(RuntimeError):
    """Adaptive step doubling hit the cap without meeting the tolerance."""


@dataclass(frozen=True)
class SpinState:
    """Spin amplitudes in the protection-field eigenbasis (c_plus, c_minus)."""

    c_plus: complex
    c_minus: complex

    @classmethod
    def plus(cls) -> "SpinState":
        return cls(1.0 + 0.0j, 0.0 + 0.0j)

    @classmethod
    def minus(cls) -> "SpinState":
        return cls(0.0 + 0.0j, 1.0 + 0.0j)

    def norm(self) -> float:
        return math.sqrt(abs(self.c_plus) ** 2 + abs(self.c_minus) ** 2)

    def as_array(self) -> np.ndarray:
        return np.array([self.c_plus, self.c_minus], dtype=complex)


@dataclass(frozen=True)
class Segment:
    """One leg of a schedule: a fraction of total time with its own field."""

    fraction: float
    geom: MeasurementGeometry
    profile: CouplingProfile

    def __post_init__(self):
        if not (math.isfinite(self.fraction) and self.fraction > 0.0):
            raise ValueError(f"segment fraction must be positive, got {self.fraction!r}")


@dataclass(frozen=True)
class HamiltonianSchedule:
    """Ordered measurement segments covering the full evolution window.

    Each segment's geom.omega0T is the dimensionless budget of that segment
    alone, so it must be proportional to the segment's duration fraction
    (the protection field, hence omega0, is common to all segments).
    """

    segments: tuple[Segment, ...]

    def __post_init__(self):
        if not self.segments:
            raise ValueError("schedule needs at least one segment")
        segments = tuple(self.segments)
        object.__setattr__(self, "segments", segments)
        total_fraction = math.fsum(seg.fraction for seg in segments)
        if abs(total_fraction - 1.0) > 1e-12:
            raise ValueError(f"segment fractions must sum to 1, got {total_fraction!r}")
        total = self.omega0T_total
        for k, seg in enumerate(segments):
            expected = seg.fraction * total
            if abs(expected - seg.geom.omega0T) > 1e-9 * max(total, 1.0):
                raise ValueError(
                    f"segment {k}: omega0T {seg.geom.omega0T!r} inconsistent with "
                    f"fraction {seg.fraction!r} of total {total!r}"
                )

    @property
    def omega0T_total(self) -> float:
        return math.fsum(seg.geom.omega0T for seg in self.segments)

    @classmethod
    def single(cls, geom: MeasurementGeometry, profile: CouplingProfile) -> "HamiltonianSchedule":
        return cls((Segment(1.0, geom, profile),))

    @classmethod
    def successive(cls, geoms, profiles=None) -> "HamiltonianSchedule":
        """Equal-duration segments, one per geometry, in the given order."""
        geoms = tuple(geoms)
        if not geoms:
            raise ValueError("need at least one geometry")
        if profiles is None:
            profiles = tuple(CouplingProfile.constant() for _ in geoms)
        else:
            profiles = tuple(profiles)
            if len(profiles) != len(geoms):
                raise ValueError("profiles and geometries must pair up")
        frac = 1.0 / len(geoms)
        return cls(tuple(Segment(frac, g, p) for g, p in zip(geoms, profiles)))


def _reunitarize(mats: np.ndarray) -> np.ndarray:
    # one Newton step toward U^H U = I; keeps round-off from compounding
    gram = np.matmul(np.conjugate(np.swapaxes(mats, -1, -2)), mats)
    correction = 1.5 * np.eye(2, dtype=complex) - 0.5 * gram
    return np.matmul(mats, correction)


def _pairwise_product(mats: np.ndarray) -> np.ndarray:
    # Time-ordered product U[n-1] @ ... @ U[0] by pairwise reduction.
    while mats.shape[0] > 1:
        m = mats.shape[0] // 2
        head = _reunitarize(np.matmul(mats[1:2 * m:2], mats[0:2 * m:2]))
        if mats.shape[0] % 2:
            mats = np.concatenate([head, mats[2 * m:]])
        else:
            mats = head
    return mats[0]


def _segment_unitary(seg: Segment, n_steps: int, reverse: bool) -> np.ndarray:
    geom = seg.geom
    ds = 1.0 / n_steps
    half_budget = 0.5 * geom.omega0T
    sin_g = math.sin(geom.gamma)
    nx = sin_g * math.cos(geom.eta)
    ny = sin_g * math.sin(geom.eta)
    nz = math.cos(geom.gamma)

    unitary = np.eye(2, dtype=complex)
    for start in range(0, n_steps, _CHUNK):
        stop = min(start + _CHUNK, n_steps)
        j = np.arange(start, stop, dtype=float)
        mid = (j + 0.5) * ds
        g = coupling_eval(seg.profile, mid) * geom.xi
        vx = g * nx
        vy = g * ny
        vz = 1.0 + g * nz
        norm = np.sqrt(vx * vx + vy * vy + vz * vz)
        safe = np.where(norm > 0.0, norm, 1.0)
        ax, ay, az = vx / safe, vy / safe, vz / safe
        phi = half_budget * ds * norm
        c = np.cos(phi)
        s = np.sin(phi)
        if reverse:
            s = -s
        u = np.empty((stop - start, 2, 2), dtype=complex)
        u[:, 0, 0] = c + 1j * az * s
        u[:, 0, 1] = s * (1j * ax + ay)
        u[:, 1, 0] = s * (1j * ax - ay)
        u[:, 1, 1] = c - 1j * az * s
        if reverse:
            u = u[::-1]
        chunk_prod = _pairwise_product(u)
        unitary = chunk_prod @ unitary
    return unitary


def _allocate_steps(schedule: HamiltonianSchedule, steps: int) -> list[int]:
    return [max(1, round(steps * seg.fraction)) for seg in schedule.segments]


def _run(schedule: HamiltonianSchedule, psi: np.ndarray, steps: int, reverse: bool) -> np.ndarray:
    counts = _allocate_steps(schedule, steps)
    order = range(len(schedule.segments))
    if reverse:
        order = reversed(order)
    unitary = np.eye(2, dtype=complex)
    for k in order:
        seg_u = _segment_unitary(schedule.segments[k], counts[k], reverse)
        unitary = seg_u @ unitary
    return unitary @ psi


def _propagate_adaptive(
    schedule: HamiltonianSchedule, psi: np.ndarray, reverse: bool,
    max_steps: int,
) -> tuple[np.ndarray, int]:
    steps = DEFAULT_STEPS
    previous = _run(schedule, psi, steps, reverse)
    while steps < max_steps:
        steps *= 2
        current = _run(schedule, psi, steps, reverse)
        if np.max(np.abs(current - previous)) < ADAPTIVE_TOLERANCE:
            return current, steps
        previous = current
    raise ConvergenceError(
        f"no convergence to {ADAPTIVE_TOLERANCE} within {max_steps} steps"
    )


def propagate(
    schedule: HamiltonianSchedule,
    psi0: SpinState,
    steps: int | None = None,
    reverse: bool = False,
    max_steps: int = MAX_ADAPTIVE_STEPS,
) -> SpinState:
    """Propagate psi0 through the schedule.

    Parameters
    ----------
    schedule : HamiltonianSchedule
    psi0 : SpinState
        Must be normalized within 1e-10.
    steps : int or None
        Fixed midpoint-step count (allocated across segments by duration).
        None selects adaptive doubling from 2**14 until two successive
        refinements agree within 1e-10, capped at max_steps.
    reverse : bool
        Apply the exact inverse evolution (negated Hamiltonian, reversed
        time order).
    max_steps : int
        Adaptive-doubling cap; exceeded means ConvergenceError.

    Returns
    -------
    SpinState
    """
    if abs(psi0.norm() - 1.0) > 1e-10:
        raise ValueError(f"initial state must be normalized, |psi| = {psi0.norm()!r}")
    psi = psi0.as_array()
    if steps is not None:
        if steps < 1:
            raise ValueError(f"steps must be >= 1, got {steps!r}")
        final = _run(schedule, psi, int(steps), reverse)
    else:
        final, _ = _propagate_adaptive(schedule, psi, reverse, max_steps)
    return SpinState(complex(final[0]), complex(final[1]))


@dataclass(frozen=True)
class CrosscheckReport:
    """Oracle-versus-closed-form deviations for one geometry and profile."""

    profile_kind: ProfileKind
    steps_used: int
    exact_deviation: float | None
    first_order_deviation: float
    first_order_relative: float
    convergence_order: float | None


def crosscheck(geom: MeasurementGeometry, profile: CouplingProfile) -> CrosscheckReport:
    """Propagate |+> through (geom, profile) and compare against closed forms.

    exact_deviation is only defined for the constant profile (max difference
    over both amplitudes); the first-order comparison applies to every kind.
    The convergence order is a Richardson estimate from three coarse runs and
    is None when successive refinements sit at round-off (static Hamiltonian).
    """
    schedule = HamiltonianSchedule.single(geom, profile)
    psi = SpinState.plus().as_array()
    final, steps_used = _propagate_adaptive(schedule, psi, False, MAX_ADAPTIVE_STEPS)
    c_plus, c_minus = complex(final[0]), complex(final[1])

    exact_dev = None
    if profile.kind is ProfileKind.CONSTANT:
        a_minus = amplitude_exact(geom).amplitude_minus
        correct, reversed_ = survival_split(geom)
        a_plus = correct + reversed_
        exact_dev = max(abs(a_minus - c_minus), abs(a_plus - c_plus))

    fo = first_order_amplitude(profile, geom).amplitude
    fo_dev = abs(c_minus - fo)
    if abs(fo) > 0.0:
        fo_rel = fo_dev / abs(fo)
    else:
        fo_rel = 0.0 if fo_dev == 0.0 else math.inf

    order = None
    if profile.kind is not ProfileKind.CONSTANT:
        # static Hamiltonians are integrated exactly, leaving only round-off
        coarse = [_run(schedule, psi, 2 ** k, False) for k in (10, 11, 12)]
        d1 = float(np.max(np.abs(coarse[0] - coarse[1])))
        d2 = float(np.max(np.abs(coarse[1] - coarse[2])))
        if d1 > 1e-13 and d2 > 1e-13:
            order = math.log2(d1 / d2)

    return CrosscheckReport(
        profile_kind=profile.kind,
        steps_used=steps_used,
        exact_deviation=exact_dev,
        first_order_deviation=fo_dev,
        first_order_relative=fo_rel,
        convergence_order=order,
    )
