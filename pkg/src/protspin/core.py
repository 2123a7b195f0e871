"""Dimensionless geometry and coupling profiles for protective spin measurement.

A spin-1/2 particle sits in a strong uniform protection field along z while a
weak inhomogeneous measurement field along the direction

    n = (sin(gamma)cos(eta), sin(gamma)sin(eta), cos(gamma))

is switched on for a time T with a normalized coupling profile g(t),
int_0^T g(t) dt = 1.  Everything downstream depends only on the dimensionless
set (xi, gamma, eta, omega0T):

    xi       measurement-field strength relative to the protection field
    gamma    polar angle of the measurement-field direction
    eta      azimuthal angle of the measurement-field direction
    omega0T  spin transition frequency times measurement duration

In these units the spin Hamiltonian reads

    H(t) * T / hbar = -(omega0T / 2) * [sigma_z + xi * gT(t/T) * (n . sigma)]

where gT(s) = g(t) * T is the dimensionless coupling value at s = t/T.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import quad

TWO_PI = 2.0 * math.pi

# Knot-spacing cap for the oscillation-aware quadrature used by tabulated
# profiles: panels must resolve both the profile and the e^{i w s} phase.
_MAX_PANEL_FRACTION = 1.0 / 64.0
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)

# Tabulated profiles must integrate to 1; larger residuals are construction
# errors rather than round-off.
TABULATED_NORMALIZATION_TOLERANCE = 1e-6


def sinc(x: float) -> float:
    """sin(x)/x with the removable singularity at x = 0 filled in."""
    if x == 0.0:
        return 1.0
    return math.sin(x) / x


class ProfileKind(enum.Enum):
    CONSTANT = "constant"
    RAISED_COSINE = "raised-cosine"
    OPTIMIZED = "optimized"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class MeasurementGeometry:
    """Dimensionless parameters of a single protective measurement.

    Parameters
    ----------
    xi : float
        Relative measurement-field strength, >= 0.
    gamma : float
        Polar angle of the measurement direction, in [0, pi] (radians).
    eta : float
        Azimuthal angle (radians); stored normalized into [0, 2*pi).
    omega0T : float
        Product of the transition frequency omega0 = 2*mu*B0/hbar and the
        measurement duration T, >= 0.
    """

    xi: float
    gamma: float
    eta: float = 0.0
    omega0T: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.xi) and self.xi >= 0.0):
            raise ValueError(f"xi must be finite and >= 0, got {self.xi!r}")
        if not (math.isfinite(self.gamma) and 0.0 <= self.gamma <= math.pi):
            raise ValueError(f"gamma must lie in [0, pi], got {self.gamma!r}")
        if not math.isfinite(self.eta):
            raise ValueError(f"eta must be finite, got {self.eta!r}")
        if not (math.isfinite(self.omega0T) and self.omega0T >= 0.0):
            raise ValueError(f"omega0T must be finite and >= 0, got {self.omega0T!r}")
        object.__setattr__(self, "eta", self.eta % TWO_PI)


def direction_angles(n) -> tuple[float, float]:
    """Polar and azimuthal angles (gamma, eta) of a unit vector n.

    Raises ValueError unless |n| = 1 within 1e-12.  At the poles the azimuth
    is conventionally 0.
    """
    v = np.asarray(n, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"direction must be a 3-vector, got shape {v.shape}")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"direction must be a unit vector, |n| = {norm!r}")
    gamma = math.atan2(math.hypot(v[0], v[1]), v[2])
    eta = math.atan2(v[1], v[0]) % TWO_PI
    return gamma, eta


def direction_vector(gamma: float, eta: float) -> np.ndarray:
    """Unit vector with polar angle gamma and azimuth eta."""
    sg = math.sin(gamma)
    return np.array([sg * math.cos(eta), sg * math.sin(eta), math.cos(gamma)])


@dataclass(frozen=True)
class FieldSpec:
    """One measurement field of a multi-field protocol.

    The dimensionless strength xi is defined with respect to that field's own
    measurement window, so three successive fields of equal duration T carry
    the same xi they would in isolation.
    """

    xi: float
    gamma: float
    eta: float = 0.0
    direction_index: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.xi) and self.xi >= 0.0):
            raise ValueError(f"xi must be finite and >= 0, got {self.xi!r}")
        if not (math.isfinite(self.gamma) and 0.0 <= self.gamma <= math.pi):
            raise ValueError(f"gamma must lie in [0, pi], got {self.gamma!r}")
        if not math.isfinite(self.eta):
            raise ValueError(f"eta must be finite, got {self.eta!r}")
        if self.direction_index not in (1, 2, 3):
            raise ValueError(f"direction_index must be 1, 2 or 3, got {self.direction_index!r}")
        object.__setattr__(self, "eta", self.eta % TWO_PI)

    def direction(self) -> np.ndarray:
        return direction_vector(self.gamma, self.eta)


@dataclass(frozen=True)
class CouplingProfile:
    """Normalized switching profile g(t)*T on the unit interval s = t/T.

    Built-in kinds evaluate analytically; TABULATED interpolates linearly
    between (s, gT) knots that must start at s = 0, end at s = 1, and
    integrate to 1 within TABULATED_NORMALIZATION_TOLERANCE.
    """

    kind: ProfileKind
    samples: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.kind is ProfileKind.TABULATED:
            if self.samples is None or len(self.samples) < 2:
                raise ValueError("tabulated profile needs at least two (s, gT) samples")
            samples = tuple((float(s), float(v)) for s, v in self.samples)
            object.__setattr__(self, "samples", samples)
            s_vals = [s for s, _ in samples]
            if any(b <= a for a, b in zip(s_vals, s_vals[1:])):
                raise ValueError("tabulated sample positions must be strictly ascending")
            if abs(s_vals[0]) > 1e-12 or abs(s_vals[-1] - 1.0) > 1e-12:
                raise ValueError("tabulated samples must span s = 0 to s = 1")
            if not all(math.isfinite(s) and math.isfinite(v) for s, v in samples):
                raise ValueError("tabulated samples must be finite")
            # Trapezoid over the knots integrates the interpolant exactly.
            area = 0.0
            for (s0, v0), (s1, v1) in zip(samples, samples[1:]):
                area += 0.5 * (v0 + v1) * (s1 - s0)
            if abs(area - 1.0) > TABULATED_NORMALIZATION_TOLERANCE:
                raise ValueError(
                    f"tabulated profile integrates to {area!r}, "
                    f"residual exceeds {TABULATED_NORMALIZATION_TOLERANCE}"
                )
        elif self.samples is not None:
            raise ValueError(f"samples are only meaningful for tabulated profiles, kind is {self.kind}")

    @classmethod
    def constant(cls) -> "CouplingProfile":
        return cls(ProfileKind.CONSTANT)

    @classmethod
    def raised_cosine(cls) -> "CouplingProfile":
        return cls(ProfileKind.RAISED_COSINE)

    @classmethod
    def optimized(cls) -> "CouplingProfile":
        return cls(ProfileKind.OPTIMIZED)

    @classmethod
    def tabulated(cls, samples) -> "CouplingProfile":
        return cls(ProfileKind.TABULATED, tuple((float(s), float(v)) for s, v in samples))

    @classmethod
    def from_file(cls, path) -> "CouplingProfile":
        """Load a tabulated profile from two whitespace-separated columns (s, gT)."""
        rows = []
        for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected two columns, got {len(parts)}")
            rows.append((float(parts[0]), float(parts[1])))
        return cls.tabulated(rows)


def _knot_arrays(profile: CouplingProfile) -> tuple[np.ndarray, np.ndarray]:
    s = np.array([p[0] for p in profile.samples])
    v = np.array([p[1] for p in profile.samples])
    return s, v


def coupling_eval(profile: CouplingProfile, t_over_T):
    """Dimensionless coupling value gT at s = t/T; zero outside [0, 1].

    Accepts a scalar or an ndarray and matches the input shape.
    """
    s = np.asarray(t_over_T, dtype=float)
    scalar = s.ndim == 0
    s = np.atleast_1d(s)
    out = np.zeros_like(s)
    inside = (s >= 0.0) & (s <= 1.0)
    si = s[inside]
    if profile.kind is ProfileKind.CONSTANT:
        out[inside] = 1.0
    elif profile.kind is ProfileKind.RAISED_COSINE:
        out[inside] = 1.0 + np.cos(TWO_PI * (si - 0.5))
    elif profile.kind is ProfileKind.OPTIMIZED:
        u = TWO_PI * (si - 0.5)
        out[inside] = 1.0 + (4.0 / 3.0) * np.cos(u) + (1.0 / 3.0) * np.cos(2.0 * u)
    else:
        knots_s, knots_v = _knot_arrays(profile)
        out[inside] = np.interp(si, knots_s, knots_v)
    if scalar:
        return float(out[0])
    return out


def normalization_residual(profile: CouplingProfile) -> float:
    """|int_0^1 gT(s) ds - 1|, evaluated by adaptive quadrature."""
    if profile.kind is ProfileKind.TABULATED:
        interior = [s for s, _ in profile.samples[1:-1]]
        total, _ = quad(
            lambda s: coupling_eval(profile, s), 0.0, 1.0,
            points=interior or None, limit=max(50, 10 * len(profile.samples)),
        )
    else:
        total, _ = quad(lambda s: coupling_eval(profile, s), 0.0, 1.0, limit=200)
    return abs(total - 1.0)


def _spectral_raised_cosine(x: float) -> float:
    # sinc(x) / (1 - (x/pi)^2) has a removable singularity at x = pi; the
    # three-term sinc sum is the same function written without the pole.
    denom = 1.0 - (x / math.pi) ** 2
    if abs(denom) < 1e-6:
        return sinc(x) + 0.5 * (sinc(x + math.pi) + sinc(x - math.pi))
    return sinc(x) / denom


def _spectral_optimized(x: float) -> float:
    d1 = 1.0 - (x / math.pi) ** 2
    d2 = 1.0 - (x / TWO_PI) ** 2
    if min(abs(d1), abs(d2)) < 1e-6:
        return (
            sinc(x)
            + (2.0 / 3.0) * (sinc(x + math.pi) + sinc(x - math.pi))
            + (1.0 / 6.0) * (sinc(x + TWO_PI) + sinc(x - TWO_PI))
        )
    return sinc(x) / (d1 * d2)


def _tabulated_phased_integral(profile: CouplingProfile, omega: float) -> complex:
    knots_s, knots_v = _knot_arrays(profile)
    h_max = _MAX_PANEL_FRACTION
    if omega > 0.0:
        h_max = min(h_max, math.pi / (4.0 * omega))
    centers = []
    half_widths = []
    for s0, s1 in zip(knots_s, knots_s[1:]):
        width = s1 - s0
        n_panels = max(1, math.ceil(width / h_max))
        edges = np.linspace(s0, s1, n_panels + 1)
        centers.append(0.5 * (edges[:-1] + edges[1:]))
        half_widths.append(np.full(n_panels, 0.5 * width / n_panels))
    c = np.concatenate(centers)
    h = np.concatenate(half_widths)
    nodes = c[:, None] + h[:, None] * _GL_NODES[None, :]
    values = np.interp(nodes, knots_s, knots_v)
    phases = np.exp(1j * omega * nodes)
    return complex(np.sum(h[:, None] * _GL_WEIGHTS[None, :] * values * phases))


def phased_integral(profile: CouplingProfile, omega0T: float) -> complex:
    """int_0^1 exp(i*omega0T*s) * gT(s) ds.

    The built-in kinds use closed forms; near their removable singularities
    the raised-cosine and optimized spectral factors switch to an equivalent
    sinc-sum representation.  Tabulated profiles use panel-limited
    Gauss-Legendre quadrature with panel width <= min(1/64, pi/(4*omega0T)).
    """
    if not (math.isfinite(omega0T) and omega0T >= 0.0):
        raise ValueError(f"omega0T must be finite and >= 0, got {omega0T!r}")
    if profile.kind is ProfileKind.TABULATED:
        return _tabulated_phased_integral(profile, float(omega0T))
    x = 0.5 * float(omega0T)
    if profile.kind is ProfileKind.CONSTANT:
        spectral = sinc(x)
    elif profile.kind is ProfileKind.RAISED_COSINE:
        spectral = _spectral_raised_cosine(x)
    else:
        spectral = _spectral_optimized(x)
    return complex(math.cos(x), math.sin(x)) * spectral
