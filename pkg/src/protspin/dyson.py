"""First-order transition amplitude for an arbitrary coupling profile.

To lowest order in xi the spin-flip amplitude factorizes into the geometry
prefactor and the phased integral of the profile:

    A1 = i e^{-i omega0T/2} (omega0T/2) xi e^{i eta} sin(gamma)
         * int_0^1 e^{i omega0T s} gT(s) ds.

Smooth profiles suppress the integral at large omega0T: the raised-cosine
envelope falls off as pi^2/(omega0T/2)^3 relative to the constant-profile
prefactor, the two-harmonic optimized profile as 4 pi^4/(omega0T/2)^5.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .core import (
    TWO_PI,
    CouplingProfile,
    MeasurementGeometry,
    ProfileKind,
    phased_integral,
)

# Below this the smooth-profile envelopes are not meaningful approximations.
MIN_SMOOTH_OMEGA0T = 2.0 * TWO_PI


@dataclass(frozen=True)
class FirstOrderResult:
    """First-order amplitude together with a rigorous magnitude bound.

    envelope_magnitude majorizes |amplitude| for every omega0T (it replaces
    the oscillatory factor by 1 without any large-omega0T approximation), so
    it traces the decay envelope of the oscillation.
    """

    amplitude: complex
    envelope_magnitude: float
    profile_kind: ProfileKind


def _tabulated_l1_bound(profile: CouplingProfile) -> float:
    # Trapezoid of |gT| over the knots; >= int |gT| by convexity of |.|,
    # hence still a valid envelope factor.
    total = 0.0
    for (s0, v0), (s1, v1) in zip(profile.samples, profile.samples[1:]):
        total += 0.5 * (abs(v0) + abs(v1)) * (s1 - s0)
    return total


def _envelope_bound(profile: CouplingProfile, geom: MeasurementGeometry) -> float:
    x = 0.5 * geom.omega0T
    base = geom.xi * math.sin(geom.gamma)
    pi_sq = math.pi * math.pi
    if profile.kind is ProfileKind.CONSTANT:
        return base * min(x, 1.0)
    if profile.kind is ProfileKind.RAISED_COSINE:
        denom = abs(x * x - pi_sq)
        factor = x if denom == 0.0 else min(x, pi_sq / denom)
        return base * factor
    if profile.kind is ProfileKind.OPTIMIZED:
        denom = abs(x * x - pi_sq) * abs(x * x - 4.0 * pi_sq)
        factor = x if denom == 0.0 else min(x, 4.0 * pi_sq * pi_sq / denom)
        return base * factor
    return base * x * _tabulated_l1_bound(profile)


def first_order_amplitude(profile: CouplingProfile, geom: MeasurementGeometry) -> FirstOrderResult:
    """Spin-flip amplitude to first order in xi for any coupling profile."""
    x = 0.5 * geom.omega0T
    prefactor = (
        1j
        * cmath.exp(-1j * x)
        * x
        * geom.xi
        * cmath.exp(1j * geom.eta)
        * math.sin(geom.gamma)
    )
    amp = prefactor * phased_integral(profile, geom.omega0T)
    return FirstOrderResult(
        amplitude=complex(amp),
        envelope_magnitude=_envelope_bound(profile, geom),
        profile_kind=profile.kind,
    )


def envelope_closed_form(kind: ProfileKind, geom: MeasurementGeometry) -> float:
    """Large-omega0T amplitude envelope of the first-order result.

    Constant:       xi sin(gamma)                      (any omega0T)
    Raised cosine:  (omega0T/2) xi sin(gamma) pi^2 / (omega0T/2)^3
    Optimized:      (omega0T/2) xi sin(gamma) 4 pi^4 / (omega0T/2)^5

    The smooth forms only hold well past the profile harmonics, so they
    refuse omega0T < 4*pi.  Tabulated profiles have no closed form.
    """
    base = geom.xi * math.sin(geom.gamma)
    if kind is ProfileKind.CONSTANT:
        return base
    if kind is ProfileKind.TABULATED:
        raise ValueError("no closed-form envelope for tabulated profiles")
    if geom.omega0T < MIN_SMOOTH_OMEGA0T:
        raise ValueError(
            f"closed-form envelope for {kind.value} requires omega0T >= 4*pi, "
            f"got {geom.omega0T!r}"
        )
    x = 0.5 * geom.omega0T
    if kind is ProfileKind.RAISED_COSINE:
        return base * math.pi ** 2 / x ** 2
    if kind is ProfileKind.OPTIMIZED:
        return base * 4.0 * math.pi ** 4 / x ** 4
    raise ValueError(f"unsupported profile kind {kind!r}")


def reduction_ratio(kind: ProfileKind, omega0T: float) -> float:
    """Transition-probability suppression relative to constant coupling.

    The squared envelope ratio: pi^4/(omega0T/2)^4 for the raised cosine,
    16 pi^8/(omega0T/2)^8 for the optimized profile, 1 for constant.
    """
    if kind is ProfileKind.CONSTANT:
        return 1.0
    reference = MeasurementGeometry(xi=1.0, gamma=0.5 * math.pi, omega0T=omega0T)
    ratio = envelope_closed_form(kind, reference) / envelope_closed_form(
        ProfileKind.CONSTANT, reference
    )
    return ratio * ratio
