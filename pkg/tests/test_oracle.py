"""Brute-force propagator: spec of record for every closed form."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from protspin import (
    ConvergenceError,
    CouplingProfile,
    HamiltonianSchedule,
    MeasurementGeometry,
    Segment,
    SpinState,
    amplitude_exact,
    crosscheck,
    propagate,
    survival_split,
)
from helpers import random_geometries

geometries = st.builds(
    MeasurementGeometry,
    xi=st.floats(min_value=0.0, max_value=2.0),
    gamma=st.floats(min_value=0.0, max_value=math.pi - 1e-9),
    eta=st.floats(min_value=0.0, max_value=2.0 * math.pi - 1e-9),
    omega0T=st.floats(min_value=0.0, max_value=100.0),
)


class TestSpinState:
    def test_basis_states(self):
        assert SpinState.plus().c_plus == 1.0
        assert SpinState.minus().c_minus == 1.0
        assert abs(SpinState.plus().norm() - 1.0) < 1e-15

    def test_propagate_rejects_unnormalized_state(self):
        sched = HamiltonianSchedule.single(
            MeasurementGeometry(xi=0.1, gamma=1.0, omega0T=1.0), CouplingProfile.constant()
        )
        with pytest.raises(ValueError):
            propagate(sched, SpinState(c_plus=0.8, c_minus=0.0))


class TestScheduleValidation:
    def test_fractions_must_sum_to_one(self):
        geom = MeasurementGeometry(xi=0.1, gamma=1.0, omega0T=5.0)
        prof = CouplingProfile.constant()
        with pytest.raises(ValueError):
            HamiltonianSchedule(
                segments=(
                    Segment(fraction=0.5, geom=geom, profile=prof),
                    Segment(fraction=0.2, geom=geom, profile=prof),
                )
            )

    def test_segment_budget_must_match_fraction(self):
        # equal per-segment budgets are inconsistent with a 25/75 time split
        part = MeasurementGeometry(xi=0.1, gamma=1.0, omega0T=6.0)
        with pytest.raises(ValueError):
            HamiltonianSchedule(
                segments=(
                    Segment(fraction=0.25, geom=part, profile=CouplingProfile.constant()),
                    Segment(fraction=0.75, geom=part, profile=CouplingProfile.constant()),
                )
            )

    def test_fraction_positive(self):
        geom = MeasurementGeometry(xi=0.1, gamma=1.0, omega0T=5.0)
        with pytest.raises(ValueError):
            Segment(fraction=0.0, geom=geom, profile=CouplingProfile.constant())

    def test_successive_builder_splits_evenly(self):
        geoms = [MeasurementGeometry(xi=0.1, gamma=1.0, eta=0.0, omega0T=7.0)] * 3
        sched = HamiltonianSchedule.successive(geoms)
        assert len(sched.segments) == 3
        assert abs(sched.omega0T_total - 21.0) < 1e-12


class TestPropagate:
    def test_free_precession(self):
        geom = MeasurementGeometry(xi=0.0, gamma=1.0, omega0T=17.0)
        st_out = propagate(HamiltonianSchedule.single(geom, CouplingProfile.constant()), SpinState.plus())
        assert abs(st_out.c_plus - cmath.exp(0.5j * 17.0)) < 1e-11
        assert st_out.c_minus == 0.0

    def test_static_case_is_exact_with_one_step(self):
        geom = MeasurementGeometry(xi=0.35, gamma=1.2, eta=0.8, omega0T=9.0)
        st_out = propagate(
            HamiltonianSchedule.single(geom, CouplingProfile.constant()), SpinState.plus(), steps=1
        )
        correct, reversed_ = survival_split(geom)
        assert abs(st_out.c_plus - (correct + reversed_)) < 1e-12
        assert abs(st_out.c_minus - amplitude_exact(geom).amplitude_minus) < 1e-12

    def test_matches_closed_form_at_large_budget(self):
        geom = MeasurementGeometry(xi=0.1, gamma=math.pi / 2, omega0T=100.0)
        st_out = propagate(
            HamiltonianSchedule.single(geom, CouplingProfile.constant()), SpinState.plus(), steps=2**16
        )
        assert abs(st_out.c_minus - amplitude_exact(geom).amplitude_minus) < 1e-10

    def test_steps_must_be_positive(self):
        geom = MeasurementGeometry(xi=0.1, gamma=1.0, omega0T=1.0)
        with pytest.raises(ValueError):
            propagate(HamiltonianSchedule.single(geom, CouplingProfile.constant()), SpinState.plus(), steps=0)

    def test_raises_when_budget_needs_more_steps_than_allowed(self):
        geom = MeasurementGeometry(xi=0.5, gamma=1.0, eta=0.3, omega0T=200.0)
        sched = HamiltonianSchedule.single(geom, CouplingProfile.raised_cosine())
        with pytest.raises(ConvergenceError):
            propagate(sched, SpinState.plus(), max_steps=2**15)

    @given(geometries)
    @settings(max_examples=25, deadline=None)
    def test_unitarity(self, geom):
        sched = HamiltonianSchedule.single(geom, CouplingProfile.raised_cosine())
        st_out = propagate(sched, SpinState.plus(), steps=2**12)
        assert abs(st_out.norm() - 1.0) < 1e-12

    def test_time_reversal_returns_initial_state(self):
        geom = MeasurementGeometry(xi=0.5, gamma=1.0, eta=0.3, omega0T=50.0)
        sched = HamiltonianSchedule.single(geom, CouplingProfile.optimized())
        fwd = propagate(sched, SpinState.plus(), steps=2**12)
        back = propagate(sched, fwd, steps=2**12, reverse=True)
        assert abs(back.c_plus - 1.0) < 1e-10
        assert abs(back.c_minus) < 1e-10

    def test_second_order_convergence(self):
        geom = MeasurementGeometry(xi=0.5, gamma=1.0, eta=0.3, omega0T=200.0)
        sched = HamiltonianSchedule.single(geom, CouplingProfile.raised_cosine())
        ref = propagate(sched, SpinState.plus(), steps=2**18).as_array()
        errs = [
            float(np.max(np.abs(propagate(sched, SpinState.plus(), steps=n).as_array() - ref)))
            for n in (2**10, 2**11, 2**12)
        ]
        orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
        for order in orders:
            assert abs(order - 2.0) < 0.1

    def test_adaptive_agrees_with_deep_fixed_grid(self):
        geom = MeasurementGeometry(xi=0.4, gamma=0.9, eta=1.1, omega0T=30.0)
        sched = HamiltonianSchedule.single(geom, CouplingProfile.optimized())
        auto = propagate(sched, SpinState.plus())
        deep = propagate(sched, SpinState.plus(), steps=2**19)
        assert abs(auto.c_plus - deep.c_plus) < 1e-10
        assert abs(auto.c_minus - deep.c_minus) < 1e-10

    def test_exact_equivalence_over_random_geometries(self):
        rng = np.random.default_rng(7)
        for geom in random_geometries(rng, 50, omega_max=100.0):
            st_out = propagate(HamiltonianSchedule.single(geom, CouplingProfile.constant()), SpinState.plus())
            assert abs(st_out.c_minus - amplitude_exact(geom).amplitude_minus) < 1e-10


class TestCrosscheck:
    def test_constant_profile_matches_closed_form(self):
        rep = crosscheck(
            MeasurementGeometry(xi=0.3, gamma=1.1, eta=0.2, omega0T=40.0), CouplingProfile.constant()
        )
        assert rep.exact_deviation is not None
        assert rep.exact_deviation < 1e-10
        assert rep.convergence_order is None

    def test_perturbative_regime(self):
        rep = crosscheck(
            MeasurementGeometry(xi=1e-3, gamma=math.pi / 2, omega0T=20.0),
            CouplingProfile.raised_cosine(),
        )
        assert rep.exact_deviation is None
        assert rep.first_order_relative < 1e-5
        assert rep.convergence_order is not None
        assert abs(rep.convergence_order - 2.0) < 0.1

    def test_zero_coupling_gives_zero_deviations(self):
        rep = crosscheck(
            MeasurementGeometry(xi=0.0, gamma=1.0, omega0T=15.0), CouplingProfile.optimized()
        )
        assert rep.first_order_deviation == 0.0
        assert rep.first_order_relative == 0.0
