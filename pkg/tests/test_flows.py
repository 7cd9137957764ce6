"""Flow integration, slowdown conjugacies, stopping limits, annulus models."""

import math

import numpy as np
import pytest

from rotwidth.flows import (
    AnnulusField,
    ConleySection,
    DivergentSlowdownError,
    Field1D,
    FieldVanishesError,
    FlowError,
    NonContractingMapError,
    SectionRecrossError,
    annulus_model,
    box_profile,
    conjugate_to_constant,
    constant_field,
    equivariant_arc_conjugacy,
    flow,
    flow_richardson_error,
    make_annulus_tau,
    make_annulus_v,
    parse_experiment_config,
    run_experiment,
    scaled_field,
    slowdown_conjugacy_1d,
    stopping_limit_experiment,
    verify_conjugacy,
)


class TestFlow:
    def test_time_zero_is_identity(self):
        assert flow(constant_field(2.0), 0.7, 0.0) == 0.7

    def test_unit_field_translation(self):
        assert abs(flow(constant_field(1.0), 0.0, 2.5) - 2.5) < 1e-10

    def test_group_property(self):
        X = Field1D(lambda y: 1.0 + 0.3 * np.sin(y), name="wobble")
        a = flow(X, 0.2, 0.9, step=1e-3)
        b = flow(X, flow(X, 0.2, 0.4, step=1e-3), 0.5, step=1e-3)
        assert abs(a - b) < 1e-10

    def test_negative_time_inverts(self):
        X = Field1D(lambda y: 1.0 + y * y)
        y1 = flow(X, 0.3, 0.8, step=1e-4)
        back = flow(X, y1, -0.8, step=1e-4)
        assert abs(back - 0.3) < 1e-10

    def test_annulus_rigid_rotation(self):
        fld = AnnulusField(tau=lambda y: 1.0 + 0.0 * y, v=lambda y: 0.0 * y)
        out = flow(fld, np.array([0.25, 0.1]), 1.0)
        assert abs(out[0] - 1.25) < 1e-12 and abs(out[1] - 0.1) < 1e-12

    def test_richardson_error_small(self):
        X = Field1D(lambda y: 1.0 / (1.0 + y * y))
        assert flow_richardson_error(X, 0.0, 1.0, step=1e-2) < 1e-9


class TestConjugateToConstant:
    def test_unit_field_identity(self):
        c = conjugate_to_constant(constant_field(1.0))
        assert abs(c.to_time(1.7) - 1.7) < 1e-12

    def test_speed_two_halves_time(self):
        c = conjugate_to_constant(constant_field(2.0))
        assert abs(c.to_time(3.0) - 1.5) < 1e-12
        assert abs(c.from_time(1.5) - 3.0) < 1e-10
        # time-1 flow advances the time coordinate by exactly 1
        y1 = flow(constant_field(2.0), 0.4, 1.0)
        assert abs(c.to_time(y1) - c.to_time(0.4) - 1.0) < 1e-9

    def test_quadratic_field_is_arctan(self):
        X = Field1D(lambda y: 1.0 + np.asarray(y) ** 2)
        c = conjugate_to_constant(X, domain=(-5, 5))
        assert abs(c.to_time(2.0) - math.atan(2.0)) < 1e-10
        for y in (-1.2, 0.0, 0.9):
            for t in (0.25, 0.5):
                lhs = c.to_time(flow(X, y, t, step=1e-4)) - c.to_time(y)
                assert abs(lhs - t) < 1e-6

    def test_vanishing_field_rejected(self):
        with pytest.raises(FieldVanishesError):
            conjugate_to_constant(Field1D(lambda y: np.asarray(y) * 1.0),
                                  domain=(-1, 1))


class TestSlowdownConjugacy:
    def test_trivial_profile_is_identity(self):
        s = box_profile(0.0, 1.0, depth=1.0, margin=0.25)
        conj = slowdown_conjugacy_1d(s)
        assert conj.t_minus == pytest.approx(0.0, abs=1e-12)
        assert conj.t_plus == pytest.approx(0.0, abs=1e-12)
        for x in (-2.0, 0.3, 4.0):
            assert abs(conj.map(x) - x) < 1e-10

    def test_half_speed_zone_loses_one_unit(self):
        # crossing [0,1] at speed 1/2 costs one extra time unit
        s = box_profile(0.0, 1.0, depth=0.5, margin=0.05)
        conj = slowdown_conjugacy_1d(s)
        assert conj.t_plus - conj.t_minus == pytest.approx(-1.0, abs=0.12)
        # the exact characterization: the shift difference is the delay integral
        from rotwidth.flows import _delay_integral
        delay = _delay_integral(s, s.tau_minus, s.tau_plus)
        assert conj.t_plus - conj.t_minus == pytest.approx(-delay, abs=1e-9)

    def test_tail_constancy(self):
        s = box_profile(0.0, 1.0, depth=0.5, margin=0.25)
        conj = slowdown_conjugacy_1d(s)
        f = conj.map
        for x in np.linspace(conj.lower_tail_start - 4, conj.lower_tail_start - 1, 9):
            assert abs(f(x) - x - conj.t_minus) < 1e-8
        for x in np.linspace(conj.upper_tail_start + 1, conj.upper_tail_start + 4, 9):
            assert abs(f(x) - x - conj.t_plus) < 1e-8

    def test_stopping_profile_diverges(self):
        with pytest.raises(DivergentSlowdownError):
            slowdown_conjugacy_1d(box_profile(0.0, 1.0, depth=0.0, margin=0.25))


class TestVerifyConjugacy:
    def test_identity_on_trivial_slowdown(self):
        s = box_profile(0.0, 1.0, depth=1.0, margin=0.25)
        rep = verify_conjugacy(constant_field(1.0), slowdown=s,
                               conjugacy=lambda x: x, tol=1e-12)
        assert rep.sup_residual < 1e-10

    def test_slow_zone_below_tolerance(self):
        s = box_profile(0.0, 1.0, depth=0.5, margin=0.25)
        rep = verify_conjugacy(constant_field(1.0), slowdown=s, step=1e-3, tol=1e-4)
        assert rep.passed
        assert rep.sup_residual < 1e-4

    def test_wrong_conjugacy_fails_at_shift_scale(self):
        s = box_profile(0.0, 1.0, depth=0.5, margin=0.25)
        conj = slowdown_conjugacy_1d(s)
        shift_scale = abs(conj.t_plus - conj.t_minus)
        rep = verify_conjugacy(constant_field(1.0), slowdown=s,
                               conjugacy=lambda x: x, step=1e-2, tol=1e-4)
        assert not rep.passed
        assert 0.1 * shift_scale < rep.sup_residual <= shift_scale

    def test_explicit_slowdown_conjugacy_verifies(self):
        s = box_profile(-0.5, 0.5, depth=0.3, margin=0.3)
        conj = slowdown_conjugacy_1d(s)
        rep = verify_conjugacy(constant_field(1.0), slowdown=s,
                               conjugacy=conj.map, step=1e-3, tol=1e-4)
        assert rep.passed


class TestStoppingLimit:
    def test_unit_field_distances_decrease(self):
        series = stopping_limit_experiment(constant_field(1.0),
                                           [0.5, 0.25, 0.1, 0.05, 0.02])
        assert series.is_weakly_decreasing()

    def test_slow_field_reaches_threshold(self):
        series = stopping_limit_experiment(constant_field(0.1),
                                           [0.5, 0.25, 0.1, 0.05, 0.02])
        assert series.is_weakly_decreasing()
        assert series.final_distance < 1e-2

    def test_trivial_floors_all_equal(self):
        series = stopping_limit_experiment(constant_field(1.0), [1.0, 1.0, 1.0])
        d = series.distances()
        assert d[0] == pytest.approx(d[1], rel=1e-12) == pytest.approx(d[2], rel=1e-12)
        assert d[0] > 0.1  # the fixed gap to the stopping flow

    def test_annulus_version_decreases(self):
        fld = AnnulusField(tau=make_annulus_tau(1.0), v=make_annulus_v(0.05))
        series = stopping_limit_experiment(fld, [0.5, 0.2, 0.1],
                                           window=(-0.95, -0.75), margin=0.04)
        assert series.is_weakly_decreasing()

    def test_floor_ordering_enforced(self):
        with pytest.raises(FlowError):
            stopping_limit_experiment(constant_field(1.0), [0.1, 0.5])

    def test_csv_shape(self):
        series = stopping_limit_experiment(constant_field(0.1), [0.5, 0.25])
        csv = series.to_csv(include_runtime=False)
        lines = csv.strip().splitlines()
        assert lines[0] == "floor,sup_distance,runtime_s"
        assert len(lines) == 3 and lines[1].startswith("0.5,")


class TestAnnulusModel:
    def test_model_class_checklist(self):
        rep = annulus_model(make_annulus_tau(1.0), make_annulus_v(0.05),
                            expected_period=1.0)
        assert rep.passed
        assert abs(rep.measured_period - 1.0) < 1e-3
        assert rep.y0 == pytest.approx(0.0, abs=1e-9)

    def test_degenerate_fibered_rotation_flagged(self):
        rep = annulus_model(make_annulus_tau(1.0), lambda y: 0.0 * np.asarray(y))
        assert rep.degenerate_fibered_rotation
        assert not rep.items[1].passed  # no isolated periodic orbit
        assert rep.items[0].passed  # boundary still fixed

    def test_small_perturbation_stays_close_to_rotation(self):
        tau = make_annulus_tau(1.0)
        tiny = make_annulus_v(0.05 * 1e-3)
        rep = annulus_model(tau, tiny, expected_period=1.0,
                            omega_tol=1.0, omega_horizon=10.0)
        assert rep.items[0].passed and rep.items[1].passed and rep.items[2].passed
        grid = np.column_stack([np.linspace(0, 1, 9), np.linspace(-0.9, 0.9, 9)])
        rot = AnnulusField(tau=tau, v=lambda y: 0.0 * np.asarray(y))
        pert = AnnulusField(tau=tau, v=tiny)
        d = np.abs(np.asarray(flow(pert, grid, 1.0)) - np.asarray(flow(rot, grid, 1.0)))
        assert float(d.max()) < 1e-2

    def test_wrong_sign_pattern_rejected(self):
        tau = make_annulus_tau(1.0)
        bad_v = lambda y: 0.05 * (np.asarray(y) - 0.0) * (1 - np.abs(np.asarray(y)))
        with pytest.raises(FlowError):
            annulus_model(tau, bad_v)

    def test_period_two(self):
        rep = annulus_model(make_annulus_tau(2.0), make_annulus_v(0.05),
                            expected_period=2.0)
        assert rep.passed
        assert abs(rep.measured_period - 2.0) < 1e-3


class TestConleySection:
    def test_valid_section(self):
        fld = AnnulusField(tau=make_annulus_tau(1.0), v=make_annulus_v(0.05))
        report = ConleySection(level=0.5).validate(fld, horizon=30.0)
        assert report.max_crossings == 0
        assert report.future_side == "below"  # v < 0 above the orbit

    def test_recrossing_aborts(self):
        # transverse at the sampled points, but the vertical speed dips
        # negative between them, so orbits wobble back through the section
        def velocity(state):
            st = np.asarray(state, dtype=float)
            x = st[..., 0]
            vy = 0.05 + 0.95 * np.cos(24 * np.pi * x)
            return np.stack([np.ones_like(x), vy], axis=-1)

        with pytest.raises(SectionRecrossError):
            ConleySection(level=0.0).validate(velocity, horizon=3.0,
                                              samples=12, step=1e-3)

    def test_non_transverse_rejected(self):
        fld = AnnulusField(tau=make_annulus_tau(1.0), v=make_annulus_v(0.05))
        with pytest.raises(FlowError):
            ConleySection(level=0.0).validate(fld)  # v vanishes on the orbit


class TestEquivariantArcConjugacy:
    def test_identity_pair(self):
        ac = equivariant_arc_conjugacy(lambda x: x / 2, lambda x: x / 2)
        assert ac.residual < 1e-12
        assert ac.map(0.3) == pytest.approx(0.3, abs=1e-12)

    def test_distinct_contractions(self):
        ac = equivariant_arc_conjugacy(lambda x: x / 2, lambda x: x / 3)
        assert ac.residual < 1e-6
        assert ac.map(0.0) == 0.0
        assert ac.map(1.0) == pytest.approx(1.0)
        assert ac.map(0.5) == pytest.approx(1 / 3, abs=1e-12)
        assert ac.map(-0.5) == pytest.approx(-1 / 3, abs=1e-12)

    def test_nonlinear_contractions(self):
        phi1 = lambda x: 0.5 * x + 0.1 * x * abs(x)
        phi2 = lambda x: 0.4 * x
        ac = equivariant_arc_conjugacy(phi1, phi2)
        assert ac.residual < 1e-6

    def test_repelling_rejected(self):
        with pytest.raises(NonContractingMapError):
            equivariant_arc_conjugacy(lambda x: x / 2, lambda x: 2 * x)

    def test_moved_fixed_point_rejected(self):
        with pytest.raises(NonContractingMapError):
            equivariant_arc_conjugacy(lambda x: x / 2 + 0.1, lambda x: x / 2)


class TestExperimentConfig:
    def test_parse_and_run(self):
        cfg = parse_experiment_config(
            "# demo\nfield = const:0.1\nfloors = 0.5,0.25\n"
            "window = 0,1\nmargin = 0.5\nstep = 0.002\ngrid = -2:3:41\n"
        )
        assert cfg.field.name == "const:0.1"
        series = run_experiment(cfg)
        assert len(series.rows) == 2

    def test_unknown_key_rejected(self):
        with pytest.raises(FlowError):
            parse_experiment_config("floors = 0.5\nbogus = 1\n")

    def test_missing_floors_rejected(self):
        with pytest.raises(FlowError):
            parse_experiment_config("field = const:1\n")

    def test_scaled_field_annulus(self):
        fld = AnnulusField(tau=make_annulus_tau(1.0), v=make_annulus_v(0.05))
        s = box_profile(-0.9, -0.7, depth=0.5, margin=0.05)
        slowed = scaled_field(fld, s.fn)
        y = -0.8
        assert float(slowed.tau(y)) == pytest.approx(0.5 * float(fld.tau(y)))
