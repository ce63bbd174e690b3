"""Integration and port-completion tests for the transient solver."""

import math

import numpy as np
import pytest

from memsim.drive import pulse_train, sine, triangle
from memsim.errors import ConfigError, MemsimError, SolverDiverged
from memsim.models import (DeviceState, PickettModel, PickettParams,
                           StrukovModel, StrukovParams, YangModel, YangParams,
                           pickett_current)
from memsim.rootfind import bisect
from memsim.solver import (SolverConfig, integrate, port_solve,
                           solve_gap_voltage)

STRUKOV = StrukovModel(StrukovParams(mu_v=1e-14, r_on=100.0, r_off=16000.0, d=10e-9))
YANG = YangModel(YangParams(alpha=0.8, m=11, beta=5e-4, delta=2.0,
                            chi=1e-6, gamma=4.0, n=14))
PICKETT = PickettModel(PickettParams(f_off=3500.0, f_on=40000.0, i_off=115e-6,
                                     i_on=8.9e-6, a_off=1.2, a_on=1.8,
                                     b=500e-6, w_c=0.107, r_s=215.0))

CFG = SolverConfig()


def strukov_exact_w(t, w0, i0, f):
    """Closed-form state under a zero-phase sinusoidal current drive."""
    p = STRUKOV.params
    k = p.mu_v * p.r_on / p.d
    om = 2.0 * math.pi * f
    return w0 + k * (i0 / om) * (1.0 - np.cos(om * np.asarray(t)))


class TestSolverConfig:
    def test_defaults_valid(self):
        SolverConfig()

    @pytest.mark.parametrize("kwargs", [
        {"t_end": 0.0},
        {"dt": 0.0},
        {"method": "euler"},
        {"dt_min": 0.0},
        {"rel_tol": 0.0},
        {"newton_max_iter": 0},
    ])
    def test_invalid_configs(self, kwargs):
        with pytest.raises(ConfigError):
            SolverConfig(**kwargs)


class TestFixedStep:
    def test_matches_closed_form_trajectory(self):
        f, i0, w0 = 3.0, 5e-4, 2e-9
        cfg = SolverConfig(dt=1e-5, t_end=1.0 / f)
        trace = integrate(STRUKOV, sine("current", i0, f),
                          DeviceState(w0, 0.0, 10e-9), cfg)
        err = np.max(np.abs(trace.w - strukov_exact_w(trace.t, w0, i0, f)))
        assert err < 1e-8 * w0

    def test_sample_grid_is_exact_multiples_of_dt(self):
        cfg = SolverConfig(dt=1e-4, t_end=0.01)
        trace = integrate(STRUKOV, sine("current", 1e-4, 3.0),
                          DeviceState(2e-9, 0.0, 10e-9), cfg)
        assert len(trace) == 101
        assert trace.t[-1] == pytest.approx(0.01, rel=1e-12)
        assert np.all(trace.t == np.arange(101) * 1e-4)

    def test_partial_final_step(self):
        cfg = SolverConfig(dt=1e-4, t_end=0.00025)
        trace = integrate(STRUKOV, sine("current", 1e-4, 3.0),
                          DeviceState(2e-9, 0.0, 10e-9), cfg)
        assert trace.t[-1] == pytest.approx(0.00025, rel=1e-12)

    def test_state_stays_clamped_under_saturating_drive(self):
        cfg = SolverConfig(dt=1e-5, t_end=2.0 / 3.0)
        trace = integrate(STRUKOV, sine("current", 2e-3, 3.0),
                          DeviceState(0.0, 0.0, 10e-9), cfg)
        assert trace.w.min() >= 0.0
        assert trace.w.max() <= 10e-9

    def test_charge_consistency(self):
        # For linear drift, w(t) - w(0) is proportional to integrated charge.
        f, i0, w0 = 3.0, 5e-4, 2e-9
        cfg = SolverConfig(dt=1e-5, t_end=2.0 / f)
        trace = integrate(STRUKOV, sine("current", i0, f),
                          DeviceState(w0, 0.0, 10e-9), cfg)
        p = STRUKOV.params
        charge = np.concatenate(
            [[0.0], np.cumsum(0.5 * (trace.i[1:] + trace.i[:-1]) * np.diff(trace.t))])
        predicted = w0 + p.mu_v * p.r_on / p.d * charge
        span = trace.w.max() - trace.w.min()
        assert np.max(np.abs(predicted - trace.w)) < 1e-8 * span

    def test_zero_drive_is_trivial(self):
        d = pulse_train("current", high=0.0, low=0.0, t_high=0.1, t_low=0.1)
        trace = integrate(STRUKOV, d, DeviceState(2e-9, 0.0, 10e-9),
                          SolverConfig(dt=1e-3, t_end=0.05))
        assert np.all(trace.w == 2e-9)
        assert np.all(trace.i == 0.0)
        assert np.all(trace.v == 0.0)

    def test_triangle_drive_supported(self):
        cfg = SolverConfig(dt=1e-5, t_end=1.0 / 3.0)
        trace = integrate(YANG, triangle("voltage", 1.1, 3.0),
                          DeviceState(0.9, 0.0, 1.0), cfg)
        assert np.max(np.abs(trace.v)) == pytest.approx(1.1, rel=1e-3)

    def test_initial_state_outside_bounds(self):
        with pytest.raises(ConfigError):
            integrate(STRUKOV, sine("current", 1e-4, 3.0),
                      DeviceState(2e-8, 0.0, 10e-9), CFG)

    def test_runtime_errors_carry_timestamps(self):
        # A 5 V bias is far outside the tunnel formula's validity window,
        # so the run must fail with the failing time in the message.
        cfg = SolverConfig(dt=1e-4, t_end=0.5)
        with pytest.raises(MemsimError, match=r"t="):
            integrate(PICKETT, sine("voltage", 5.0, 1.0),
                      DeviceState(1.5, 1.21, 1.8), cfg)


class TestAdaptiveStep:
    def test_matches_closed_form_trajectory(self):
        f, i0, w0 = 3.0, 5e-4, 2e-9
        cfg = SolverConfig(method="rk45_adaptive", dt=1e-5, t_end=1.0 / f,
                           rel_tol=1e-10, abs_tol=1e-22)
        trace = integrate(STRUKOV, sine("current", i0, f),
                          DeviceState(w0, 0.0, 10e-9), cfg)
        err = np.max(np.abs(trace.w - strukov_exact_w(trace.t, w0, i0, f)))
        assert err < 1e-6 * w0

    def test_agrees_with_fixed_step(self):
        cfg_f = SolverConfig(dt=5e-6, t_end=0.2)
        cfg_a = SolverConfig(method="rk45_adaptive", dt=1e-5, t_end=0.2,
                             rel_tol=1e-10, abs_tol=1e-18)
        drive = sine("voltage", 1.1, 3.0)
        w0 = DeviceState(0.9, 0.0, 1.0)
        fixed = integrate(YANG, drive, w0, cfg_f)
        adaptive = integrate(YANG, drive, w0, cfg_a)
        assert adaptive.w[-1] == pytest.approx(fixed.w[-1], abs=1e-8)

    def test_reaches_exactly_t_end(self):
        cfg = SolverConfig(method="rk45_adaptive", dt=1e-4, t_end=0.05)
        trace = integrate(STRUKOV, sine("current", 1e-4, 3.0),
                          DeviceState(2e-9, 0.0, 10e-9), cfg)
        assert trace.t[-1] == pytest.approx(0.05, rel=1e-12)

    def test_step_underflow_is_divergence(self):
        cfg = SolverConfig(method="rk45_adaptive", dt=1e-3, t_end=0.1,
                           dt_min=1e-3, dt_max=1e-3,
                           rel_tol=1e-16, abs_tol=1e-30)
        with pytest.raises(SolverDiverged):
            integrate(STRUKOV, sine("current", 5e-4, 3.0),
                      DeviceState(2e-9, 0.0, 10e-9), cfg)


class TestPortSolve:
    def test_zero_drive_short_circuits(self):
        for model, w0 in ((STRUKOV, DeviceState(2e-9, 0.0, 10e-9)),
                          (YANG, DeviceState(0.5, 0.0, 1.0)),
                          (PICKETT, DeviceState(1.5, 1.21, 1.8))):
            assert port_solve(model, w0, 0.0, "current", CFG) == (0.0, 0.0)
            assert port_solve(model, w0, 0.0, "voltage", CFG) == (0.0, 0.0)

    def test_strukov_is_ohmic(self):
        s = DeviceState(5e-9, 0.0, 10e-9)
        v, i = port_solve(STRUKOV, s, 1e-3, "current", CFG)
        assert i == 1e-3
        assert v == pytest.approx(8.05, rel=1e-12)
        v2, i2 = port_solve(STRUKOV, s, 8.05, "voltage", CFG)
        assert i2 == pytest.approx(1e-3, rel=1e-12)

    def test_yang_round_trip(self):
        rng = np.random.default_rng(23)
        s = DeviceState(0.8, 0.0, 1.0)
        for _ in range(50):
            v_in = rng.uniform(-1.5, 1.5)
            if v_in == 0.0:
                continue
            _, i = port_solve(YANG, s, v_in, "voltage", CFG)
            v_back, i_back = port_solve(YANG, s, i, "current", CFG)
            assert i_back == i
            # |i - target| <= 1e-12 A maps to a voltage gap of roughly
            # 1e-12 / (di/dv); the slope bottoms out near 2e-4 S here.
            assert v_back == pytest.approx(v_in, abs=1e-7)

    def test_pickett_round_trip(self):
        rng = np.random.default_rng(29)
        for _ in range(50):
            w = rng.uniform(1.25, 1.75)
            v_in = rng.uniform(-0.4, 0.4)
            if v_in == 0.0:
                continue
            s = DeviceState(w, 1.21, 1.8)
            _, i = port_solve(PICKETT, s, v_in, "voltage", CFG)
            v_back, i_back = port_solve(PICKETT, s, i, "current", CFG)
            assert i_back == i
            # The current solve stops at |i - target| <= 1e-12 A; at the
            # weakest bias/gap corner the barrier conductance is ~1.8e-6 S,
            # which bounds the voltage discrepancy near 6e-7 V.
            assert v_back == pytest.approx(v_in, abs=2e-6)

    def test_pickett_port_includes_series_drop(self):
        s = DeviceState(1.4, 1.21, 1.8)
        i_target = 5e-5
        v_m, i = port_solve(PICKETT, s, i_target, "current", CFG)
        # Reconstruct the barrier voltage and verify the series relation.
        v_g = v_m - i * PICKETT.params.r_s
        assert pickett_current(s, v_g, PICKETT.params) == pytest.approx(
            i_target, rel=1e-9)


class TestGapVoltageSolve:
    def test_residual_and_bisection_cross_check(self):
        rng = np.random.default_rng(31)
        p = PICKETT.params
        for _ in range(100):
            w = rng.uniform(1.25, 1.75)
            v_m = rng.uniform(-0.4, 0.4)
            if v_m == 0.0:
                continue
            s = DeviceState(w, 1.21, 1.8)
            v_g = solve_gap_voltage(s, v_m, p, CFG)
            residual = abs(v_m - v_g - pickett_current(s, v_g, p) * p.r_s)
            assert residual <= 1e-10 * max(1.0, abs(v_m))
            ref = bisect(lambda x: v_m - x - pickett_current(s, x, p) * p.r_s,
                         min(0.0, v_m), max(0.0, v_m), xtol=1e-12)
            assert v_g == pytest.approx(ref, abs=1e-9)

    def test_zero_series_resistance(self):
        p = PickettParams(f_off=3500.0, f_on=40000.0, i_off=115e-6,
                          i_on=8.9e-6, a_off=1.2, a_on=1.8, b=500e-6,
                          w_c=0.107, r_s=0.0)
        s = DeviceState(1.5, 1.21, 1.8)
        assert solve_gap_voltage(s, 0.3, p, CFG) == 0.3


class TestTraceMetadata:
    def test_metadata_fields(self):
        cfg = SolverConfig(dt=1e-4, t_end=0.01)
        trace = integrate(YANG, sine("voltage", 1.1, 3.0),
                          DeviceState(0.9, 0.0, 1.0), cfg)
        md = trace.metadata
        assert md["model"] == "yang"
        assert md["controlled_by"] == "voltage"
        assert md["state_unit"] == "1"
        assert md["increasing_w_turns_on"] is True
        assert md["w_min"] == 0.0 and md["w_max"] == 1.0
        assert len(md["params_hash"]) == 16

    def test_recorded_rate_matches_model(self):
        cfg = SolverConfig(dt=1e-4, t_end=0.01)
        trace = integrate(YANG, sine("voltage", 1.1, 3.0),
                          DeviceState(0.9, 0.0, 1.0), cfg)
        expected = YANG.params.alpha * trace.v ** YANG.params.m
        assert np.allclose(trace.dwdt, expected, rtol=1e-12, atol=1e-300)

    def test_identical_configs_reproduce_identical_traces(self):
        cfg = SolverConfig(dt=1e-4, t_end=0.05)
        drive = sine("current", 5e-4, 3.0)
        w0 = DeviceState(2e-9, 0.0, 10e-9)
        a = integrate(STRUKOV, drive, w0, cfg)
        b = integrate(STRUKOV, drive, w0, cfg)
        for col in ("t", "v", "i", "w", "dwdt"):
            assert np.array_equal(getattr(a, col), getattr(b, col))
