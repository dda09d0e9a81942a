"""Pump selection and fabrication-error compensation."""

import numpy as np
import pytest

from pcffwm.bsfwm import ConversionSetup, PumpSpec, efficiency_envelope
from pcffwm.compensate import (
    CompensationPoint,
    Perturbation,
    compensation_curve,
    perturbed_envelope,
    pump_for_target,
    summary_bandwidth_nm,
)
from pcffwm.errors import DomainError, NotFoundError
from pcffwm.pcf import DispersionModel, FibreGeometry, omega_from_lambda_um

# Frozen pump solution for the symmetric design at lambda_t = 1550 nm.
LAMBDA_P_SYM = 640.3489827217755


class FakeOddFibre:
    """Stand-in dispersion model with purely odd beta about omega0:
    beta = b0 + b1 (w - w0) + b3 (w - w0)^3 / 6. The pump equation's even
    terms cancel exactly, so the nontrivial root is the mirror frequency
    2 w0 - w_t."""

    def __init__(self, lambda0_um=0.9):
        self.omega0 = float(omega_from_lambda_um(lambda0_um))
        self._window = (0.5, 2.0)

    def beta(self, omega):
        d = np.asarray(omega, dtype=float) - self.omega0
        out = 1.0e7 + 4.9e-9 * d + 1.0e-41 * d ** 3 / 6.0
        return float(out) if out.ndim == 0 else out

    def lambda_window(self):
        return self._window

    def check_validity(self, lambda_um):
        from pcffwm.pcf import ValidityResult

        lo, hi = self._window
        if lo <= lambda_um <= hi:
            return ValidityResult(True)
        return ValidityResult(False, "outside synthetic window")

    def find_zdw(self, *args, **kwargs):  # only consulted when several roots exist
        raise NotFoundError("synthetic fibre has no beta_2 zero crossing")


class TestPumpForTarget:
    def test_sym_design_regression(self, model_sym):
        sol = pump_for_target(model_sym, 1550.0)
        assert sol.lambda_p_nm == pytest.approx(LAMBDA_P_SYM, abs=1e-4)
        assert not sol.at_edge

    def test_root_residual_small_on_beta_scale(self, model_sym):
        sol = pump_for_target(model_sym, 1550.0)
        beta_scale = model_sym.beta(float(omega_from_lambda_um(sol.lambda_p_nm * 1e-3)))
        assert abs(sol.residual) < 1e-10 * beta_scale

    def test_trivial_root_excluded(self, model_sym):
        sol = pump_for_target(model_sym, 1550.0)
        assert abs(sol.lambda_p_nm - 1550.0) > 1.0

    def test_synthetic_odd_fibre_mirror_root(self):
        fibre = FakeOddFibre(lambda0_um=0.9)
        lambda_t_nm = 1300.0
        w_t = float(omega_from_lambda_um(lambda_t_nm * 1e-3))
        sol = pump_for_target(fibre, lambda_t_nm)
        w_p = float(omega_from_lambda_um(sol.lambda_p_nm * 1e-3))
        assert w_p == pytest.approx(2.0 * fibre.omega0 - w_t, rel=1e-8)

    def test_out_of_domain_target(self, model_sym):
        with pytest.raises(DomainError):
            pump_for_target(model_sym, 5000.0)

    def test_no_root_raises_not_found(self):
        class EvenFibre(FakeOddFibre):
            def beta(self, omega):
                d = np.asarray(omega, dtype=float) - self.omega0
                # purely even curvature: f = b2 (u - v)^2 / 4 > 0 away
                # from the (deflated) trivial root
                out = 1.0e7 + 4.9e-9 * d + 1.0e-26 * d ** 2 / 2.0
                return float(out) if out.ndim == 0 else out

        with pytest.raises(NotFoundError):
            pump_for_target(EvenFibre(), 1300.0)


class TestPerturbation:
    def test_large_fraction_rejected(self):
        with pytest.raises(ValueError):
            Perturbation("pitch", 0.2)

    def test_unknown_axis_rejected(self):
        with pytest.raises(ValueError):
            Perturbation("length", 0.01)

    def test_apply(self):
        g = Perturbation("ratio", 0.01).apply(FibreGeometry(1.78, 0.437))
        assert g.d_over_pitch == pytest.approx(0.437 * 1.01)


class TestCompensationCurve:
    def test_zero_fraction_is_identity(self, model_sym):
        curve = compensation_curve(model_sym, "pitch", [0.0], 1550.0)
        assert curve[0].delta_nm == 0.0
        assert curve[0].status == "ok"

    def test_opposite_fractions_have_opposite_signs(self, model_sym):
        curve = compensation_curve(model_sym, "pitch", [-0.01, 0.01], 1550.0)
        d_minus, d_plus = curve[0].delta_nm, curve[1].delta_nm
        assert d_minus * d_plus < 0

    def test_pitch_and_ratio_curves_differ(self, model_sym):
        pitch = compensation_curve(model_sym, "pitch", [0.01], 1550.0)
        ratio = compensation_curve(model_sym, "ratio", [0.01], 1550.0)
        assert pitch[0].delta_nm != pytest.approx(ratio[0].delta_nm, abs=1e-6)

    def test_consistency_with_direct_solve(self, model_sym):
        frac = 0.005
        curve = compensation_curve(model_sym, "pitch", [frac], 1550.0)
        direct = pump_for_target(
            DispersionModel(model_sym.geometry.perturbed("pitch", frac)), 1550.0
        )
        assert curve[0].lambda_p_nm == direct.lambda_p_nm

    def test_continuity_through_zero(self, model_sym):
        fracs = np.linspace(-0.01, 0.01, 9)
        curve = compensation_curve(model_sym, "pitch", fracs, 1550.0)
        deltas = np.array([p.delta_nm for p in curve])
        assert np.all(np.isfinite(deltas))
        assert deltas[4] == 0.0
        # no jump anywhere approaching the total variation of the curve
        total = deltas.max() - deltas.min()
        assert np.all(np.abs(np.diff(deltas)) < 0.6 * total)

    def test_failures_recorded_per_point(self, model_sym):
        # 9% ratio increase pushes d/pitch close to the fit edge but the
        # point is still attempted; an invalid axis kills construction
        curve = compensation_curve(model_sym, "pitch", [0.0, 0.05], 1550.0)
        assert all(isinstance(p, CompensationPoint) for p in curve)
        assert curve[0].status == "ok"


class TestSummaryBandwidth:
    def _env(self, lam, values):
        from pcffwm.bsfwm import EnvelopeResult

        lam = np.asarray(lam, dtype=float)
        values = np.asarray(values, dtype=float)
        return EnvelopeResult(lam, values, np.full_like(lam, np.nan), np.zeros(lam.shape, bool))

    def test_all_above(self):
        env = self._env([800, 900, 1000], [0.9, 0.8, 0.7])
        assert summary_bandwidth_nm(env) == 200.0

    def test_longest_contiguous_run(self):
        env = self._env([800, 900, 1000, 1100, 1200], [0.9, 0.2, 0.8, 0.9, 0.6])
        assert summary_bandwidth_nm(env) == 200.0

    def test_none_above(self):
        env = self._env([800, 900], [0.1, 0.2])
        assert summary_bandwidth_nm(env) == 0.0


class TestPerturbedEnvelope:
    S_GRID = np.arange(880.0, 961.0, 10.0)

    def test_zero_fraction_reproduces_nominal(self, model_sym):
        pe = perturbed_envelope(
            model_sym, Perturbation("pitch", 0.0), 1550.0, 5.0, self.S_GRID
        )
        pump = PumpSpec(pe.lambda_p_nm, 5.0)
        nominal = efficiency_envelope(
            model_sym, ConversionSetup(), pump, 1550.0, self.S_GRID
        )
        assert pe.lambda_p_nm == pytest.approx(LAMBDA_P_SYM, abs=1e-4)
        assert np.allclose(pe.envelope.values, nominal.values, rtol=1e-12)

    def test_pump_rederived_on_perturbed_fibre(self, model_sym):
        pe = perturbed_envelope(
            model_sym, Perturbation("pitch", -0.01), 1550.0, 5.0, self.S_GRID
        )
        direct = pump_for_target(
            DispersionModel(model_sym.geometry.perturbed("pitch", -0.01)), 1550.0
        )
        assert pe.lambda_p_nm == direct.lambda_p_nm
        assert np.all((pe.envelope.values >= 0) & (pe.envelope.values <= 1))
