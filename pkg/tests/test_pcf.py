"""Empirical PCF dispersion model: validity gate, index reconstruction,
beta derivatives and ZDW root finding."""

import numpy as np
import pytest
from scipy.constants import c as C_LIGHT

from pcffwm.errors import DataFileError, DomainError, NotFoundError
from pcffwm.pcf import (
    DispersionModel,
    EmpiricalFitTables,
    FibreGeometry,
    lambda_um_from_omega,
    load_fits,
    omega_from_lambda_um,
)

# Frozen regression references for the transcribed fit tables.
NEFF_FIG1_794 = 1.4329093597278177  # n_eff(0.794 um; pitch 1.39, ratio 0.55)
BETA_FIG1_695 = 13012315.008152088  # beta at lambda = pitch/2 = 0.695 um, rad/m
ZDW_FIG1 = 0.7967276815964762  # um
ZDW_SYM = 0.9129530247617221  # um
ZDW_TYP = 0.9470892172534606  # um


class TestGeometry:
    def test_rejects_nonpositive_pitch(self):
        with pytest.raises(ValueError):
            FibreGeometry(0.0, 0.5)

    def test_rejects_ratio_outside_unit_interval(self):
        with pytest.raises(ValueError):
            FibreGeometry(1.0, 1.2)
        with pytest.raises(ValueError):
            FibreGeometry(1.0, 0.0)

    def test_perturbed(self):
        g = FibreGeometry(2.0, 0.5).perturbed("pitch", 0.01)
        assert g.pitch == pytest.approx(2.02)
        g = FibreGeometry(2.0, 0.5).perturbed("ratio", -0.01)
        assert g.d_over_pitch == pytest.approx(0.495)
        with pytest.raises(ValueError):
            FibreGeometry(2.0, 0.5).perturbed("length", 0.01)


class TestValidity:
    def test_fig1_design_valid(self, model_fig1):
        assert model_fig1.check_validity(0.794)

    def test_ratio_out_of_range_names_bound(self):
        model = DispersionModel(FibreGeometry(1.39, 0.95))
        res = model.check_validity(0.794)
        assert not res
        assert "d/pitch" in res.reason

    def test_wavelength_ratio_out_of_range_names_bound(self):
        model = DispersionModel(FibreGeometry(1.0, 0.5))
        res = model.check_validity(10.0)
        assert not res
        assert "lambda/pitch" in res.reason

    def test_invalid_pair_never_returns_a_number(self):
        model = DispersionModel(FibreGeometry(1.39, 0.95))
        omega = float(omega_from_lambda_um(0.794))
        for call in (
            lambda: model.effective_index(0.794),
            lambda: model.fsm_index(0.794),
            lambda: model.beta(omega),
            lambda: model.beta_n(omega, 2),
            lambda: model.group_velocity(omega),
        ):
            with pytest.raises(DomainError):
                call()


class TestEffectiveIndex:
    def test_guided_mode_ordering(self, model_sym):
        lam = 0.9
        n_eff = model_sym.effective_index(lam)
        assert model_sym.fsm_index(lam) < n_eff < model_sym.glass_index(lam)

    def test_fig1_regression(self, model_fig1):
        assert model_fig1.effective_index(0.794) == pytest.approx(NEFF_FIG1_794, rel=1e-12)

    def test_array_matches_scalar(self, model_sym):
        lam = np.array([0.7, 0.9, 1.3])
        arr = model_sym.effective_index(lam)
        for x, expected in zip(lam, arr):
            assert model_sym.effective_index(float(x)) == pytest.approx(expected, rel=1e-14)


class TestBeta:
    def test_regression_at_half_pitch(self, model_fig1):
        omega = float(omega_from_lambda_um(1.39 * 0.5))
        beta = model_fig1.beta(omega)
        assert beta > 0
        assert beta == pytest.approx(BETA_FIG1_695, rel=1e-12)

    def test_monotonic_in_omega(self, model_sym):
        lam = np.linspace(0.5, 2.5, 300)
        omega = np.sort(omega_from_lambda_um(lam))
        beta = model_sym.beta(omega)
        assert np.all(np.diff(beta) > 0)

    def test_unit_round_trip(self, model_sym):
        lam = 0.9
        omega = 2.0 * np.pi * C_LIGHT / (lam * 1e-6)
        direct = model_sym.effective_index(lam) * omega / C_LIGHT
        assert model_sym.beta(omega) == pytest.approx(direct, rel=1e-12)


class TestBetaDerivatives:
    def test_beta1_slower_than_vacuum(self, model_sym):
        omega = omega_from_lambda_um(np.linspace(0.6, 2.0, 40))
        b1 = model_sym.beta_n(omega, 1)
        assert np.all(b1 > 1.0 / C_LIGHT)

    def test_beta2_vanishes_at_zdw(self, model_fig1):
        lam0 = model_fig1.find_zdw()
        b2_at_zdw = abs(model_fig1.beta_n(float(omega_from_lambda_um(lam0)), 2))
        lam = np.linspace(0.5, 1.8, 200)
        b2_max = np.abs(model_fig1.beta_n(omega_from_lambda_um(lam), 2)).max()
        assert b2_at_zdw < 1e-3 * b2_max

    def test_beta1_against_independent_step(self, model_sym):
        omega = float(omega_from_lambda_um(1.1))
        h = 7.3e10  # deliberately different from the model's default step
        oracle = (model_sym.beta(omega + h) - model_sym.beta(omega - h)) / (2 * h)
        assert model_sym.beta_n(omega, 1) == pytest.approx(oracle, rel=1e-6)

    def test_order_out_of_range(self, model_sym):
        omega = float(omega_from_lambda_um(1.1))
        with pytest.raises(ValueError):
            model_sym.beta_n(omega, 5)
        with pytest.raises(ValueError):
            model_sym.beta_n(omega, 0)

    def test_stencil_clipped_at_window_edge(self, model_sym):
        lo, hi = model_sym.lambda_window()
        omega_edge = float(omega_from_lambda_um(hi)) + 1e9
        with pytest.raises(DomainError, match="stencil"):
            model_sym.beta_n(omega_edge, 2)

    def test_derivative_chain_consistency(self):
        """beta_n(n) must match a central difference of beta_n(n-1) on a
        random in-domain sample, n = 1..3. A coarser step than the
        default keeps double-precision rounding well below the tolerance
        for the higher orders."""
        model = DispersionModel(FibreGeometry(1.78, 0.437), derivative_step=1e12)
        rng = np.random.default_rng(20260824)
        lam = rng.uniform(0.6, 2.2, size=100)
        omega = omega_from_lambda_um(lam)
        h = 1e12
        for n in range(1, 4):
            lower = lambda w: model.beta(w) if n == 1 else model.beta_n(w, n - 1)
            oracle = (lower(omega + h) - lower(omega - h)) / (2 * h)
            got = model.beta_n(omega, n)
            scale = np.abs(oracle).max()
            assert np.all(np.abs(got - oracle) < 1e-4 * scale)

    def test_beta2_sign_flips_once_across_zdw(self, model_fig1):
        lam0 = model_fig1.find_zdw()
        lam = np.linspace(lam0 - 0.15, lam0 + 0.15, 400)
        b2 = model_fig1.beta_n(omega_from_lambda_um(lam), 2)
        flips = np.nonzero(np.diff(np.sign(b2)) != 0)[0]
        assert len(flips) == 1
        # normal dispersion on the short side, anomalous on the long side
        assert b2[0] > 0 > b2[-1]


class TestGroupVelocity:
    def test_reciprocal_identity(self, model_sym):
        omega = float(omega_from_lambda_um(1.0))
        assert model_sym.group_velocity(omega) == 1.0 / model_sym.beta_n(omega, 1)

    def test_below_vacuum_speed(self, model_sym):
        omega = omega_from_lambda_um(np.linspace(0.6, 2.0, 50))
        vg = model_sym.group_velocity(omega)
        assert np.all((vg > 0) & (vg < C_LIGHT))

    def test_extremum_at_zdw(self, model_fig1):
        lam0 = model_fig1.find_zdw()
        omega0 = float(omega_from_lambda_um(lam0))
        d = 1e13
        vg0 = model_fig1.group_velocity(omega0)
        assert vg0 > model_fig1.group_velocity(omega0 + d)
        assert vg0 > model_fig1.group_velocity(omega0 - d)


class TestFindZdw:
    def test_fig1_zdw(self, model_fig1):
        lam0 = model_fig1.find_zdw()
        assert lam0 == pytest.approx(ZDW_FIG1, abs=1e-5)
        assert lam0 == pytest.approx(0.794, abs=0.005)

    def test_sym_and_typ_regressions(self, model_sym, model_typ):
        assert model_sym.find_zdw() == pytest.approx(ZDW_SYM, abs=1e-5)
        assert model_typ.find_zdw() == pytest.approx(ZDW_TYP, abs=1e-5)

    def test_window_without_zdw(self, model_fig1):
        # anomalous-dispersion stretch between the design's two beta_2 roots
        with pytest.raises(NotFoundError):
            model_fig1.find_zdw(search_window=(1.0, 1.35))

    def test_multi_root_window_warns_and_returns_shortest(self, model_sym):
        import warnings

        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            lam0 = model_sym.find_zdw(search_window=(0.4, 2.4))
        assert any("zero-dispersion roots" in str(w.message) for w in caught)
        assert lam0 == pytest.approx(ZDW_SYM, abs=1e-4)

    def test_step_halving_stability(self):
        a = DispersionModel(FibreGeometry(1.78, 0.437), derivative_step=1e11)
        b = DispersionModel(FibreGeometry(1.78, 0.437), derivative_step=5e10)
        assert abs(a.find_zdw() - b.find_zdw()) < 0.05e-3  # um

    def test_runtime_under_one_second(self, model_sym):
        import time

        t0 = time.perf_counter()
        model_sym.find_zdw()
        assert time.perf_counter() - t0 < 1.0


class TestFitTables:
    def test_loader_round_trip(self):
        fits = load_fits()
        assert np.asarray(fits.a).shape == (4, 4)
        assert np.asarray(fits.d).shape == (3, 4)
        assert fits.ratio_range == (0.2, 0.8)
        assert fits.x_range == (0.1, 2.0)

    def test_bad_shape_rejected(self):
        good = load_fits()
        with pytest.raises(DataFileError):
            EmpiricalFitTables(
                a=good.a[:3], b=good.b, c=good.c, d=good.d,
                ratio_range=good.ratio_range, x_range=good.x_range,
            )


class TestModelConstruction:
    def test_rejects_nonpositive_step(self):
        with pytest.raises(ValueError):
            DispersionModel(FibreGeometry(1.78, 0.437), derivative_step=0.0)

    def test_rejects_coarse_step(self):
        with pytest.raises(ValueError, match="100x"):
            DispersionModel(FibreGeometry(1.78, 0.437), derivative_step=1e14)

    def test_lambda_window_intersects_glass_window(self):
        model = DispersionModel(FibreGeometry(1.0, 0.5))
        lo, hi = model.lambda_window()
        assert lo == pytest.approx(0.21)  # glass edge beats 0.1 * pitch
        assert hi == pytest.approx(2.0)  # 2.0 * pitch


def test_unit_conversions_round_trip():
    lam = np.array([0.5, 1.0, 1.55])
    assert np.allclose(lambda_um_from_omega(omega_from_lambda_um(lam)), lam, rtol=1e-15)
