"""Eigenstructure, amplitude-equation coefficients, coupling verdicts."""

import math

import numpy as np
import pytest

from accelwave import (
    Degenerate,
    DegenerateWaveError,
    DissipativeFinite,
    FluidParams,
    HyperbolicityError,
    Newtonian,
    PowerLaw,
    QuadraticCubic,
    RegularizedPowerLaw,
    SingularLimit,
    SolidParams,
    StateVector,
    assemble_ab_numeric,
    coefficients_ab,
    eigensystem,
    equilibrium_state,
    grad_lambda,
    k_condition,
    quasilinear_matrix,
)
from conftest import random_fluid, random_mr_solid, random_solid, rubber_solid, unit_fluid

# mpmath-evaluated references for the rubber benchmark constants
RUBBER_LAMBDA0 = 74.2381470389745722
RUBBER_A = -0.0090913082009666830
RUBBER_B = 2.9296875
RUBBER_PI_CR = 322.251477481368961


def _random_states(model, rng, n):
    """Valid states inside the hyperbolic region of the model."""
    out = []
    for _ in range(n):
        if isinstance(model, SolidParams) and isinstance(model.elastic, QuadraticCubic):
            # keep omega*W2+1 > 0: F < 1 + (1 + E2/E1)/(2R)
            cap = 1.0 + (1.0 + model.E2 / model.E1) / (2.0 * model.elastic.R)
            F = rng.uniform(0.7, min(1.3, 1.0 + 0.8 * (cap - 1.0)))
        else:
            F = rng.uniform(0.7, 1.3)
        out.append(StateVector(v=rng.uniform(-10, 10), F=F,
                               sigma=rng.uniform(-1e5, 1e5)))
    return out


def _random_models(rng, n):
    models = []
    for i in range(n):
        pick = i % 4
        if pick == 0:
            models.append(random_solid(rng))
        elif pick == 1:
            models.append(random_mr_solid(rng))
        else:
            models.append(random_fluid(rng))
    return models


class TestQuasilinearMatrix:
    def test_unit_fluid(self):
        A = quasilinear_matrix(unit_fluid(), equilibrium_state())
        assert np.array_equal(A, np.array([[0.0, -1.0, -1.0],
                                           [-1.0, 0.0, 0.0],
                                           [-1.0, 0.0, 0.0]]))

    def test_rubber_entry(self):
        A = quasilinear_matrix(rubber_solid(), equilibrium_state())
        assert A[0, 1] == -2.12e6 / 929.0
        assert A[2, 0] == -3.0e6  # -1/omega

    def test_trace_vanishes(self, rng):
        for model in _random_models(rng, 12):
            for state in _random_states(model, rng, 3):
                assert np.trace(quasilinear_matrix(model, state)) == 0.0


class TestEigensystem:
    def test_rubber_speed(self):
        eig = eigensystem(rubber_solid(), equilibrium_state())
        assert eig.lam == pytest.approx(RUBBER_LAMBDA0, rel=1e-12)

    def test_unit_fluid_speed(self):
        # mu_tilde = 2 with unit constants, so the fast speed is sqrt(2)
        assert eigensystem(unit_fluid(), equilibrium_state()).lam == \
            pytest.approx(math.sqrt(2.0), rel=1e-15)

    def test_normalization_and_identities_randomized(self, rng):
        checked = 0
        for model in _random_models(rng, 250):
            for state in _random_states(model, rng, 4):
                A = quasilinear_matrix(model, state)
                eig = eigensystem(model, state)
                pairs = [(eig.lam, eig.d_plus, eig.l_plus),
                         (-eig.lam, eig.d_minus, eig.l_minus),
                         (0.0, eig.d_zero, eig.l_zero)]
                for lam, d, l in pairs:
                    assert abs(float(l @ d) - 1.0) <= 1e-14
                    scale = max(np.linalg.norm(A @ d), abs(lam) * np.linalg.norm(d),
                                np.linalg.norm(A) * np.linalg.norm(d) * 1e-4)
                    assert np.linalg.norm(A @ d - lam * d) <= 1e-12 * scale
                    scale_l = max(np.linalg.norm(l @ A), abs(lam) * np.linalg.norm(l),
                                  np.linalg.norm(A) * np.linalg.norm(l) * 1e-4)
                    assert np.linalg.norm(l @ A - lam * l) <= 1e-12 * scale_l
                checked += 1
        assert checked == 1000

    def test_spectrum_structure(self, rng):
        for model in _random_models(rng, 20):
            state = _random_states(model, rng, 1)[0]
            A = quasilinear_matrix(model, state)
            lam = eigensystem(model, state).lam
            ev = np.sort(np.linalg.eigvals(A).real)
            assert np.allclose(ev, [-lam, 0.0, lam], rtol=1e-10, atol=1e-10 * lam)
            assert abs(np.linalg.det(A)) <= 1e-10 * lam ** 3
            assert abs(np.linalg.det(A - lam * np.eye(3))) <= 1e-10 * lam ** 3

    def test_hyperbolicity_guard(self):
        model = rubber_solid()
        cap = 1.0 + (1.0 + model.E2 / model.E1) / (2.0 * model.elastic.R)
        with pytest.raises(HyperbolicityError):
            eigensystem(model, StateVector(v=0.0, F=cap + 0.1, sigma=0.0))


class TestGradLambda:
    def test_velocity_and_sigma_components_vanish(self, rng):
        for model in _random_models(rng, 8):
            g = grad_lambda(model, equilibrium_state())
            assert g[0] == 0.0
            assert g[2] == 0.0  # constant omega

    def test_rubber_stretch_component(self):
        model = rubber_solid()
        g = grad_lambda(model, equilibrium_state())
        expected = (-2.0 * 2.12e6 * 1.63) / (2.0 * RUBBER_LAMBDA0 * 929.0)
        assert g[1] == pytest.approx(expected, rel=1e-12)

    def test_matches_finite_differences(self, rng):
        for model in _random_models(rng, 12):
            for state in _random_states(model, rng, 2):
                g = grad_lambda(model, state)
                hF = 1e-6 * state.F
                lam_p = eigensystem(model, StateVector(state.v, state.F + hF, state.sigma)).lam
                lam_m = eigensystem(model, StateVector(state.v, state.F - hF, state.sigma)).lam
                assert g[1] == pytest.approx((lam_p - lam_m) / (2 * hF), rel=1e-6)
                hs = max(1.0, abs(state.sigma)) * 1e-6
                lam_p = eigensystem(model, StateVector(state.v, state.F, state.sigma + hs)).lam
                lam_m = eigensystem(model, StateVector(state.v, state.F, state.sigma - hs)).lam
                assert (lam_p - lam_m) / (2 * hs) == 0.0  # lambda independent of sigma


class TestCoefficients:
    def test_rubber_benchmark(self):
        wc = coefficients_ab(rubber_solid())
        assert wc.lambda0 == pytest.approx(RUBBER_LAMBDA0, rel=1e-12)
        assert wc.a == pytest.approx(RUBBER_A, rel=1e-12)
        assert wc.b == pytest.approx(RUBBER_B, rel=1e-12)
        assert wc.pi_cr == pytest.approx(RUBBER_PI_CR, rel=1e-12)
        assert isinstance(wc.case, DissipativeFinite)

    def test_unit_fluid_closed_forms(self):
        wc = coefficients_ab(unit_fluid())
        assert wc.b == 0.25
        assert wc.a == pytest.approx(-1.0 / math.sqrt(8.0), rel=1e-15)
        assert wc.pi_cr == pytest.approx(math.sqrt(2.0) / 2.0, rel=1e-14)

    def test_shear_thinning_degenerate(self):
        wc = coefficients_ab(unit_fluid(PowerLaw(k_cons=1.0, m=0.5)))
        assert wc.b == 0.0
        assert wc.pi_cr == 0.0
        assert isinstance(wc.case, Degenerate)

    def test_unregularized_thickening_singular(self):
        wc = coefficients_ab(unit_fluid(PowerLaw(k_cons=1.0, m=2.0)))
        assert math.isinf(wc.b) and math.isinf(wc.pi_cr)
        assert isinstance(wc.case, SingularLimit)
        assert wc.case.n == pytest.approx(0.5, rel=1e-15)
        # b0 = coeff/(2*rho*lam0^2*omega^2) = 2^(-1/2)/4 with unit constants
        assert wc.case.b0 == pytest.approx(2.0 ** -0.5 / 4.0, rel=1e-14)

    def test_regularized_thickening_threshold(self):
        wc = coefficients_ab(unit_fluid(RegularizedPowerLaw(k_cons=1.0, m=2.0, eps=0.01)))
        assert isinstance(wc.case, DissipativeFinite)
        assert wc.pi_cr == pytest.approx(5.0, rel=1e-12)

    def test_closed_form_equals_numeric_assembly(self, rng):
        count = 0
        for model in _random_models(rng, 1000):
            if isinstance(model, FluidParams) and \
                    isinstance(model.production, PowerLaw) and model.production.m > 1.0:
                model = FluidParams(rho_star=model.rho_star, R_gas=model.R_gas,
                                    tau0=model.tau0, mu0=model.mu0,
                                    production=Newtonian())
            wc = coefficients_ab(model)
            a_num, b_num = assemble_ab_numeric(model)
            assert a_num == pytest.approx(wc.a, rel=1e-10)
            if wc.b == 0.0:
                assert b_num == 0.0
            else:
                assert b_num == pytest.approx(wc.b, rel=1e-10)
            count += 1
        assert count == 1000

    def test_solid_specialization_randomized(self, rng):
        for _ in range(200):
            model = random_solid(rng)
            E1, E2, tau0, rho = model.E1, model.E2, model.tau0, model.rho_star
            R = model.elastic.R
            wc = coefficients_ab(model)
            assert wc.lambda0 == pytest.approx(math.sqrt((E1 + E2) / rho), rel=1e-12)
            assert wc.a == pytest.approx(-math.sqrt(rho) * E1 * R / (E1 + E2) ** 1.5,
                                         rel=1e-12)
            assert wc.b == pytest.approx(E2 / (2.0 * tau0 * (E1 + E2)), rel=1e-12)
            expected_pi_cr = (E2 / E1) / (2.0 * R * tau0) * math.sqrt((E1 + E2) / rho)
            assert wc.pi_cr == pytest.approx(expected_pi_cr, rel=1e-12)

    def test_fluid_specialization_randomized(self, rng):
        for _ in range(200):
            model = random_fluid(rng, kind="newtonian")
            mt = model.mu_tilde
            Rg, tau0 = model.R_gas, model.tau0
            # mu_tilde - 1 evaluated as the defining ratio: the subtraction
            # cancels badly when viscous effects are a small perturbation
            mt_m1 = model.mu0 / (Rg * model.rho_star * tau0)
            wc = coefficients_ab(model)
            assert wc.lambda0 == pytest.approx(math.sqrt(Rg * mt), rel=1e-12)
            assert wc.a == pytest.approx(-1.0 / math.sqrt(Rg * mt ** 3), rel=1e-12)
            assert wc.b == pytest.approx(mt_m1 / (2.0 * mt * tau0), rel=1e-12)
            assert wc.pi_cr == pytest.approx(
                math.sqrt(Rg * mt) * mt_m1 / (2.0 * tau0), rel=1e-12)

    def test_degenerate_fast_field_rejected(self):
        flat = SolidParams(rho_star=1.0, E2=1.0, tau0=1.0,
                           elastic=QuadraticCubic(R=0.0), E1=1.0)
        with pytest.raises(DegenerateWaveError):
            coefficients_ab(flat)


class TestKCondition:
    def test_rubber_full(self):
        rep = k_condition(rubber_solid())
        assert rep.full_K and rep.weak_K
        assert rep.zero.grad_f_dot_d_nonzero
        assert not rep.zero.genuinely_nonlinear

    def test_newtonian_holds(self):
        rep = k_condition(unit_fluid())
        assert rep.weak_K and rep.full_K

    def test_shear_thinning_violated(self):
        rep = k_condition(unit_fluid(PowerLaw(k_cons=1.0, m=0.5)))
        assert not rep.weak_K and not rep.full_K
        assert rep.plus.genuinely_nonlinear
        assert not rep.plus.grad_f_dot_d_nonzero
        assert not rep.minus.grad_f_dot_d_nonzero

    def test_singular_slope_counts_as_coupled(self):
        rep = k_condition(unit_fluid(PowerLaw(k_cons=1.0, m=2.0)))
        assert rep.weak_K and rep.full_K

    def test_degenerate_elastic_field_weakly_vacuous(self):
        flat = SolidParams(rho_star=1.0, E2=1.0, tau0=1.0,
                           elastic=QuadraticCubic(R=0.0), E1=1.0)
        rep = k_condition(flat)
        assert not rep.plus.genuinely_nonlinear
        assert rep.weak_K      # no genuinely nonlinear family to violate it
        assert rep.full_K      # coupling still present in every family
