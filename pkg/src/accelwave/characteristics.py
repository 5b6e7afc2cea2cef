"""Characteristic structure of the quasilinear system in u = (v, F, sigma).

The homogeneous part has speeds {-lambda, 0, +lambda} with closed-form
eigenvectors; around the equilibrium state (v=0, F=1, sigma=0) the fastest
family carries an amplitude equation pi' + a*pi^2 + b*pi = 0 whose
coefficients are assembled here, together with the coupling (Shizuta-
Kawashima) condition verdicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .materials import (
    MaterialModel,
    SingularProductionSlope,
    elastic_derivs,
    omega_prime,
    production,
    production_jacobian,
    viscous_omega,
)

__all__ = [
    "StateVector",
    "Eigensystem",
    "DissipativeFinite",
    "Degenerate",
    "SingularLimit",
    "WaveCoefficients",
    "FamilyReport",
    "KConditionReport",
    "HyperbolicityError",
    "DegenerateWaveError",
    "equilibrium_state",
    "quasilinear_matrix",
    "eigensystem",
    "grad_lambda",
    "source_jacobian",
    "coefficients_ab",
    "assemble_ab_numeric",
    "k_condition",
]


class HyperbolicityError(ValueError):
    """Raised when omega*W''(F) + 1 <= 0 and the system loses hyperbolicity."""


class DegenerateWaveError(RuntimeError):
    """Raised when the fastest field is linearly degenerate (a = 0)."""


@dataclass(frozen=True)
class StateVector:
    """Primitive state (v, F, sigma); equilibrium is (0, 1, 0)."""

    v: float
    F: float
    sigma: float

    def __post_init__(self):
        if not self.F > 0.0:
            raise ValueError(f"deformation gradient F must be > 0, got {self.F}")

    def as_array(self) -> np.ndarray:
        return np.array([self.v, self.F, self.sigma])


def equilibrium_state() -> StateVector:
    return StateVector(v=0.0, F=1.0, sigma=0.0)


@dataclass(frozen=True)
class Eigensystem:
    """Speeds {-lam, 0, +lam} and right/left eigenvector pairs with l.d = 1.

    The -lam and 0 families mirror the +lam normalization convention.
    """

    lam: float
    d_plus: np.ndarray
    l_plus: np.ndarray
    d_minus: np.ndarray
    l_minus: np.ndarray
    d_zero: np.ndarray
    l_zero: np.ndarray

    @property
    def speeds(self) -> tuple[float, float, float]:
        return (-self.lam, 0.0, self.lam)


def quasilinear_matrix(model: MaterialModel, state: StateVector) -> np.ndarray:
    """Coefficient matrix A(u) of u_t + A u_X = f in the (v, F, sigma) field."""
    w2 = elastic_derivs(model, state.F).W2
    rho = model.rho_star
    om = viscous_omega(model, state.sigma)
    return np.array([
        [0.0, -w2 / rho, -1.0 / rho],
        [-1.0, 0.0, 0.0],
        [-1.0 / om, 0.0, 0.0],
    ])


def _lambda(model: MaterialModel, F: float, sigma: float) -> float:
    w2 = elastic_derivs(model, F).W2
    om = viscous_omega(model, sigma)
    disc = om * w2 + 1.0
    if disc <= 0.0:
        raise HyperbolicityError(
            f"omega*W''(F) + 1 = {disc:.6g} <= 0 at F={F}: system not hyperbolic")
    return math.sqrt(disc / (model.rho_star * om))


def eigensystem(model: MaterialModel, state: StateVector) -> Eigensystem:
    """Closed-form eigenstructure of A(u) at the given state."""
    w2 = elastic_derivs(model, state.F).W2
    rho = model.rho_star
    om = viscous_omega(model, state.sigma)
    lam = _lambda(model, state.F, state.sigma)
    d_plus = np.array([-1.0 / lam, 1.0 / lam ** 2, 1.0 / (lam ** 2 * om)])
    l_plus = 0.5 * np.array([-lam, w2 / rho, 1.0 / rho])
    d_minus = np.array([1.0 / lam, 1.0 / lam ** 2, 1.0 / (lam ** 2 * om)])
    l_minus = 0.5 * np.array([lam, w2 / rho, 1.0 / rho])
    disc = om * w2 + 1.0
    d_zero = np.array([0.0, 1.0, -w2])
    l_zero = np.array([0.0, 1.0 / disc, -om / disc])
    return Eigensystem(lam=lam, d_plus=d_plus, l_plus=l_plus,
                       d_minus=d_minus, l_minus=l_minus,
                       d_zero=d_zero, l_zero=l_zero)


def grad_lambda(model: MaterialModel, state: StateVector) -> np.ndarray:
    """Gradient of the fast speed in (v, F, sigma).

    The sigma component carries -omega'/omega^2, which vanishes for the
    quadratic viscous energy.
    """
    lam = _lambda(model, state.F, state.sigma)
    rho = model.rho_star
    w3 = elastic_derivs(model, state.F).W3
    om = viscous_omega(model, state.sigma)
    omp = omega_prime(model, state.sigma)
    return (1.0 / (2.0 * lam * rho)) * np.array([0.0, w3, -omp / om ** 2])


def source_jacobian(model: MaterialModel, state: StateVector) -> np.ndarray:
    """Gradient of the quasilinear source f = (0, 0, P/omega) in (v, F, sigma)."""
    jac = production_jacobian(model, state.F, state.sigma)
    if isinstance(jac.P_sigma, SingularProductionSlope):
        raise ValueError("source_jacobian needs a finite P_sigma; the "
                         "unregularized law is singular at sigma=0")
    om = viscous_omega(model, state.sigma)
    omp = omega_prime(model, state.sigma)
    P = production(model, state.F, state.sigma)
    grad_f = np.zeros((3, 3))
    grad_f[2, 1] = jac.P_F / om
    grad_f[2, 2] = (jac.P_sigma * om - P * omp) / om ** 2
    return grad_f


# ---------------------------------------------------------------------------
# Amplitude-equation coefficients at equilibrium
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DissipativeFinite:
    """P_sigma(1,0) < 0 finite: b > 0, threshold amplitude pi_cr = b/|a|."""


@dataclass(frozen=True)
class Degenerate:
    """P_sigma(1,0) = 0: b = 0, every positive initial amplitude blows up."""


@dataclass(frozen=True)
class SingularLimit:
    """P_sigma(1,0) = -infinity with b(eps) = b0/eps**n: amplitudes are
    damped on the fast time scale eps**n/b0."""

    n: float
    b0: float


CaseTag = Union[DissipativeFinite, Degenerate, SingularLimit]


@dataclass(frozen=True)
class WaveCoefficients:
    """Amplitude-equation data for the fast family at equilibrium.

    b and pi_cr are math.inf when the case is :class:`SingularLimit`; the
    divergence law is carried by the tag, never used in arithmetic.
    """

    lambda0: float   # [m/s]
    a: float         # [s/m]
    b: float         # [1/s]
    pi_cr: float     # [m/s^2]
    case: CaseTag


def coefficients_ab(model: MaterialModel) -> WaveCoefficients:
    """Closed-form (lambda0, a, b, pi_cr) at the equilibrium state."""
    eq = equilibrium_state()
    derivs = elastic_derivs(model, eq.F)
    rho = model.rho_star
    om = viscous_omega(model, eq.sigma)
    omp = omega_prime(model, eq.sigma)
    lam0 = _lambda(model, eq.F, eq.sigma)
    # lam0^2 written without squaring the square root keeps b exact for
    # closed-form-friendly constants
    lam0_sq = (om * derivs.W2 + 1.0) / (rho * om)
    a = (om ** 3 * derivs.W3 - omp) / (2.0 * lam0 * lam0_sq * rho * om ** 3)
    if a == 0.0:
        raise DegenerateWaveError(
            "fast field is linearly degenerate (W'''(1) = 0 with constant "
            "omega); check the material constants")
    ps = production_jacobian(model, eq.F, eq.sigma).P_sigma
    denom = 2.0 * rho * lam0_sq * om ** 2
    if isinstance(ps, SingularProductionSlope):
        return WaveCoefficients(lambda0=lam0, a=a, b=math.inf, pi_cr=math.inf,
                                case=SingularLimit(n=ps.n, b0=ps.coeff / denom))
    b = -ps / denom
    if b == 0.0:
        return WaveCoefficients(lambda0=lam0, a=a, b=0.0, pi_cr=0.0,
                                case=Degenerate())
    return WaveCoefficients(lambda0=lam0, a=a, b=b, pi_cr=b / abs(a),
                            case=DissipativeFinite())


def assemble_ab_numeric(model: MaterialModel) -> tuple[float, float]:
    """(a, b) rebuilt from the component operations: a = grad(lambda).d and
    b = -l.grad(f).d at equilibrium.  Cross-checks the closed forms."""
    eq = equilibrium_state()
    eig = eigensystem(model, eq)
    a = float(np.dot(grad_lambda(model, eq), eig.d_plus))
    grad_f = source_jacobian(model, eq)
    b = -float(eig.l_plus @ grad_f @ eig.d_plus)
    return a, b


# ---------------------------------------------------------------------------
# Coupling condition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyReport:
    genuinely_nonlinear: bool
    grad_f_dot_d_nonzero: bool


@dataclass(frozen=True)
class KConditionReport:
    """Per-family coupling verdicts at equilibrium.

    full_K: every family carries a nonzero jump of the source gradient.
    weak_K: the same restricted to genuinely nonlinear families.
    """

    minus: FamilyReport
    zero: FamilyReport
    plus: FamilyReport
    full_K: bool
    weak_K: bool


def k_condition(model: MaterialModel) -> KConditionReport:
    """Coupling-condition verdicts for the three characteristic families."""
    eq = equilibrium_state()
    eig = eigensystem(model, eq)
    jac = production_jacobian(model, eq.F, eq.sigma)
    om = viscous_omega(model, eq.sigma)

    def coupled(d: np.ndarray) -> bool:
        if isinstance(jac.P_sigma, SingularProductionSlope):
            # a divergent slope is in particular nonzero
            return True
        return bool((jac.P_F * d[1] + jac.P_sigma * d[2]) / om != 0.0)

    gn_fast = float(np.dot(grad_lambda(model, eq), eig.d_plus)) != 0.0
    fams = {
        "minus": FamilyReport(gn_fast, coupled(eig.d_minus)),
        "zero": FamilyReport(False, coupled(eig.d_zero)),  # grad(lam)=0 identically
        "plus": FamilyReport(gn_fast, coupled(eig.d_plus)),
    }
    full = all(f.grad_f_dot_d_nonzero for f in fams.values())
    weak = all(f.grad_f_dot_d_nonzero for f in fams.values() if f.genuinely_nonlinear)
    return KConditionReport(minus=fams["minus"], zero=fams["zero"],
                            plus=fams["plus"], full_K=full, weak_K=weak)
