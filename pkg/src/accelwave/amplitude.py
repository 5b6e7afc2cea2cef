"""Amplitude evolution of the front jump: pi' = -a*pi^2 - b*pi.

Closed-form solution, blow-up classification and critical time, a fixed-grid
RK4 companion with step refinement near blow-up, and the scan of the singular
damping limit b(eps) = b0/eps**n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .characteristics import WaveCoefficients

__all__ = [
    "AmplitudeProblem",
    "AmplitudeOutcome",
    "Trajectory",
    "ScanRow",
    "classify",
    "closed_form",
    "integrate",
    "singular_limit_scan",
    "problem_from_coefficients",
]

BLOWUP_FACTOR = 1e12          # |pi| > BLOWUP_FACTOR*max(1, |pi0|) declares blow-up
GROWTH_LIMIT = 10.0           # halve the step when |pi| grows by more than this


@dataclass(frozen=True)
class AmplitudeProblem:
    """Coefficients and initial jump; b = math.inf marks the singular limit."""

    a: float     # quadratic coefficient [s/m]
    b: float     # linear damping [1/s], >= 0 (math.inf allowed)
    pi0: float   # initial acceleration jump [m/s^2]


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    pi: np.ndarray
    blew_up: bool
    t_blowup: float | None


@dataclass(frozen=True)
class AmplitudeOutcome:
    global_existence: bool
    t_c: float | None          # present iff global_existence is False
    pi_cr: float               # blow-up threshold (0.0 when b = 0, inf when b = inf)
    trajectory: Trajectory | None = None


def problem_from_coefficients(wc: WaveCoefficients, pi0: float) -> AmplitudeProblem:
    return AmplitudeProblem(a=wc.a, b=wc.b, pi0=pi0)


def _check_ab(a: float, b: float) -> None:
    if a == 0.0:
        raise ValueError("a must be nonzero (genuinely nonlinear field)")
    if b < 0.0:
        raise ValueError(f"damping coefficient b must be >= 0, got {b}")


def classify(a: float, b: float, pi0: float) -> AmplitudeOutcome:
    """Global existence vs finite-time blow-up, with the critical time.

    The convention a < 0 makes positive super-critical amplitudes blow up;
    a > 0 is handled by the mirror symmetry pi -> -pi.
    """
    _check_ab(a, b)
    if math.isinf(b):
        return AmplitudeOutcome(global_existence=True, t_c=None, pi_cr=math.inf)
    s = 1.0 if a < 0.0 else -1.0   # s*pi0 is the amplitude in the canonical frame
    p0 = s * pi0
    if b > 0.0:
        pi_cr = b / abs(a)
        if p0 <= pi_cr:   # pi0 = pi_cr rides the unstable constant solution
            return AmplitudeOutcome(global_existence=True, t_c=None, pi_cr=pi_cr)
        t_c = -math.log(1.0 - pi_cr / p0) / b
        return AmplitudeOutcome(global_existence=False, t_c=t_c, pi_cr=pi_cr)
    # b = 0: every amplitude on the blow-up side has a critical time
    if p0 > 0.0:
        return AmplitudeOutcome(global_existence=False, t_c=-1.0 / (a * pi0), pi_cr=0.0)
    return AmplitudeOutcome(global_existence=True, t_c=None, pi_cr=0.0)


def closed_form(a: float, b: float, pi0: float, t):
    """Exact solution pi(t); accepts scalar or array t.

    Raises for evaluation at or beyond the critical time of a blow-up
    solution.  b = 0 uses the algebraic branch pi0/(1 + a*pi0*t); the general
    branch is continuous in b down to 0 (expm1 keeps it accurate).
    """
    _check_ab(a, b)
    if math.isinf(b):
        raise ValueError("closed_form needs a finite b; evaluate at finite eps instead")
    t = np.asarray(t, dtype=float)
    outcome = classify(a, b, pi0)
    if not outcome.global_existence and np.any(t >= outcome.t_c):
        raise ValueError(f"solution blows up at t_c = {outcome.t_c:.6g}; "
                         "closed_form evaluated at t >= t_c")
    if b == 0.0:
        out = pi0 / (1.0 + a * pi0 * t)
    else:
        growth = -np.expm1(-b * t)    # 1 - exp(-b t), accurate for small b*t
        out = pi0 * np.exp(-b * t) / (1.0 + (a / b) * pi0 * growth)
    return float(out) if out.ndim == 0 else out


def _rk4_step(a: float, b: float, p: float, h: float) -> float:
    def rhs(x):
        return -a * x * x - b * x

    k1 = rhs(p)
    k2 = rhs(p + 0.5 * h * k1)
    k3 = rhs(p + 0.5 * h * k2)
    k4 = rhs(p + h * k3)
    return p + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(a: float, b: float, pi0: float, t_end: float, dt: float) -> Trajectory:
    """RK4 on the output grid 0, dt, 2*dt, ..., t_end with internal refinement.

    A trial step whose amplitude grows more than GROWTH_LIMIT-fold (or goes
    non-finite) is retried at half the step; blow-up is declared once
    |pi| > BLOWUP_FACTOR * max(1, |pi0|) and the trajectory is truncated
    there.  Coefficient a may be zero here (plain linear decay).
    """
    if dt <= 0.0 or t_end <= 0.0:
        raise ValueError("t_end and dt must be > 0")
    if math.isinf(b):
        raise ValueError("integrate needs a finite b")
    threshold = BLOWUP_FACTOR * max(1.0, abs(pi0))
    h_min = dt * 2.0 ** -60
    ts = [0.0]
    ps = [pi0]
    t, p = 0.0, pi0
    blew_up = False
    t_blowup = None
    n_out = int(math.ceil(t_end / dt - 1e-12))
    for k in range(1, n_out + 1):
        target = min(k * dt, t_end)
        while t < target and not blew_up:
            h = target - t
            while True:
                trial = _rk4_step(a, b, p, h)
                grew = (not math.isfinite(trial)) or \
                    abs(trial) > GROWTH_LIMIT * max(abs(p), 1e-300)
                if grew and h > h_min and abs(p) <= threshold:
                    h *= 0.5
                    continue
                break
            t += h
            p = trial
            if abs(p) > threshold or not math.isfinite(p):
                blew_up = True
                t_blowup = t
        if blew_up:
            break
        ts.append(t)
        ps.append(p)
    return Trajectory(t=np.array(ts), pi=np.array(ps),
                      blew_up=blew_up, t_blowup=t_blowup)


@dataclass(frozen=True)
class ScanRow:
    eps: float
    b: float
    pi_cr: float
    decay_time: float          # 1/b, the fast damping scale
    global_existence: bool
    t_c: float | None


def singular_limit_scan(b0: float, n: float, eps_list, a: float, pi0: float) -> list[ScanRow]:
    """Table of b(eps) = b0/eps**n, pi_cr(eps) and decay time over eps_list.

    pi_cr decreases and the decay time grows as eps increases; each row also
    classifies the given initial jump pi0 at that eps.
    """
    if b0 <= 0.0 or n <= 0.0:
        raise ValueError("b0 and n must be > 0")
    if a == 0.0:
        raise ValueError("a must be nonzero")
    rows = []
    for eps in eps_list:
        if eps <= 0.0:
            raise ValueError(f"eps values must be > 0, got {eps}")
        b = b0 / eps ** n
        outcome = classify(a, b, pi0)
        rows.append(ScanRow(eps=float(eps), b=b, pi_cr=b / abs(a),
                            decay_time=1.0 / b,
                            global_existence=outcome.global_existence,
                            t_c=outcome.t_c))
    return rows
