"""Parameter handling, dimensionless transforms, and closed-form kernels.

Everything downstream (quadrature, asymptotics, Monte Carlo, CLI) builds on
the functions here.  The model is the mean-reverting square-root variance
process driving a log-return whose first passage to a fixed level we study.
Working variables are dimensionless throughout:

* ``theta``  -- long-run variance level divided by the reversion rate,
* ``beta``   -- vol-of-vol divided by the reversion rate,
* ``nu``     -- Gamma shape ``2*theta/beta**2`` of the stationary variance law,
* ``z``      -- distance of the starting return to the barrier,
* ``v``      -- instantaneous variance divided by the reversion rate,
* ``tau``    -- time multiplied by the reversion rate.

All kernel functions are numpy-vectorised: scalars in, scalar out; arrays
in, arrays out.  They are pure and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import ParameterError

__all__ = [
    "ModelParams",
    "Dimensionless",
    "State",
    "KernelValues",
    "to_dimensionless",
    "kernel",
    "riccati_B",
    "exponent_A",
    "stationary_density",
    "variance_scale",
    "second_moment",
]


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ParameterError(f"{name} must be finite, got {value!r}")
    return value


def _require_positive(name: str, value: float) -> float:
    value = _require_finite(name, value)
    if value <= 0.0:
        raise ParameterError(f"{name} must be > 0, got {value!r}")
    return value


def _require_nonnegative(name: str, value: float) -> float:
    value = _require_finite(name, value)
    if value < 0.0:
        raise ParameterError(f"{name} must be >= 0, got {value!r}")
    return value


@dataclass(frozen=True)
class ModelParams:
    """Physical model parameters, all carrying units of 1/time.

    Attributes
    ----------
    alpha : float
        Mean-reversion rate of the variance process.
    m_sq : float
        Long-run ("normal") variance level.
    k : float
        Vol-of-vol, the diffusion coefficient of the variance process.
    """

    alpha: float
    m_sq: float
    k: float

    def __post_init__(self):
        _require_positive("alpha", self.alpha)
        _require_positive("m_sq", self.m_sq)
        _require_positive("k", self.k)

    def dimensionless(self) -> "Dimensionless":
        return Dimensionless(theta=self.m_sq / self.alpha, beta=self.k / self.alpha)


@dataclass(frozen=True)
class Dimensionless:
    """Dimensionless model parameters.

    ``nu`` is derived, never supplied: the Gamma shape of the stationary
    variance distribution, ``2*theta/beta**2``.  ``nu < 1`` (zero-touching
    variance) is perfectly legal and is the realistic regime.
    """

    theta: float
    beta: float

    def __post_init__(self):
        _require_positive("theta", self.theta)
        _require_positive("beta", self.beta)

    @property
    def nu(self) -> float:
        return 2.0 * self.theta / self.beta**2


@dataclass(frozen=True)
class State:
    """Initial condition in dimensionless coordinates.

    ``z`` is the distance of the start point to the absorbing barrier
    (nonnegative by construction: the transform takes an absolute value),
    ``v`` the starting variance, ``tau`` the elapsed time.
    """

    z: float
    v: float
    tau: float

    def __post_init__(self):
        _require_nonnegative("z", self.z)
        _require_nonnegative("v", self.v)
        _require_nonnegative("tau", self.tau)


@dataclass(frozen=True)
class KernelValues:
    """The frequency-domain kernel triple (delta, mu_plus, mu_minus).

    Satisfies ``mu_plus - mu_minus == 1``, ``mu_plus + mu_minus == delta``
    and ``mu_plus * mu_minus == (beta*omega)**2 / 4`` to rounding error.
    """

    delta: float
    mu_plus: float
    mu_minus: float


def to_dimensionless(params: ModelParams, y: float, t: float,
                     L: float, x: float) -> tuple[Dimensionless, State]:
    """Map physical inputs to dimensionless parameters and state.

    Parameters
    ----------
    params : ModelParams
    y : float
        Instantaneous variance (1/time units), ``y >= 0``.
    t : float
        Elapsed time (time units), ``t >= 0``.
    L, x : float
        Barrier level and starting point of the return; only the distance
        ``|L - x|`` matters.

    Returns
    -------
    (Dimensionless, State)
    """
    y = _require_nonnegative("y", y)
    t = _require_nonnegative("t", t)
    L = _require_finite("L", L)
    x = _require_finite("x", x)
    d = params.dimensionless()
    state = State(z=abs(L - x), v=y / params.alpha, tau=params.alpha * t)
    return d, state


def kernel(omega, beta: float):
    """Frequency kernel: ``delta = sqrt(1 + (beta*omega)**2)``, ``mu = (delta -+ 1)/2``.

    ``mu_minus`` is evaluated as ``(beta*omega)**2 / (2*(delta + 1))`` which
    is exact algebra but avoids the subtractive cancellation of
    ``(delta - 1)/2`` for small ``beta*omega``.

    Scalar ``omega`` returns :class:`KernelValues`; array ``omega`` returns
    a ``(delta, mu_plus, mu_minus)`` tuple of arrays.
    """
    if np.ndim(omega) == 0:
        if omega < 0.0:
            raise ParameterError(f"omega must be >= 0, got {omega!r}")
        if omega == 0.0:
            return KernelValues(delta=1.0, mu_plus=1.0, mu_minus=0.0)
        bw2 = (beta * float(omega)) ** 2
        delta = math.sqrt(1.0 + bw2)
        mu_minus = bw2 / (2.0 * (delta + 1.0))
        return KernelValues(delta=delta, mu_plus=mu_minus + 1.0, mu_minus=mu_minus)
    omega = np.asarray(omega, dtype=float)
    bw2 = (beta * omega) ** 2
    delta = np.sqrt(1.0 + bw2)
    mu_minus = bw2 / (2.0 * (delta + 1.0))
    return delta, mu_minus + 1.0, mu_minus


def riccati_B(omega, tau, beta: float):
    """Closed-form solution ``B(omega, tau)`` of the Riccati flow.

    Satisfies ``dB/dtau = -B - B**2 + (beta*omega/2)**2`` with ``B(., 0) = 0``,
    increases monotonically in ``tau`` and saturates at ``mu_minus(omega)``.
    ``exp(-delta*tau)`` is allowed to underflow: the returned value is then
    exactly the stationary limit.
    """
    scalar = np.ndim(omega) == 0 and np.ndim(tau) == 0
    omega = np.asarray(omega, dtype=float)
    tau = np.asarray(tau, dtype=float)
    if np.any(omega < 0.0) or np.any(tau < 0.0):
        raise ParameterError("riccati_B requires omega >= 0 and tau >= 0")
    bw2 = (beta * omega) ** 2
    delta = np.sqrt(1.0 + bw2)
    mu_minus = bw2 / (2.0 * (delta + 1.0))
    mu_plus = mu_minus + 1.0
    e = np.exp(-delta * tau)
    out = mu_plus * mu_minus * (1.0 - e) / (mu_plus + mu_minus * e)
    return float(out) if scalar else out


def exponent_A(omega, tau, theta: float, beta: float):
    """Accumulated exponent ``A(omega, tau) = nu * integral of B``.

    Evaluated in the cancellation-free form
    ``nu * (mu_minus*tau + log1p(mu_minus*expm1(-delta*tau)/delta))``:
    the argument of ``log1p`` lies in ``(-mu_minus/delta, 0]`` so the
    logarithm never sees a catastrophic subtraction, and the linear term
    carries the large-``tau`` growth exactly.
    """
    scalar = np.ndim(omega) == 0 and np.ndim(tau) == 0
    omega = np.asarray(omega, dtype=float)
    tau = np.asarray(tau, dtype=float)
    if np.any(omega < 0.0) or np.any(tau < 0.0):
        raise ParameterError("exponent_A requires omega >= 0 and tau >= 0")
    nu = 2.0 * theta / beta**2
    bw2 = (beta * omega) ** 2
    delta = np.sqrt(1.0 + bw2)
    mu_minus = bw2 / (2.0 * (delta + 1.0))
    out = nu * (mu_minus * tau + np.log1p(mu_minus * np.expm1(-delta * tau) / delta))
    # the two terms cancel to O(tau^2) as tau -> 0 and can leave a negative
    # rounding residue; A >= 0 analytically, so pin the floor
    out = np.maximum(out, 0.0)
    return float(out) if scalar else out


def stationary_density(v, theta: float, beta: float):
    """Stationary variance density: Gamma(shape ``nu``, rate ``2/beta**2``).

    Pointwise value; for ``nu < 1`` the density diverges (integrably) at
    ``v = 0`` and ``inf`` is returned there.
    """
    nu = 2.0 * theta / beta**2
    return stats.gamma.pdf(v, a=nu, scale=beta**2 / 2.0)


def variance_scale(tau, v, theta: float):
    """Accumulated variance scale ``2*theta*tau + 2*(1 - exp(-tau))*v``.

    This is the width parameter that the Gaussian (error-function) survival
    approximations are built on; monotone increasing in both ``tau`` and ``v``.
    """
    if np.ndim(tau) or np.ndim(v):
        tau = np.asarray(tau, dtype=float)
        return 2.0 * theta * tau - 2.0 * np.expm1(-tau) * np.asarray(v, dtype=float)
    return 2.0 * theta * tau - 2.0 * math.expm1(-tau) * v


def second_moment(tau, v, theta: float):
    """Second moment of the centred return: ``theta*tau + (v - theta)*(1 - exp(-tau))``."""
    if np.ndim(tau) or np.ndim(v):
        tau = np.asarray(tau, dtype=float)
        return theta * tau - (np.asarray(v, dtype=float) - theta) * np.expm1(-tau)
    return theta * tau - (v - theta) * math.expm1(-tau)
