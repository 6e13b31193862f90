"""Closed-form survival/hitting approximations, the risk ratio, and the
crossing-level machinery.

Each approximation is valid in a particular corner of parameter space; the
``REGIMES`` table records those predicates as advisory metadata.  Nothing is
enforced: out-of-regime evaluation is legal (and is exactly what the regime
comparison plots need).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import erf, erfc

from .core import Dimensionless, variance_scale
from .errors import DivisionDomain, InsufficientData, NoRoot
from .quadrature import QuadConfig, survival_averaged

__all__ = [
    "Regime",
    "REGIMES",
    "CrossingResult",
    "LineFit",
    "CrossingLawFits",
    "survival_erf",
    "survival_arctan",
    "survival_pheno",
    "survival_avg_erf",
    "survival_avg_arctan",
    "tail_gaussian_hitting",
    "tail_powerlaw_hitting",
    "risk_ratio",
    "ratio_asymptote",
    "crossing_level",
    "fit_crossing_laws",
]


@dataclass(frozen=True)
class Regime:
    """An approximation tag plus its advisory validity predicate."""

    tag: str
    validity: str


REGIMES = {r.tag: r for r in (
    Regime("erf_joint", "(theta/beta**2)*tau >> 1 or v >> 1 or beta << 1"),
    Regime("arctan_joint", "beta >> 1 and tau not small"),
    Regime("pheno", "interpolating guess; exact only in the arctan corner"),
    Regime("erf_averaged", "(theta/beta**2)*tau >> 1"),
    Regime("arctan_averaged", "beta >> 1"),
    Regime("tail_gaussian", "z**2/variance_scale >> 1 in the Gaussian regime"),
    Regime("tail_powerlaw", "beta >> 1 and beta*z/(theta*tau) >> 1"),
    Regime("wiener", "frozen variance (beta -> 0 with v = theta)"),
)}


@dataclass(frozen=True)
class CrossingResult:
    """Root of the Gaussian-vs-heavy-tail hitting balance."""

    l_c: float
    beta: float
    theta_tau: float
    bracket: tuple[float, float]
    residual: float


@dataclass(frozen=True)
class LineFit:
    slope: float
    intercept: float
    rms_residual: float


@dataclass(frozen=True)
class CrossingLawFits:
    """Least-squares summaries of how the crossing level moves.

    ``log_law``: per fixed ``theta_tau``, fit of ``l_c`` against ``log(beta)``.
    ``power_law``: per fixed ``beta``, fit of ``log(l_c)`` against
    ``log(theta_tau)`` -- the slope is the growth exponent.
    """

    log_law: dict[float, LineFit]
    power_law: dict[float, LineFit]


def survival_erf(z, v, tau, theta):
    """Gaussian-regime survival: ``erf(z / sqrt(variance_scale))``.

    Meets both the barrier condition (0 at z=0) and the initial condition
    (1 at tau=0, v=0).
    """
    lam = variance_scale(tau, v, theta)
    if np.ndim(z) or np.ndim(lam):
        lam = np.asarray(lam, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            arg = np.where(lam > 0.0, np.asarray(z) / np.sqrt(np.where(lam > 0.0, lam, 1.0)), np.inf)
        return np.where(np.asarray(z) == 0.0, 0.0, erf(arg))
    if z == 0.0:
        return 0.0
    if lam == 0.0:
        return 1.0
    return float(erf(z / math.sqrt(lam)))


def survival_arctan(z, v, tau, theta, beta):
    """Large-vol-of-vol survival: ``(2/pi) * arctan(beta*z / (theta*tau + v))``.

    Obeys the barrier condition but not the initial condition.
    """
    denom = theta * tau + v
    if np.ndim(z) or np.ndim(denom):
        z = np.asarray(z, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(z == 0.0, 0.0, (2.0 / np.pi) * np.arctan(beta * z / denom))
    if z == 0.0:
        return 0.0
    if denom == 0.0:
        return 1.0
    return (2.0 / math.pi) * math.atan(beta * z / denom)


def survival_pheno(z, v, tau, theta, beta, use_beta_factor: bool = False):
    """Semi-phenomenological interpolation ``(2/pi) * arctan(2 z / variance_scale)``.

    With ``use_beta_factor`` the numerator gains a factor ``beta``, which the
    long-time limit of the large-beta expansion suggests but the baseline
    form omits; the default stays with the baseline.
    """
    lam = variance_scale(tau, v, theta)
    num = (2.0 * beta * z) if use_beta_factor else (2.0 * z)
    if np.ndim(z) or np.ndim(lam):
        z = np.asarray(z, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(z == 0.0, 0.0, (2.0 / np.pi) * np.arctan(num / lam))
    if z == 0.0:
        return 0.0
    if lam == 0.0:
        return 1.0
    return (2.0 / math.pi) * math.atan(num / lam)


def survival_avg_erf(z, tau, theta):
    """Stationary-averaged Gaussian regime: ``erf(z / sqrt(2*theta*tau))``.

    Independent of beta by construction.
    """
    tt = 2.0 * theta * np.asarray(tau, dtype=float) if np.ndim(tau) else 2.0 * theta * tau
    if np.ndim(z) or np.ndim(tt):
        z = np.asarray(z, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            arg = np.where(tt > 0.0, z / np.sqrt(np.where(tt > 0.0, tt, 1.0)), np.inf)
        return np.where(z == 0.0, 0.0, erf(arg))
    if z == 0.0:
        return 0.0
    if tt == 0.0:
        return 1.0
    return float(erf(z / math.sqrt(tt)))


def survival_avg_arctan(z, tau, theta, beta):
    """Stationary-averaged large-vol-of-vol survival:
    ``(2/pi) * arctan(beta*z / (theta*tau))``; meets both boundary and
    initial conditions."""
    return survival_arctan(z, 0.0, tau, theta, beta)


def tail_gaussian_hitting(L_abs, lam):
    """Deep-tail hitting in the Gaussian regime:
    ``sqrt(lam/pi) * exp(-L**2/lam) / |L|``  (for the averaged case pass
    ``lam = 2*theta*tau``)."""
    L_abs = np.abs(L_abs)
    return np.sqrt(lam / np.pi) * np.exp(-L_abs * L_abs / lam) / L_abs


def tail_powerlaw_hitting(L_abs, tau, theta, beta):
    """Slow power-law hitting tail ``theta*tau / (beta*|L|)``."""
    return theta * tau / (beta * np.abs(L_abs))


def risk_ratio(z: float, tau: float, d: Dimensionless,
               config: QuadConfig | None = None) -> float:
    """Hitting probability relative to the constant-volatility baseline.

    Numerator: stationary-averaged hitting from the exact quadrature.
    Denominator: ``1 - erf(z / sqrt(2*theta*tau))`` (the baseline whose
    variance rate equals the long-run level).  A vanishing denominator is
    signalled with :class:`DivisionDomain`, never masked.
    """
    if not (z > 0.0 and tau > 0.0):
        raise DivisionDomain("risk_ratio requires z > 0 and tau > 0")
    denom = float(erfc(z / math.sqrt(2.0 * d.theta * tau)))
    if denom <= 0.0:
        raise DivisionDomain(
            f"baseline hitting probability underflowed at z={z!r}, tau={tau!r}")
    num = 1.0 - survival_averaged(z, tau, d, config).value
    return num / denom


def ratio_asymptote(z: float, theta_tau: float, beta: float | None = None) -> float:
    """Large-``z`` growth law of the risk ratio:
    ``sqrt(pi*theta_tau/2) * exp(z**2 / (2*theta_tau))``, divided by ``beta``
    when one is supplied (the variant the power-law tail actually implies)."""
    val = math.sqrt(math.pi * theta_tau / 2.0) * math.exp(z * z / (2.0 * theta_tau))
    return val / beta if beta is not None else val


def _crossing_gap(l: float, beta: float, theta_tau: float) -> float:
    return float(erf(l / math.sqrt(2.0 * theta_tau))) - (2.0 / math.pi) * math.atan(beta * l / theta_tau)


def crossing_level(beta: float, theta_tau: float, tol: float = 1e-10) -> CrossingResult:
    """Level beyond which heavy-tail hitting overtakes the Gaussian hitting.

    Solves ``erf(l/sqrt(2*theta_tau)) = (2/pi)*arctan(beta*l/theta_tau)`` for
    the nontrivial root.  Both sides vanish at ``l = 0``, so the scan for a
    sign change discards leading grid points where the gap is still within
    ``10*tol`` of zero before bracketing.
    """
    if beta <= 0.0 or theta_tau <= 0.0:
        raise NoRoot("crossing_level requires beta > 0 and theta_tau > 0")
    grid = np.logspace(-4.0, 1.0, 200)
    gaps = np.array([_crossing_gap(l, beta, theta_tau) for l in grid])
    alive = np.abs(gaps) > 10.0 * tol
    if not np.any(alive):
        raise NoRoot("gap function indistinguishable from zero on the scan grid")
    start = int(np.argmax(alive))
    sign_change = None
    for i in range(start, len(grid) - 1):
        if gaps[i] == 0.0:
            continue
        if gaps[i] * gaps[i + 1] < 0.0:
            sign_change = i
            break
    if sign_change is None:
        raise NoRoot(f"no sign change on the scan grid for beta={beta!r}, "
                     f"theta_tau={theta_tau!r}")
    lo, hi = float(grid[sign_change]), float(grid[sign_change + 1])
    root = float(brentq(_crossing_gap, lo, hi, args=(beta, theta_tau),
                        xtol=1e-14, rtol=8.882e-16))
    return CrossingResult(l_c=root, beta=beta, theta_tau=theta_tau,
                          bracket=(lo, hi), residual=abs(_crossing_gap(root, beta, theta_tau)))


def _line_fit(x: np.ndarray, y: np.ndarray) -> LineFit:
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return LineFit(float(slope), float(intercept), float(np.sqrt(np.mean(resid**2))))


def fit_crossing_laws(samples) -> CrossingLawFits:
    """Least-squares growth laws from ``(beta, theta_tau, l_c)`` samples.

    Groups needing a fit must contain at least 5 samples spanning at least
    one decade of the abscissa; anything less raises
    :class:`InsufficientData`.
    """
    rows = [(float(b), float(tt), float(lc)) for b, tt, lc in samples]
    if not rows:
        raise InsufficientData("no samples")
    log_law: dict[float, LineFit] = {}
    power_law: dict[float, LineFit] = {}
    by_tt: dict[float, list[tuple[float, float]]] = {}
    by_beta: dict[float, list[tuple[float, float]]] = {}
    for b, tt, lc in rows:
        by_tt.setdefault(tt, []).append((b, lc))
        by_beta.setdefault(b, []).append((tt, lc))
    for tt, pts in by_tt.items():
        if len(pts) < 2:
            continue
        b = np.array([p[0] for p in pts])
        lc = np.array([p[1] for p in pts])
        if len(pts) < 5 or b.max() / b.min() < 10.0:
            raise InsufficientData(
                f"log-law fit at theta_tau={tt!r} needs >= 5 samples over a decade")
        log_law[tt] = _line_fit(np.log(b), lc)
    for b, pts in by_beta.items():
        if len(pts) < 2:
            continue
        tt = np.array([p[0] for p in pts])
        lc = np.array([p[1] for p in pts])
        if len(pts) < 5 or tt.max() / tt.min() < 10.0:
            raise InsufficientData(
                f"power-law fit at beta={b!r} needs >= 5 samples over a decade")
        power_law[b] = _line_fit(np.log(tt), np.log(lc))
    if not log_law and not power_law:
        raise InsufficientData("no group had enough samples to fit")
    return CrossingLawFits(log_law=log_law, power_law=power_law)
