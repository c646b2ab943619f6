"""
Group delays for over-barrier scattering.

All delays are Wigner phase times: ``hbar * d(phase)/dE``.  The transmission
delay ``tau_t`` follows phi2, the reflection delay is ``tau_r = tau_t + tau_1``
with ``tau_1 = -hbar * d(phi1)/dE``.  Closed forms are expressed through the
classical traversal time ``tau_c = a / v_c`` with ``v_c = hbar k0 / mu``.

Undefined values (``tau_1`` where ``g1`` vanishes) are returned as ``None``
from the scalar API and as NaN from the array kernels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal, Optional

import mpmath
import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import DomainError, PhaseWrapError, UndefinedError
from .scattering import (
    G1_GUARD,
    BarrierConfig,
    WaveNumbers,
    energy_floor,
    g1_complex_k,
    g1_squared_k,
    g2_complex_k,
    g2_squared_k,
    wave_numbers,
)

Which = Literal["transmission", "reflection", "tau_1"]

# series fallback threshold for sin(y)/y
_SINC_SERIES = 1e-4


@dataclass(frozen=True)
class DelayReport:
    E: float
    tau_c: float
    v_c: float
    tau_t: float
    tau_1: Optional[float]
    tau_r: Optional[float]
    tau_t_numeric: Optional[float]
    tau_r_numeric: Optional[float]


@dataclass(frozen=True)
class ResonanceSummary:
    """Closed-form and refined values at the m-th transmission resonance.

    ``k0a_at_peak`` is the refined maximum of T (exactly ``m*pi`` in exact
    arithmetic).  ``k0a_tau_r_peak`` and ``tau_r_peak`` locate the refined
    extremum of ``tau_r/tau_c``, which sits slightly off ``m*pi``.
    All delays are in time units; ``tau_c`` is evaluated at ``a = m*pi/k0``.
    """

    m: int
    k0a_at_peak: float
    tau_t_max: float
    tau_1_max: float
    T_max: float
    half_width_E: float
    tau_c: float
    a: float
    k0a_tau_r_peak: float
    tau_r_peak: float


def sinc(y):
    """``sin(y)/y`` with a short series near zero."""
    y = np.asarray(y, dtype=float)
    small = np.abs(y) < _SINC_SERIES
    ys = np.where(small, 1.0, y)
    y2 = y * y
    out = np.where(small, 1.0 - y2 / 6.0 + y2 * y2 / 120.0, np.sin(ys) / ys)
    return out if out.ndim else float(out)


def classical_time(cfg: BarrierConfig, E: float) -> tuple[float, float]:
    """Return ``(v_c, tau_c)`` for motion across the barrier region."""
    wn = wave_numbers(cfg, E)
    v_c = cfg.hbar * wn.k0 / cfg.mu
    return v_c, cfg.a / v_c


# -- array kernels ------------------------------------------------------------

def tau_c_k(k0, a, mu=1.0, hbar=1.0):
    return a * mu / (hbar * k0)


def tau_t_over_tau_c_k(k0, k1, k2, a):
    sc = sinc(2.0 * k0 * a)
    bracket = k2 / k0 + k0 / k1 - (1.0 - k0**2 / k1**2) * (k2 / k0 - k0 / k2) * sc
    return (1.0 + k2 / k1) * bracket / (4.0 * g2_squared_k(k0, k1, k2, a))


def tau_1_over_tau_c_k(k0, k1, k2, a):
    """``tau_1/tau_c``; NaN where g1 is below the zero-reflection guard."""
    sc = sinc(2.0 * k0 * a)
    bracket = k2 / k0 - k0 / k1 - (1.0 - k0**2 / k1**2) * (k2 / k0 - k0 / k2) * sc
    g1sq = g1_squared_k(k0, k1, k2, a)
    undefined = g1sq < (G1_GUARD**2) * g2_squared_k(k0, k1, k2, a)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = -(1.0 - k2 / k1) * bracket / (4.0 * g1sq)
    return np.where(undefined, np.nan, val)


def tau_t_at_resonance(wn: WaveNumbers) -> float:
    """``tau_t/tau_c`` at ``k0 a = m pi``."""
    k0, k1, k2 = wn.k0, wn.k1, wn.k2
    return (k1 * k2 + k0**2) / (k0 * (k1 + k2))


def tau_1_at_resonance(wn: WaveNumbers) -> float:
    """``tau_1/tau_c`` at ``k0 a = m pi``; needs k1 != k2."""
    k0, k1, k2 = wn.k0, wn.k1, wn.k2
    if k1 == k2:
        raise UndefinedError("tau_1 has no resonant peak when k1 == k2")
    return -(k1 * k2 - k0**2) / (k0 * (k1 - k2))


def tau_t_off_resonance(wn: WaveNumbers) -> float:
    """``tau_t/tau_c`` at ``k0 a = (m + 1/2) pi``."""
    k0, k1, k2 = wn.k0, wn.k1, wn.k2
    return (1.0 + k2 / k1) / (k2 / k0 + k0 / k1)


def tau_1_off_resonance(wn: WaveNumbers) -> float:
    """``tau_1/tau_c`` at ``k0 a = (m + 1/2) pi``."""
    k0, k1, k2 = wn.k0, wn.k1, wn.k2
    return -(1.0 - k2 / k1) / (k2 / k0 - k0 / k1)


def transmission_max(wn: WaveNumbers) -> float:
    return 4.0 / (1.0 + wn.k2 / wn.k1) ** 2


# -- scalar analytic delays ------------------------------------------------

def tau_t_analytic(cfg: BarrierConfig, E: float) -> float:
    wn = wave_numbers(cfg, E)
    tc = tau_c_k(wn.k0, cfg.a, cfg.mu, cfg.hbar)
    return float(tc * tau_t_over_tau_c_k(wn.k0, wn.k1, wn.k2, cfg.a))


def tau_1_analytic(cfg: BarrierConfig, E: float) -> Optional[float]:
    """Extra reflection delay ``-hbar dphi1/dE``; ``None`` where g1 vanishes."""
    wn = wave_numbers(cfg, E)
    ratio = float(tau_1_over_tau_c_k(wn.k0, wn.k1, wn.k2, cfg.a))
    if math.isnan(ratio):
        return None
    return tau_c_k(wn.k0, cfg.a, cfg.mu, cfg.hbar) * ratio


def tau_r(cfg: BarrierConfig, E: float) -> Optional[float]:
    t1 = tau_1_analytic(cfg, E)
    if t1 is None:
        return None
    return tau_t_analytic(cfg, E) + t1


# -- numeric derivatives ---------------------------------------------------

def scattering_phase(cfg: BarrierConfig, E: float, which: Which) -> Optional[float]:
    """Principal-value phase whose energy derivative gives the delay.

    ``transmission`` -> phi2, ``reflection`` -> arg r = phi2 - phi1,
    ``tau_1`` -> phi1.  Returns ``None`` if the phase is undefined (g1 = 0).
    """
    p = _phase_mp(cfg, E, which)
    return None if p is None else float(p)


def _phase_mp(cfg: BarrierConfig, E, which: Which):
    """:func:`scattering_phase` as an mpmath number.

    Evaluated with 32 significant digits: the finite-difference quotient
    divides rounding noise by a step of ~1e-6 E.
    """
    with mpmath.workdps(32):
        E = mpmath.mpf(E)
        s = mpmath.sqrt(2 * mpmath.mpf(cfg.mu)) / cfg.hbar
        k0 = s * mpmath.sqrt(E - cfg.V0)
        k1 = s * mpmath.sqrt(E - cfg.V1)
        k2 = s * mpmath.sqrt(E - cfg.V2)
        c, sn = mpmath.cos(k0 * cfg.a), mpmath.sin(k0 * cfg.a)
        G2 = mpmath.mpc((1 + k2 / k1) * c, -(k2 / k0 + k0 / k1) * sn) / 2
        if which == "transmission":
            return -mpmath.arg(G2)
        # 1 - k2/k1 written without cancellation for k1 ~ k2
        one_minus = 2 * mpmath.mpf(cfg.mu) * (mpmath.mpf(cfg.V2) - cfg.V1) / (
            cfg.hbar**2 * k1 * (k1 + k2))
        G1 = mpmath.mpc(one_minus * c, -(k2 / k0 - k0 / k1) * sn) / 2
        if abs(G1) < G1_GUARD * abs(G2):
            return None
        if which == "reflection":
            return mpmath.arg(G1 / G2)
        if which == "tau_1":
            return -mpmath.arg(G1)
    raise ValueError(f"unknown delay kind {which!r}")


def _continue_phases(phases):
    out = [phases[0]]
    for p in phases[1:]:
        d = p - out[-1]
        d = d - 2 * mpmath.pi * mpmath.nint(d / (2 * mpmath.pi))
        if abs(d) > mpmath.pi / 2:
            raise PhaseWrapError(f"phase jump of {float(d):.3f} rad inside the stencil")
        out.append(out[-1] + d)
    return out


def tau_numeric(
    cfg: BarrierConfig,
    E: float,
    which: Which = "transmission",
    rel_step: float = 1e-6,
    richardson: bool = True,
) -> Optional[float]:
    """Delay from a central difference of the continued phase.

    Step is ``h = max(rel_step*|E|, 1e-9*|V0|)``; with ``richardson`` one
    extrapolation level combines steps ``h`` and ``h/2``.  For
    ``which="tau_1"`` the sign convention ``-hbar dphi1/dE`` is applied.

    Returns ``None`` when the phase is undefined at ``E`` itself.

    Raises
    ------
    DomainError
        If the stencil reaches below the barrier.
    PhaseWrapError
        If neighbouring stencil phases cannot be joined continuously.
    """
    h = max(rel_step * abs(E), 1e-9 * abs(cfg.V0))
    if E - h <= energy_floor(cfg):
        raise DomainError(f"difference stencil at E={E} (h={h:g}) leaves the over-barrier domain")
    offsets = (-1.0, -0.5, 0.0, 0.5, 1.0) if richardson else (-1.0, 0.0, 1.0)
    with mpmath.workdps(32):
        raw = [_phase_mp(cfg, mpmath.mpf(E) + o * mpmath.mpf(h), which) for o in offsets]
        if raw[len(raw) // 2] is None:
            return None
        if any(p is None for p in raw):
            raise PhaseWrapError(f"phase undefined inside the stencil around E={E}")
        ph = dict(zip(offsets, _continue_phases(raw)))
        d1 = (ph[1.0] - ph[-1.0]) / (2 * h)
        if richardson:
            d2 = (ph[0.5] - ph[-0.5]) / h
            deriv = (4 * d2 - d1) / 3
        else:
            deriv = d1
    sign = -1.0 if which == "tau_1" else 1.0
    return sign * cfg.hbar * float(deriv)


def delay_report(cfg: BarrierConfig, E: float) -> DelayReport:
    v_c, tc = classical_time(cfg, E)
    tt = tau_t_analytic(cfg, E)
    t1 = tau_1_analytic(cfg, E)

    def _numeric(which):
        try:
            return tau_numeric(cfg, E, which)
        except (PhaseWrapError, DomainError):
            return None

    return DelayReport(
        E=E, tau_c=tc, v_c=v_c, tau_t=tt, tau_1=t1,
        tau_r=None if t1 is None else tt + t1,
        tau_t_numeric=_numeric("transmission"),
        tau_r_numeric=_numeric("reflection"),
    )


# -- resonance structure -----------------------------------------------------

def refine_extremum(f: Callable[[float], float], x_grid, maximize=True, xtol=1e-10) -> float:
    """Grid search followed by golden-section refinement of a 1-D extremum.

    The grid maximum (or minimum) must be interior so that it brackets.
    """
    xs = np.asarray(x_grid, dtype=float)
    sgn = -1.0 if maximize else 1.0
    vals = np.array([sgn * f(x) for x in xs])
    i = int(np.nanargmin(vals))
    if i == 0 or i == len(xs) - 1:
        raise ValueError("extremum is on the grid boundary; widen the grid")
    res = minimize_scalar(lambda x: sgn * f(x), bracket=(xs[i - 1], xs[i], xs[i + 1]),
                          method="golden", tol=xtol)
    return float(res.x)


def resonance_asin_arg(wn: WaveNumbers) -> float:
    """``k0|k1-k2| / sqrt((k1^2-k0^2)(k2^2-k0^2))``.

    Below 1 whenever ``k0 <= min(k1, k2)/2``; it can exceed 1 when k0 is
    close to the smaller side wave number, where the resonance has no
    narrow half-width.
    """
    k0, k1, k2 = wn.k0, wn.k1, wn.k2
    return k0 * abs(k1 - k2) / math.sqrt((k1**2 - k0**2) * (k2**2 - k0**2))


def _resonance_angle(wn: WaveNumbers) -> float:
    if wn.k1 == wn.k2:
        raise UndefinedError("no reflection-delay peak when k1 == k2")
    x = resonance_asin_arg(wn)
    if x > 1.0:
        raise UndefinedError(f"resonance too broad for a half-width (asin argument {x:.4g} > 1)")
    return math.asin(x)


def half_width(cfg: BarrierConfig, E: float) -> float:
    """Energy half-width ``Delta E`` of the reflection-delay resonance peak."""
    wn = wave_numbers(cfg, E)
    angle = _resonance_angle(wn)
    _, tc = classical_time(cfg, E)
    if tc == 0:
        raise UndefinedError("half-width undefined for a = 0")
    return cfg.hbar / tc * angle


def packet_validity_bound(cfg: BarrierConfig, E: float, w: float) -> float:
    """Largest thickness for which a Gaussian packet of time spread ``w``
    stays narrower in energy than the resonance (``hbar/(2w) <= Delta E``)."""
    if not w > 0:
        raise DomainError(f"packet width must be positive, got w={w}")
    wn = wave_numbers(cfg, E)
    v_c = cfg.hbar * wn.k0 / cfg.mu
    return 2.0 * v_c * w * _resonance_angle(wn)


def min_packet_width(cfg: BarrierConfig, E: float) -> float:
    """Smallest ``w`` for which ``cfg.a`` satisfies the thickness bound."""
    return cfg.a / packet_validity_bound(cfg, E, 1.0)


def _dT_dx(wn: WaveNumbers):
    k0, k1, k2 = wn.k0, wn.k1, wn.k2
    N = 4.0 * k0**2 * k1**2
    D = k0**2 * (k1 + k2) ** 2
    C = (k1**2 - k0**2) * (k2**2 - k0**2)
    return lambda x: -N * C * math.sin(2.0 * x) / (D + C * math.sin(x) ** 2) ** 2


def resonance_summary(cfg: BarrierConfig, E: float, m: int) -> ResonanceSummary:
    """Tabulate the m-th resonance at fixed energy, varying the thickness.

    ``cfg.a`` is ignored; the summary refers to ``a = m*pi/k0``.
    """
    if m < 1:
        raise ValueError(f"resonance index must be >= 1, got {m}")
    wn = wave_numbers(cfg, E)
    if wn.k1 == wn.k2:
        raise UndefinedError("no reflection-delay resonance when k1 == k2")
    k0, k1, k2 = wn.k0, wn.k1, wn.k2
    x_res = m * math.pi
    k0a_T = brentq(_dT_dx(wn), x_res - math.pi / 4, x_res + math.pi / 4, xtol=1e-15)
    a_m = x_res / k0
    res_cfg = cfg.with_thickness(a_m)
    tc = tau_c_k(k0, a_m, cfg.mu, cfg.hbar)

    def tau_r_ratio(x):
        return float(tau_t_over_tau_c_k(k0, k1, k2, x / k0) + tau_1_over_tau_c_k(k0, k1, k2, x / k0))

    sgn = 1.0 if k1 < k2 else -1.0
    grid = np.linspace(x_res - 0.5, x_res + 0.5, 201)
    x_pk = refine_extremum(lambda x: sgn * tau_r_ratio(x), grid, maximize=True)
    return ResonanceSummary(
        m=m,
        k0a_at_peak=k0a_T,
        tau_t_max=tau_t_at_resonance(wn) * tc,
        tau_1_max=tau_1_at_resonance(wn) * tc,
        T_max=transmission_max(wn),
        half_width_E=half_width(res_cfg, E),
        tau_c=tc,
        a=a_m,
        k0a_tau_r_peak=x_pk,
        tau_r_peak=tau_r_ratio(x_pk) * tau_c_k(k0, x_pk / k0, cfg.mu, cfg.hbar),
    )
