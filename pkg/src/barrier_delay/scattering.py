"""
Closed-form over-barrier scattering off an asymmetric rectangular barrier.

Geometry: potential V1 for x < 0, V0 on [0, a], V2 for x > a, with
V0 > V1 and V0 > V2.  Only energies E > V0 are handled, so all three wave
numbers are real.  With the incident amplitude normalized to one,

    1/t = G2 = 1/2 (1 + k2/k1) cos(k0 a) - i/2 (k2/k0 + k0/k1) sin(k0 a)
    r/t = G1 = 1/2 (1 - k2/k1) cos(k0 a) - i/2 (k2/k0 - k0/k1) sin(k0 a)

and writing G1 = g1 exp(-i phi1), G2 = g2 exp(-i phi2) gives
r = (g1/g2) exp(i(phi2 - phi1)) and t = exp(i phi2)/g2.

The ``*_k`` helpers work elementwise on numpy arrays of wave numbers; the
public scalar functions validate their inputs and delegate to them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError

#: reject E - V0 below this fraction of |V0|
ENERGY_GUARD = 1e-12
#: g1 below this fraction of g2 is treated as exactly zero reflection
G1_GUARD = 1e-14


@dataclass(frozen=True)
class BarrierConfig:
    """Barrier heights, thickness and unit scales.

    Parameters
    ----------
    V0 : float
        Barrier height on ``[0, a]``.
    V1, V2 : float
        Potentials to the left and right of the barrier.
    a : float
        Barrier thickness.
    mu : float
        Particle mass.
    hbar : float
        Reduced Planck constant in the chosen unit system.
    """

    V0: float
    V1: float
    V2: float
    a: float
    mu: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.V0 > self.V1 and self.V0 > self.V2):
            raise DomainError(
                f"barrier must exceed both side potentials (V0={self.V0}, "
                f"V1={self.V1}, V2={self.V2})"
            )
        if not self.a >= 0:
            raise DomainError(f"thickness must be non-negative, got a={self.a}")
        if not (self.mu > 0 and self.hbar > 0):
            raise DomainError("mu and hbar must be positive")

    @classmethod
    def from_ratios(cls, v0_over_e, v1_over_e, v2_over_e, k0a, mu=1.0, hbar=1.0):
        """Build a config at E = 1 from the potential ratios and ``k0*a``.

        This is the parametrisation used in the figure captions.  The
        returned config is meant to be evaluated at ``E = 1``.
        """
        if not v0_over_e < 1.0:
            raise DomainError(f"V0/E must be < 1 for over-barrier motion, got {v0_over_e}")
        k0 = math.sqrt(2.0 * mu * (1.0 - v0_over_e)) / hbar
        return cls(V0=v0_over_e, V1=v1_over_e, V2=v2_over_e, a=k0a / k0, mu=mu, hbar=hbar)

    def swapped(self) -> "BarrierConfig":
        """Same barrier seen by a particle incident from the right."""
        return BarrierConfig(self.V0, self.V2, self.V1, self.a, self.mu, self.hbar)

    def with_thickness(self, a: float) -> "BarrierConfig":
        return BarrierConfig(self.V0, self.V1, self.V2, a, self.mu, self.hbar)

    def k0a(self, E: float) -> float:
        return wave_numbers(self, E).k0 * self.a


@dataclass(frozen=True)
class WaveNumbers:
    k0: float
    k1: float
    k2: float
    E: float


@dataclass(frozen=True)
class ScatteringAmplitudes:
    """Reflection/transmission amplitudes at one energy.

    ``phi1`` is ``None`` when ``g1`` vanishes (``r`` is then exactly 0).
    """

    r: complex
    t: complex
    g1: float
    phi1: Optional[float]
    g2: float
    phi2: float
    T: float
    Tc: float


def energy_floor(cfg: BarrierConfig) -> float:
    """Smallest energy accepted by :func:`wave_numbers` (exclusive)."""
    return cfg.V0 + ENERGY_GUARD * abs(cfg.V0)


def wave_numbers(cfg: BarrierConfig, E: float) -> WaveNumbers:
    """Wave numbers ``k_j = sqrt(2 mu (E - V_j)) / hbar`` in the three regions.

    Raises
    ------
    DomainError
        If ``E`` is not above the barrier by more than the energy guard.
    """
    if not math.isfinite(E):
        raise DomainError(f"energy must be finite, got {E}")
    if E <= cfg.V1 or E <= cfg.V2:
        raise DomainError(f"E={E} is not above the side potentials")
    if E - cfg.V0 <= ENERGY_GUARD * abs(cfg.V0) or E <= cfg.V0:
        raise DomainError(f"E={E} is not above the barrier height V0={cfg.V0}")
    s = math.sqrt(2.0 * cfg.mu) / cfg.hbar
    return WaveNumbers(
        k0=s * math.sqrt(E - cfg.V0),
        k1=s * math.sqrt(E - cfg.V1),
        k2=s * math.sqrt(E - cfg.V2),
        E=E,
    )


def wave_numbers_array(cfg: BarrierConfig, E):
    """Vectorised wave numbers; entries at or below the energy floor are NaN."""
    E = np.asarray(E, dtype=float)
    s = math.sqrt(2.0 * cfg.mu) / cfg.hbar
    ok = E > energy_floor(cfg)
    with np.errstate(invalid="ignore"):
        k0 = np.where(ok, s * np.sqrt(np.where(ok, E - cfg.V0, 1.0)), np.nan)
        k1 = np.where(ok, s * np.sqrt(np.where(ok, E - cfg.V1, 1.0)), np.nan)
        k2 = np.where(ok, s * np.sqrt(np.where(ok, E - cfg.V2, 1.0)), np.nan)
    return k0, k1, k2


# -- elementwise kernels ----------------------------------------------------

def g1_complex_k(k0, k1, k2, a):
    x = k0 * a
    return 0.5 * (1.0 - k2 / k1) * np.cos(x) - 0.5j * (k2 / k0 - k0 / k1) * np.sin(x)


def g2_complex_k(k0, k1, k2, a):
    x = k0 * a
    return 0.5 * (1.0 + k2 / k1) * np.cos(x) - 0.5j * (k2 / k0 + k0 / k1) * np.sin(x)


def g1_squared_k(k0, k1, k2, a):
    x = k0 * a
    return (0.25 * (1.0 - k2 / k1) ** 2 * np.cos(x) ** 2
            + 0.25 * (k2 / k0 - k0 / k1) ** 2 * np.sin(x) ** 2)


def g2_squared_k(k0, k1, k2, a):
    x = k0 * a
    return (0.25 * (1.0 + k2 / k1) ** 2 * np.cos(x) ** 2
            + 0.25 * (k2 / k0 + k0 / k1) ** 2 * np.sin(x) ** 2)


def amplitudes_k(k0, k1, k2, a):
    """Return ``(r, t)`` arrays; ``r`` is forced to 0 where g1 is negligible."""
    G1 = g1_complex_k(k0, k1, k2, a)
    G2 = g2_complex_k(k0, k1, k2, a)
    t = 1.0 / G2
    r = np.where(np.abs(G1) < G1_GUARD * np.abs(G2), 0.0, G1 / G2)
    return r, t


def transmission_probability_k(k0, k1, k2, a):
    s2 = np.sin(k0 * a) ** 2
    return 4.0 * k0**2 * k1**2 / (k0**2 * (k1 + k2) ** 2 + (k1**2 - k0**2) * (k2**2 - k0**2) * s2)


def principal_phase(G):
    """Phase ``phi`` with ``G = |G| exp(-i phi)``, in ``(-pi, pi]``."""
    phi = -np.angle(G)
    return np.where(phi <= -np.pi, np.pi, phi)


def tan_phi1_rhs(k0, k1, k2, a):
    """Tangent of phi1 from the closed-form ratio (odd under k1 <-> k2)."""
    return (1.0 / k0 - k0 / (k1 * k2)) / (1.0 / k2 - 1.0 / k1) * np.tan(k0 * a)


def tan_phi2_rhs(k0, k1, k2, a):
    """Tangent of phi2 from the closed-form ratio (even under k1 <-> k2)."""
    return (1.0 / k0 + k0 / (k1 * k2)) / (1.0 / k2 + 1.0 / k1) * np.tan(k0 * a)


# -- scalar API -------------------------------------------------------------

def complex_g1(wn: WaveNumbers, a: float) -> complex:
    """Complex number ``g1 * exp(-i phi1)``."""
    return complex(g1_complex_k(wn.k0, wn.k1, wn.k2, a))


def complex_g2(wn: WaveNumbers, a: float) -> complex:
    """Complex number ``g2 * exp(-i phi2)``; its modulus never vanishes."""
    return complex(g2_complex_k(wn.k0, wn.k1, wn.k2, a))


def amplitudes(cfg: BarrierConfig, E: float) -> ScatteringAmplitudes:
    wn = wave_numbers(cfg, E)
    G1 = complex_g1(wn, cfg.a)
    G2 = complex_g2(wn, cfg.a)
    g1, g2 = abs(G1), abs(G2)
    phi2 = float(principal_phase(G2))
    t = 1.0 / G2
    if g1 < G1_GUARD * g2:
        r, g1, phi1 = 0j, 0.0, None
    else:
        r = G1 / G2
        phi1 = float(principal_phase(G1))
    T = abs(t) ** 2
    return ScatteringAmplitudes(r=r, t=t, g1=g1, phi1=phi1, g2=g2, phi2=phi2,
                                T=T, Tc=wn.k2 / wn.k1 * T)


def transmission_probability(wn: WaveNumbers, a: float) -> float:
    """``T = |t|^2`` from its closed form; can exceed 1 when k1 > k2."""
    return float(transmission_probability_k(wn.k0, wn.k1, wn.k2, a))
