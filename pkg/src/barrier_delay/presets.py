"""Named parameter sets taken from the three figure captions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .scan import ScanRequest
from .scattering import BarrierConfig

# k0a window for the thickness figures
THICKNESS_K0A = (0.5, 10.0)


@dataclass(frozen=True)
class FigurePreset:
    figure: int
    mode: str
    output: str
    # thickness figures: potentials as fractions of E
    ratios: Optional[tuple[float, float, float]] = None
    swapped_ratios: Optional[tuple[float, float, float]] = None
    # energy figure: potentials as fractions of V0, energy window in V0
    v_over_v0: Optional[tuple[float, float]] = None
    energy_window: Optional[tuple[float, float]] = None
    thickness_coeff: Optional[float] = None  # a = coeff / sqrt(0.3 mu V0)


FIGURES = {
    1: FigurePreset(1, "thickness", "tau_t", ratios=(0.95, 0.0, 0.3)),
    2: FigurePreset(2, "thickness", "tau_r", ratios=(0.95, 0.0, 0.3),
                    swapped_ratios=(0.95, 0.3, 0.0)),
    3: FigurePreset(3, "energy", "tau_r", v_over_v0=(0.0, 0.3),
                    energy_window=(1.0, 1.15), thickness_coeff=10.0),
}


def thickness_request(ratios, k0a_range=THICKNESS_K0A, n_points=2000,
                      outputs=None, mu=1.0, hbar=1.0) -> ScanRequest:
    """Thickness scan at E = 1 with potentials given as fractions of E."""
    v0, v1, v2 = ratios
    cfg = BarrierConfig.from_ratios(v0, v1, v2, k0a=1.0, mu=mu, hbar=hbar)
    kw = {} if outputs is None else {"outputs": tuple(outputs)}
    return ScanRequest("thickness", cfg, tuple(k0a_range), n_points, energy=1.0, **kw)


def figure3_config(V0: float = 1.0, mu: float = 1.0, hbar: float = 1.0) -> BarrierConfig:
    p = FIGURES[3]
    a = p.thickness_coeff / math.sqrt(0.3 * mu * V0)
    return BarrierConfig(V0=V0, V1=p.v_over_v0[0] * V0, V2=p.v_over_v0[1] * V0,
                         a=a, mu=mu, hbar=hbar)


def figure3_request(n_points=2000, outputs=None, V0=1.0, mu=1.0, hbar=1.0) -> ScanRequest:
    cfg = figure3_config(V0, mu, hbar)
    lo, hi = FIGURES[3].energy_window
    k0a = [math.sqrt(2.0 * mu * (f - 1.0) * V0) / hbar * cfg.a for f in (lo, hi)]
    kw = {} if outputs is None else {"outputs": tuple(outputs)}
    return ScanRequest("energy", cfg, (k0a[0], k0a[1]), n_points, **kw)


def figure_requests(figure: int, n_points=2000, outputs=None) -> dict[str, ScanRequest]:
    """Scan requests for a figure, keyed by curve name (``main``/``swapped``)."""
    p = FIGURES[figure]
    if p.mode == "energy":
        return {"main": figure3_request(n_points, outputs)}
    reqs = {"main": thickness_request(p.ratios, n_points=n_points, outputs=outputs)}
    if p.swapped_ratios is not None:
        reqs["swapped"] = thickness_request(p.swapped_ratios, n_points=n_points, outputs=outputs)
    return reqs
