"""
Parameter sweeps in the dimensionless variable ``k0*a``.

A thickness scan holds E fixed and sets ``a = k0a/k0``; an energy scan holds
``a`` fixed and sets ``E = V0 + (hbar k0a / a)^2 / (2 mu)``.  Every row is a
closed-form evaluation, delays are reported in units of the row's own
``tau_c``, and rows that cannot be evaluated are flagged instead of aborting
the scan.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, Literal, Optional

import numpy as np

from .delays import refine_extremum, tau_1_over_tau_c_k, tau_t_over_tau_c_k
from .errors import DomainError, WrapAmbiguityError
from .scattering import (
    BarrierConfig,
    amplitudes_k,
    g1_complex_k,
    g2_complex_k,
    principal_phase,
    wave_numbers,
    wave_numbers_array,
)

OUTPUTS = ("tau_t", "tau_r", "tau_1", "T", "Tc", "phases")
COLUMNS = ("k0a", "E", "a", "tau_t", "tau_1", "tau_r", "T", "Tc", "phi1", "phi2", "flags")

# reason codes
BELOW_BARRIER = "below_barrier"
G1_ZERO = "g1_zero"
PHI1_WRAP = "phi1_wrap"
PHI2_WRAP = "phi2_wrap"

Mode = Literal["thickness", "energy"]


@dataclass(frozen=True)
class ScanRequest:
    """One sweep over ``k0a in [lo, hi]``.

    For ``mode="thickness"`` the energy is ``energy`` and ``config.a`` is
    ignored; for ``mode="energy"`` the thickness is ``config.a``.
    """

    mode: Mode
    config: BarrierConfig
    k0a_range: tuple[float, float]
    n_points: int = 2000
    outputs: tuple[str, ...] = OUTPUTS
    energy: float = 1.0

    def __post_init__(self):
        lo, hi = self.k0a_range
        if not lo < hi:
            raise ValueError(f"k0a range must satisfy lo < hi, got {self.k0a_range}")
        if lo < 0:
            raise ValueError("k0a must be non-negative")
        if self.n_points < 2:
            raise ValueError("a scan needs at least two points")
        bad = set(self.outputs) - set(OUTPUTS)
        if bad:
            raise ValueError(f"unknown outputs {sorted(bad)}; choose from {OUTPUTS}")
        if self.mode == "thickness":
            wave_numbers(self.config, self.energy)
        elif self.mode == "energy":
            if not self.config.a > 0:
                raise DomainError("energy scans need a positive thickness")
        else:
            raise ValueError(f"unknown scan mode {self.mode!r}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.k0a_range[0], self.k0a_range[1], self.n_points)


@dataclass
class ScanResult:
    """Column arrays of a scan; delays are in units of each row's ``tau_c``.

    ``flags`` holds a tuple of reason codes per row (empty when clean).
    """

    mode: Mode
    k0a: np.ndarray
    E: np.ndarray
    a: np.ndarray
    tau_t: np.ndarray
    tau_1: np.ndarray
    tau_r: np.ndarray
    T: np.ndarray
    Tc: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    flags: list = field(default_factory=list)
    outputs: tuple[str, ...] = OUTPUTS

    def __len__(self):
        return len(self.k0a)

    def columns(self) -> list[str]:
        keep = set(self.outputs)
        if "phases" in keep:
            keep |= {"phi1", "phi2"}
        return [c for c in COLUMNS if c in ("k0a", "E", "a", "flags") or c in keep]

    def all_flagged(self) -> bool:
        return all(self.flags)

    def flagged(self, code: str) -> np.ndarray:
        return np.array([code in f for f in self.flags], dtype=bool)


# -- phase unwrapping --------------------------------------------------------

def _unwrap(samples, atol):
    """Nearest-branch continuation; NaN samples are skipped and stay NaN.

    Returns the continued phases and a mask of rows reached through an
    ambiguous (~pi) jump.
    """
    x = np.asarray(samples, dtype=float)
    out = np.full_like(x, np.nan)
    ambiguous = np.zeros(x.shape, dtype=bool)
    prev = None
    for i, p in enumerate(x):
        if math.isnan(p):
            continue
        if prev is None:
            out[i] = p
        else:
            d = (p - prev + math.pi) % (2.0 * math.pi) - math.pi
            if abs(d) >= math.pi - atol:
                ambiguous[i] = True
            out[i] = prev + d
        prev = out[i]
    return out, ambiguous


def unwrap_phase(samples: Iterable[float], atol: float = 1e-3) -> np.ndarray:
    """Restore a continuous phase from principal values.

    Each output differs from its input by a multiple of 2*pi and
    consecutive outputs differ by less than pi.

    Raises
    ------
    WrapAmbiguityError
        If two consecutive samples differ by pi to within ``atol``; the grid
        must be refined.
    """
    out, ambiguous = _unwrap(list(samples), atol)
    if ambiguous.any():
        i = int(np.argmax(ambiguous))
        raise WrapAmbiguityError(f"phase jump of ~pi between samples {i - 1} and {i}")
    return out


# -- evaluation -------------------------------------------------------------

def _rows(req: ScanRequest, x: np.ndarray):
    cfg = req.config
    if req.mode == "thickness":
        wn = wave_numbers(cfg, req.energy)
        E = np.full_like(x, req.energy)
        a = x / wn.k0
        k0 = np.full_like(x, wn.k0)
        k1 = np.full_like(x, wn.k1)
        k2 = np.full_like(x, wn.k2)
    else:
        a = np.full_like(x, cfg.a)
        E = cfg.V0 + (cfg.hbar * x / cfg.a) ** 2 / (2.0 * cfg.mu)
        k0, k1, k2 = wave_numbers_array(cfg, E)
    return E, a, k0, k1, k2


def _evaluate(req: ScanRequest, x: np.ndarray) -> dict:
    E, a, k0, k1, k2 = _rows(req, x)
    ok = np.isfinite(k0)
    with np.errstate(all="ignore"):
        tt = np.where(ok, tau_t_over_tau_c_k(k0, k1, k2, a), np.nan)
        t1 = np.where(ok, tau_1_over_tau_c_k(k0, k1, k2, a), np.nan)
        r, t = amplitudes_k(k0, k1, k2, a)
        T = np.abs(t) ** 2
        G1 = g1_complex_k(k0, k1, k2, a)
        G2 = g2_complex_k(k0, k1, k2, a)
    g1_zero = ok & np.isnan(t1)
    phi1 = np.where(ok & ~g1_zero, principal_phase(G1), np.nan)
    phi2 = np.where(ok, principal_phase(G2), np.nan)
    return dict(E=E, a=a, tau_t=tt, tau_1=t1, tau_r=tt + t1, T=np.where(ok, T, np.nan),
                Tc=np.where(ok, k2 / k1 * T, np.nan), phi1=phi1, phi2=phi2,
                below=~ok, g1_zero=g1_zero)


def run_scan(req: ScanRequest) -> ScanResult:
    """Evaluate every grid row of ``req``; see :class:`ScanResult`."""
    x = req.grid()
    v = _evaluate(req, x)
    phi1, amb1 = _unwrap(v["phi1"], 1e-3)
    phi2, amb2 = _unwrap(v["phi2"], 1e-3)
    flags = []
    for i in range(len(x)):
        f = []
        if v["below"][i]:
            f.append(BELOW_BARRIER)
        if v["g1_zero"][i]:
            f.append(G1_ZERO)
        if amb1[i]:
            f.append(PHI1_WRAP)
        if amb2[i]:
            f.append(PHI2_WRAP)
        flags.append(tuple(f))
    return ScanResult(
        mode=req.mode, k0a=x, E=v["E"], a=v["a"], tau_t=v["tau_t"], tau_1=v["tau_1"],
        tau_r=v["tau_r"], T=v["T"], Tc=v["Tc"], phi1=phi1, phi2=phi2, flags=flags,
        outputs=req.outputs,
    )


def scan_thickness(req: ScanRequest) -> ScanResult:
    if req.mode != "thickness":
        raise ValueError("scan_thickness needs a thickness-mode request")
    return run_scan(req)


def scan_energy(req: ScanRequest) -> ScanResult:
    if req.mode != "energy":
        raise ValueError("scan_energy needs an energy-mode request")
    return run_scan(req)


def point_value(req: ScanRequest, quantity: str, k0a: float) -> float:
    """One column of a single row, evaluated off-grid."""
    v = _evaluate(req, np.array([float(k0a)]))
    return float(v[quantity][0])


def refine_peaks(req: ScanRequest, result: ScanResult, quantity: str,
                 maximize: bool = True, xtol: float = 1e-10) -> list[tuple[float, float]]:
    """Refine every interior local extremum of a scanned column.

    Extrema are picked on the grid, then polished by golden-section search
    on the closed-form row evaluator.  Returns ``(k0a, value)`` pairs.
    """
    y = np.asarray(getattr(result, quantity), dtype=float)
    s = 1.0 if maximize else -1.0
    x = result.k0a
    peaks = []
    for i in range(1, len(y) - 1):
        yi = s * y[i]
        if not np.isfinite(yi) or not (np.isfinite(y[i - 1]) and np.isfinite(y[i + 1])):
            continue
        if yi > s * y[i - 1] and yi >= s * y[i + 1]:
            xp = refine_extremum(lambda q: point_value(req, quantity, q),
                                 x[i - 1:i + 2], maximize=maximize, xtol=xtol)
            peaks.append((xp, point_value(req, quantity, xp)))
    return peaks


# -- output -----------------------------------------------------------------

def format_float(v) -> str:
    """Float text cut to 12 significant digits (``nan`` for missing)."""
    if v is None or math.isnan(v):
        return "nan"
    return f"{float(v):.12g}"


def write_csv(result: ScanResult, path) -> None:
    cols = result.columns()
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(cols)
        for i in range(len(result)):
            row = []
            for c in cols:
                if c == "flags":
                    row.append("|".join(result.flags[i]))
                else:
                    row.append(format_float(getattr(result, c)[i]))
            wr.writerow(row)


def read_csv(path) -> dict[str, list]:
    """Read a scan CSV back into columns (floats, flags as tuples)."""
    with open(path, newline="") as fh:
        rd = csv.DictReader(fh)
        data: dict[str, list] = {k: [] for k in rd.fieldnames or []}
        for row in rd:
            for k, v in row.items():
                data[k].append(tuple(v.split("|")) if k == "flags" and v else
                               () if k == "flags" else float(v))
    return data
