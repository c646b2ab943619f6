"""
Command-line front end.

    barrier-delay scan --figure 1
    barrier-delay scan --v0e 0.95 --v1e 0.3 --v2e 0 --out tau_r
    barrier-delay resonances --figure 1 --max-m 3
    barrier-delay packet --figure 1 --m 1 --margin 10

Exit codes: 0 success, 1 malformed input (including an invalid barrier or an
impossible packet), 2 domain errors (every scan row flagged, or no resonance
structure for k1 == k2).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from . import presets
from .delays import (
    min_packet_width,
    packet_validity_bound,
    resonance_summary,
    tau_r,
    tau_t_analytic,
)
from .errors import (
    BarrierDelayError,
    ConstructionError,
    DomainError,
    NoPeakError,
    UndefinedError,
)
from .scan import OUTPUTS, ScanRequest, format_float, run_scan, write_csv
from .scattering import BarrierConfig, wave_numbers
from .wavepacket import PacketSpec, synthesize, write_profiles_csv

RATIO_KEYS = ("v0e", "v1e", "v2e")
RAW_KEYS = ("v0", "v1", "v2")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # malformed input exits with 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _barrier_args(p):
    g = p.add_argument_group("barrier")
    g.add_argument("--config", type=Path, help="JSON file with default values for any flag")
    g.add_argument("--figure", type=int, choices=(1, 2, 3), help="figure preset")
    g.add_argument("--v0e", type=float, help="V0/E (ratio input, E = 1)")
    g.add_argument("--v1e", type=float, help="V1/E")
    g.add_argument("--v2e", type=float, help="V2/E")
    g.add_argument("--v0", type=float, help="V0 (raw units)")
    g.add_argument("--v1", type=float, help="V1 (raw units)")
    g.add_argument("--v2", type=float, help="V2 (raw units)")
    g.add_argument("--energy", type=float, help="incident energy E (raw units)")
    g.add_argument("--thickness", type=float, help="barrier thickness a (raw units)")
    g.add_argument("--mu", type=float, default=1.0)
    g.add_argument("--hbar", type=float, default=1.0)
    g.add_argument("--outdir", type=Path, default=Path("."))
    g.add_argument("--format", choices=("csv", "svg", "both"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="barrier-delay",
                     description="Group delays for over-barrier scattering off an asymmetric barrier.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sc = sub.add_parser("scan", help="sweep k0*a and tabulate delays")
    _barrier_args(sc)
    sc.add_argument("--mode", choices=("thickness", "energy"))
    sc.add_argument("--k0a-min", type=float)
    sc.add_argument("--k0a-max", type=float)
    sc.add_argument("--points", type=int, default=2000)
    sc.add_argument("--out", action="append", choices=OUTPUTS,
                    help="output column(s); repeat for several (default: all)")

    rs = sub.add_parser("resonances", help="tabulate resonance peaks m = 1..M")
    _barrier_args(rs)
    rs.add_argument("--max-m", type=int, default=3)

    pk = sub.add_parser("packet", help="measure delays with a Gaussian wave packet")
    _barrier_args(pk)
    where = pk.add_mutually_exclusive_group()
    where.add_argument("--k0a", type=float, help="barrier thickness as k0*a (ratio input)")
    where.add_argument("--m", type=int, help="put the barrier on resonance k0*a = m*pi")
    width = pk.add_mutually_exclusive_group()
    width.add_argument("--margin", type=float, help="w as a multiple of the minimum width (default 10)")
    width.add_argument("--w", type=float, help="packet time spread")
    pk.add_argument("--n-energy", type=int, default=1024)
    pk.add_argument("--n-time", type=int, default=4096)
    pk.add_argument("--energy-span", type=float, default=5.0)
    pk.add_argument("--check-bound", action="store_true",
                    help="only print the thickness bound and exit")
    parser.commands = sub.choices
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is not None:
        try:
            data = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config {args.config}: {exc}")
        if not isinstance(data, dict):
            parser.error("config file must hold a JSON object")
        defaults = {k.replace("-", "_"): v for k, v in data.items()}
        unknown = sorted(k for k in defaults if not hasattr(args, k) or k in ("command", "config"))
        if unknown:
            parser.error(f"unknown config keys: {', '.join(unknown)}")
        if "outdir" in defaults:
            defaults["outdir"] = Path(defaults["outdir"])
        # command-line flags win over the file
        parser.commands[args.command].set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


# -- configuration resolution -------------------------------------------------

def _has(args, keys):
    return [k for k in keys if getattr(args, k, None) is not None]


def _ratios(args):
    """Ratios from --figure or --v*e flags, or None for raw input."""
    ratio_set, raw_set = _has(args, RATIO_KEYS), _has(args, RAW_KEYS)
    if args.figure is not None and (ratio_set or raw_set):
        raise UsageError("--figure cannot be combined with explicit potentials")
    if ratio_set and raw_set:
        raise UsageError("give potentials either as ratios (--v0e ...) or raw (--v0 ...), not both")
    if ratio_set:
        if len(ratio_set) != 3:
            raise UsageError("ratio input needs all of --v0e --v1e --v2e")
        return tuple(getattr(args, k) for k in RATIO_KEYS)
    if raw_set:
        if len(raw_set) != 3:
            raise UsageError("raw input needs all of --v0 --v1 --v2")
        return None
    if args.figure is None:
        raise UsageError("no barrier given; use --figure, --v0e/--v1e/--v2e or --v0/--v1/--v2")
    return None


def _raw_config(args, a):
    return BarrierConfig(args.v0, args.v1, args.v2, a, args.mu, args.hbar)


def _scan_requests(args) -> dict[str, ScanRequest]:
    outputs = tuple(args.out) if args.out else None
    ratios = _ratios(args)
    if args.figure is not None:
        reqs = presets.figure_requests(args.figure, n_points=args.points, outputs=outputs)
        if args.k0a_min is not None or args.k0a_max is not None:
            reqs = {k: _with_range(r, args) for k, r in reqs.items()}
        return reqs
    kw = {} if outputs is None else {"outputs": outputs}
    if ratios is not None:
        if args.mode == "energy":
            raise UsageError("energy scans need raw units (--v0 --v1 --v2 --thickness)")
        lo = 0.5 if args.k0a_min is None else args.k0a_min
        hi = 10.0 if args.k0a_max is None else args.k0a_max
        req = presets.thickness_request(ratios, (lo, hi), args.points, outputs, args.mu, args.hbar)
        return {"main": req}
    mode = args.mode or ("energy" if args.thickness is not None and args.energy is None else "thickness")
    if args.k0a_min is None or args.k0a_max is None:
        raise UsageError("raw-unit scans need --k0a-min and --k0a-max")
    if mode == "thickness":
        if args.energy is None:
            raise UsageError("thickness scans need --energy")
        cfg = _raw_config(args, 0.0)
        return {"main": ScanRequest("thickness", cfg, (args.k0a_min, args.k0a_max), args.points,
                                    energy=args.energy, **kw)}
    if args.thickness is None:
        raise UsageError("energy scans need --thickness")
    cfg = _raw_config(args, args.thickness)
    return {"main": ScanRequest("energy", cfg, (args.k0a_min, args.k0a_max), args.points, **kw)}


def _with_range(req, args):
    lo = req.k0a_range[0] if args.k0a_min is None else args.k0a_min
    hi = req.k0a_range[1] if args.k0a_max is None else args.k0a_max
    return ScanRequest(req.mode, req.config, (lo, hi), req.n_points, req.outputs, req.energy)


def _fixed_energy_config(args, k0a=None):
    """(config, E) for resonance and packet commands."""
    ratios = _ratios(args)
    if args.figure == 3:
        raise UsageError("figure 3 is an energy sweep; pick figure 1 or 2, or give potentials")
    if args.figure is not None:
        ratios = presets.FIGURES[args.figure].ratios
    if ratios is not None:
        return BarrierConfig.from_ratios(*ratios, k0a=0.0 if k0a is None else k0a,
                                         mu=args.mu, hbar=args.hbar), 1.0
    if args.energy is None:
        raise UsageError("raw input needs --energy")
    cfg = _raw_config(args, 0.0)
    if k0a is not None:
        cfg = cfg.with_thickness(k0a / wave_numbers(cfg, args.energy).k0)
    elif args.thickness is not None:
        cfg = cfg.with_thickness(args.thickness)
    return cfg, args.energy


# -- commands -----------------------------------------------------------------

def _ensure_outdir(path: Path):
    path.mkdir(parents=True, exist_ok=True)


def cmd_scan(args) -> int:
    reqs = _scan_requests(args)
    _ensure_outdir(args.outdir)
    all_bad = True
    for name, req in reqs.items():
        res = run_scan(req)
        stem = "scan" if name == "main" else f"scan_{name}"
        if args.format in ("csv", "both"):
            write_csv(res, args.outdir / f"{stem}.csv")
        if args.format in ("svg", "both"):
            from .plotting import plot_series

            plotted = _plot_quantities(args, req)
            for q in plotted:
                suffix = "" if len(plotted) == 1 else f"_{q}"
                plot_series(res, q, args.outdir / f"{stem}{suffix}.svg")
        n_flag = sum(1 for f in res.flags if f)
        print(f"{stem}: {len(res)} rows, {n_flag} flagged", file=sys.stderr)
        all_bad = all_bad and res.all_flagged()
    if all_bad:
        print("error: every scan row is outside the over-barrier domain", file=sys.stderr)
        return 2
    return 0


def _plot_quantities(args, req):
    if args.out:
        qs = []
        for o in args.out:
            qs.extend(["phi1", "phi2"] if o == "phases" else [o])
        return qs
    if args.figure is not None:
        return [presets.FIGURES[args.figure].output]
    return ["tau_t"]


def cmd_resonances(args) -> int:
    cfg, E = _fixed_energy_config(args)
    rows = []
    try:
        for m in range(1, args.max_m + 1):
            rows.append(resonance_summary(cfg, E, m))
    except UndefinedError as exc:
        print(f"error: {exc}; the reflection-delay resonance needs V1 != V2", file=sys.stderr)
        return 2
    header = ["m", "k0a", "tau_c", "tau_t_max/tau_c", "tau_1_max/tau_c", "T_max",
              "half_width_E", "k0a_tau_r_peak", "tau_r_peak/tau_c"]
    table = [[str(s.m)] + [format_float(v) for v in (
        s.k0a_at_peak, s.tau_c, s.tau_t_max / s.tau_c, s.tau_1_max / s.tau_c, s.T_max,
        s.half_width_E, s.k0a_tau_r_peak,
        s.tau_r_peak / (s.tau_c * s.k0a_tau_r_peak / s.k0a_at_peak))] for s in rows]
    _ensure_outdir(args.outdir)
    with open(args.outdir / "resonances.csv", "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(header)
        wr.writerows(table)
    widths = [max(len(h), *(len(r[i]) for r in table)) for i, h in enumerate(header)]
    print("  ".join(h.rjust(w) for h, w in zip(header, widths)))
    for r in table:
        print("  ".join(c.rjust(w) for c, w in zip(r, widths)))
    return 0


def cmd_packet(args) -> int:
    k0a = args.k0a if args.m is None else args.m * math.pi
    cfg, E0 = _fixed_energy_config(args, k0a)
    if cfg.a == 0 and args.w is None:
        raise UsageError("a zero-thickness barrier has no width bound; pass --w")
    if args.w is not None:
        w = args.w
        margin = packet_validity_bound(cfg, E0, w) / cfg.a if cfg.a > 0 else math.inf
    else:
        margin = 10.0 if args.margin is None else args.margin
        w = margin * min_packet_width(cfg, E0)

    if args.check_bound:
        print(f"k0a = {format_float(cfg.k0a(E0))}, a = {format_float(cfg.a)}")
        print(f"minimum packet width w_min = {format_float(min_packet_width(cfg, E0))}")
        print(f"w = {format_float(w)}: maximum admissible a = "
              f"{format_float(packet_validity_bound(cfg, E0, w))}")
        return 0

    spec = PacketSpec(E0=E0, w=w, hbar=cfg.hbar, n_energy=args.n_energy,
                      n_time=args.n_time, energy_span=args.energy_span)
    if margin < 1.0:
        print(f"warning: thickness bound violated (margin {margin:.3g} < 1); "
              "measured delays are unreliable", file=sys.stderr)
    meas = synthesize(cfg, spec)
    tc = cfg.a * cfg.mu / (cfg.hbar * wave_numbers(cfg, E0).k0)
    tr = tau_r(cfg, E0)
    reliable = meas.reliable and margin >= 1.0
    summary = {
        "k0a": cfg.k0a(E0),
        "a": cfg.a,
        "E0": E0,
        "w": w,
        "deltaE": spec.deltaE,
        "margin": margin,
        "tau_c": tc,
        "tau_t_analytic": tau_t_analytic(cfg, E0),
        "tau_t_measured": meas.tau_t_measured,
        "tau_r_analytic": tr,
        "tau_r_measured": meas.tau_r_measured,
        "time_step": meas.dt,
        "distortion_transmitted": meas.distortion_transmitted,
        "distortion_reflected": meas.distortion_reflected,
        "reliable": reliable,
    }
    _ensure_outdir(args.outdir)
    if args.format in ("csv", "both"):
        write_profiles_csv(args.outdir / "packet.csv", meas.profiles)
    if args.format in ("svg", "both"):
        from .plotting import plot_packet

        plot_packet(meas.profiles, args.outdir / "packet.svg")
    (args.outdir / "packet_summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    for k, v in summary.items():
        text = v if isinstance(v, bool) or v is None else format_float(v)
        print(f"{k:>24}: {text}")
    if not reliable:
        print("UNRELIABLE: packet distortion above threshold or bound violated", file=sys.stderr)
    return 0


COMMANDS = {"scan": cmd_scan, "resonances": cmd_resonances, "packet": cmd_packet}


def main(argv=None) -> int:
    args = parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConstructionError, NoPeakError, DomainError) as exc:
        # an invalid barrier or energy is a malformed request
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except UndefinedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BarrierDelayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
