"""Command line front end: spectrum, barrier, fit and well runs to CSV.

Exit codes: 0 success, 2 config/input error, 3 numerical failure,
4 phase-time identity violated, 5 fit did not converge.
"""

import argparse
import configparser
import csv
import hashlib
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .amplitudes import (
    BreitWigner,
    BreitWignerParams,
    EffectiveRange,
    Tabulated,
    TabulatedTMatrix,
    ZeroRange,
)
from .barrier1d import IDENTITY_TOL, BarrierSpec, scan
from .delays import delay_point, spectrum
from .errors import NumericalError
from .analysis import fit_lorentzian
from .kinematics import ChannelConfig, TIME_UNITS, energy_grid
from .radial import HardSphere, RadialModel, SquareWell, phase_shift_spectrum, square_well_phase_shift

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_IDENTITY = 4
EXIT_NO_FIT = 5


class ConfigError(ValueError):
    pass


def fmt(x):
    """Locale-free 17 significant digit formatting."""
    return format(float(x), ".17g")


def write_csv(path, header, rows, meta=()):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, value in meta:
            fh.write(f"# {key} = {value}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


# -- spectrum -----------------------------------------------------------------

MODEL_KEYS = {
    "zero_range": {"a_re", "a_im"},
    "effective_range": {"a_re", "a_im", "r_e"},
    "breit_wigner": {"e_r", "gamma"},
    "tabulated": {"table"},
}


def _get_float(section, key, default=None):
    if key not in section:
        if default is None:
            raise ConfigError(f"missing [{section.name}] {key}")
        return default
    try:
        return float(section[key])
    except ValueError:
        raise ConfigError(f"[{section.name}] {key} is not a number: {section[key]!r}") from None


def load_config(path):
    """Parse an INI run configuration into (channel, model, grid, output dict)."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    try:
        parser.read_string(path.read_text(encoding="utf-8"))
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    for name in ("channel", "model", "grid"):
        if name not in parser:
            raise ConfigError(f"missing [{name}] section")

    chs = parser["channel"]
    units = chs.get("units", "natural").strip()
    try:
        l_value = _get_float(chs, "l", 0.0)
        if l_value != int(l_value):
            raise ConfigError(f"[channel] l must be an integer, got {l_value}")
        ch = ChannelConfig(
            reduced_mass=_get_float(chs, "mu"),
            threshold_energy=_get_float(chs, "threshold", 0.0),
            partial_wave=int(l_value),
            unit_system=units,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    ms = parser["model"]
    kind = ms.get("type", "").strip()
    if kind not in MODEL_KEYS:
        raise ConfigError(f"[model] type must be one of {', '.join(sorted(MODEL_KEYS))}")
    extra = set(ms.keys()) - MODEL_KEYS[kind] - {"type"}
    if extra:
        raise ConfigError(f"[model] keys not used by {kind}: {', '.join(sorted(extra))}")
    try:
        if kind in ("zero_range", "effective_range"):
            a = ch.length_in(complex(_get_float(ms, "a_re"), _get_float(ms, "a_im", 0.0)))
            if a == 0:
                raise ConfigError("trivial interaction: scattering length is zero")
            if kind == "zero_range":
                model = ZeroRange(a)
            else:
                model = EffectiveRange(a, ch.length_in(_get_float(ms, "r_e")))
        elif kind == "breit_wigner":
            model = BreitWigner(BreitWignerParams(_get_float(ms, "e_r"), _get_float(ms, "gamma")))
        else:
            table_path = Path(ms["table"].strip())
            if not table_path.is_absolute():
                table_path = path.parent / table_path
            if not table_path.is_file():
                raise ConfigError(f"table file not found: {table_path}")
            model = Tabulated(TabulatedTMatrix.from_csv(table_path, ch))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    gs = parser["grid"]
    n = _get_float(gs, "n")
    if n != int(n):
        raise ConfigError("[grid] n must be an integer")
    try:
        grid = energy_grid(
            _get_float(gs, "emin"), _get_float(gs, "emax"), int(n), gs.get("spacing", "linear").strip()
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    out = parser["output"] if "output" in parser else {}
    time_unit = out.get("time_unit", "hbar/energy").strip()
    if time_unit not in TIME_UNITS[ch.unit_system]:
        raise ConfigError(f"time unit {time_unit!r} not available for {ch.unit_system} units")
    output = {"path": out.get("path", "").strip() or None, "time_unit": time_unit}
    return ch, model, grid, output


def run_spectrum(args):
    try:
        ch, model, grid, output = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out_path = args.out or output["path"]
    if out_path is None:
        print("error: no output path (use --out or [output] path)", file=sys.stderr)
        return EXIT_INPUT
    try:
        spec = spectrum(model, grid, ch)
    except NumericalError as exc:
        print(f"numerical failure at E = {exc.energy}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    unit = output["time_unit"]
    rows = [
        (p.E, ch.time_out(p.tau_phase, unit), ch.time_out(p.tau_si, unit),
         ch.time_out(p.tau_dwell, unit), p.A_factor, p.dos_diff)
        for p in spec.points
    ]
    digest = hashlib.sha256(Path(args.config).read_bytes()).hexdigest()
    poles = ";".join(fmt(e) for e in spec.flagged_poles) or "none"
    meta = [
        ("dwelldelay", f"spectrum {__version__}"),
        ("config_sha256", digest),
        ("unit_system", ch.unit_system),
        ("time_unit", unit),
        ("threshold_energy", fmt(ch.threshold_energy)),
        ("partial_wave", ch.partial_wave),
        ("flagged_poles", poles),
    ]
    write_csv(out_path, ["E", "tau_phase", "tau_si", "tau_dwell", "A", "dos_diff"], rows, meta)
    return EXIT_OK


# -- barrier ------------------------------------------------------------------


def _complex_arg(text):
    parts = text.split(",")
    if len(parts) not in (1, 2):
        raise argparse.ArgumentTypeError(f"expected re or re,im: {text!r}")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    return complex(values[0], values[1] if len(values) == 2 else 0.0)


def _pair_arg(text):
    parts = text.split(",")
    try:
        lo, hi = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo,hi: {text!r}") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"window must satisfy lo < hi: {text!r}")
    return lo, hi


def run_barrier(args):
    try:
        barrier = BarrierSpec(args.v0, args.length, args.mass)
        grid = energy_grid(args.emin, args.emax, args.n)
        solutions = scan(barrier, grid)
    except NumericalError as exc:
        print(f"numerical failure at E = {exc.energy}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rows = [
        (s.E, s.R_amp.real, s.R_amp.imag, s.T_amp.real, s.T_amp.imag, s.tau_dwell, s.tau_phase,
         s.tau_si, s.identity_residual, s.unitarity_deficit)
        for s in solutions
    ]
    worst = max(abs(s.identity_residual) / s.identity_scale for s in solutions)
    meta = [
        ("dwelldelay", f"barrier {__version__}"),
        ("V0", f"{fmt(barrier.V0.real)},{fmt(barrier.V0.imag)}"),
        ("L", fmt(barrier.L)),
        ("mass", fmt(barrier.mass)),
        ("max_relative_identity_residual", fmt(worst)),
    ]
    header = ["E", "re_R", "im_R", "re_T", "im_T", "tau_dwell", "tau_phase", "tau_si",
              "identity_residual", "unitarity_deficit"]
    write_csv(args.out, header, rows, meta)
    print(f"max_relative_identity_residual = {fmt(worst)}")
    if worst > IDENTITY_TOL:
        print(f"identity violated: relative residual {worst:.3g} > {IDENTITY_TOL:g}", file=sys.stderr)
        return EXIT_IDENTITY
    return EXIT_OK


# -- fit ----------------------------------------------------------------------


def read_columns(path):
    """Read a CSV with '#' metadata lines into {column: float array}."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [line for line in fh if line.strip() and not line.lstrip().startswith("#")]
    reader = csv.reader(rows)
    header = [h.strip() for h in next(reader, [])]
    if not header or len(set(header)) != len(header):
        raise ValueError(f"{path}: missing or duplicated header")
    data = [[] for _ in header]
    for lineno, row in enumerate(reader, start=2):
        if len(row) != len(header):
            raise ValueError(f"{path}: data row {lineno} has {len(row)} fields, expected {len(header)}")
        for column, value in zip(data, row):
            column.append(float(value))
    return {name: np.array(values) for name, values in zip(header, data)}


def run_fit(args):
    try:
        columns = read_columns(args.input)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if "E" not in columns or args.column not in columns:
        print(f"error: need columns E and {args.column}", file=sys.stderr)
        return EXIT_INPUT
    E, y = columns["E"], columns[args.column]
    lo, hi = args.window
    if len(E) == 0 or lo < E.min() or hi > E.max():
        print(f"error: window {lo},{hi} outside data range", file=sys.stderr)
        return EXIT_INPUT
    try:
        fit = fit_lorentzian(E, y, (lo, hi))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for key in ("E_r", "Gamma", "amplitude", "background", "residual_norm"):
        print(f"{key} = {fmt(getattr(fit, key))}")
    print(f"converged = {str(fit.converged).lower()}")
    return EXIT_OK if fit.converged else EXIT_NO_FIT


# -- well ---------------------------------------------------------------------


def run_well(args):
    ch = ChannelConfig(args.mu, partial_wave=args.l)
    try:
        if args.kind == "hard":
            pot = HardSphere(args.radius)
        else:
            if args.depth is None:
                raise ValueError("--depth is required for a square well")
            pot = SquareWell(args.depth, args.radius)
        grid = energy_grid(args.emin, args.emax, args.n)
        if grid[0] <= 0:
            raise ValueError("the radial solver needs emin > 0")
        energies, delta = phase_shift_spectrum(pot, args.l, grid, ch)
        model = RadialModel(pot, args.l)
        delays = [delay_point(model.amplitude(float(E), ch), ch) for E in energies]
    except NumericalError as exc:
        print(f"numerical failure at E = {exc.energy}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    header = ["E", "delta_re", "delta_im", "tau_phase", "tau_si", "tau_dwell"]
    rows = [[E, d.real, d.imag, p.tau_phase, p.tau_si, p.tau_dwell] for E, d, p in zip(energies, delta, delays)]
    meta = [("dwelldelay", f"well {__version__}"), ("kind", args.kind), ("l", args.l), ("mu", fmt(args.mu))]
    if args.kind == "square":
        header.append("delta_analytic")
        deviation = 0.0
        for row in rows:
            exact = square_well_phase_shift(row[0], args.l, pot.depth, pot.radius, ch)
            # same branch as the unwrapped numerical curve
            exact_re = exact.real + np.pi * np.round((row[1] - exact.real) / np.pi)
            row.append(exact_re)
            deviation = max(deviation, abs(row[1] - exact_re))
        meta.append(("max_abs_delta_deviation", fmt(deviation)))
        print(f"max_abs_delta_deviation = {fmt(deviation)}")
    write_csv(args.out, header, rows, meta)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="dwelldelay", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="delay spectrum of a channel model from an INI config")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=run_spectrum)

    p = sub.add_parser("barrier", help="rectangular-barrier scan with phase-time identity check")
    p.add_argument("--v0", type=_complex_arg, required=True, help="barrier height re[,im]")
    p.add_argument("--length", type=float, required=True)
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--emin", type=float, required=True)
    p.add_argument("--emax", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=run_barrier)

    p = sub.add_parser("fit", help="Lorentzian fit of one column of a spectrum CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--column", required=True)
    p.add_argument("--window", type=_pair_arg, required=True, help="lo,hi")
    p.set_defaults(func=run_fit)

    p = sub.add_parser("well", help="Numerov phase shifts and delays for a square well or hard sphere")
    p.add_argument("--depth", type=_complex_arg, help="well depth re[,im]; V = -depth inside")
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--kind", choices=("square", "hard"), default="square")
    p.add_argument("--emin", type=float, required=True)
    p.add_argument("--emax", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=run_well)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
