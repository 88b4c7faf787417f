"""Channel kinematics: energy <-> wavenumber, unit handling, energy grids.

Everything internal runs with hbar = 1. In the ``mev_fm`` unit system that
means energies and masses in MeV, lengths in MeV^-1 and times in MeV^-1
(hbar/MeV); conversions to fm, seconds and fm/c happen at the I/O edges.
"""

from dataclasses import dataclass

import numpy as np

HBAR = 1.0
HBARC_MEV_FM = 197.3269804
HBAR_MEV_S = 6.582119569e-22

UNIT_SYSTEMS = ("natural", "mev_fm")
TIME_UNITS = {
    "natural": ("hbar/energy",),
    "mev_fm": ("hbar/energy", "s", "fm/c"),
}


@dataclass(frozen=True)
class ChannelConfig:
    """One two-body scattering channel.

    ``reduced_mass`` is an energy in the ``mev_fm`` system (c = 1) and a
    plain number in ``natural`` units. ``threshold_energy`` is only carried
    for reporting: all energies handled by the library are measured from it.
    """

    reduced_mass: float
    threshold_energy: float = 0.0
    partial_wave: int = 0
    unit_system: str = "natural"

    def __post_init__(self):
        if not self.reduced_mass > 0:
            raise ValueError(f"reduced_mass must be positive, got {self.reduced_mass}")
        if int(self.partial_wave) != self.partial_wave or self.partial_wave < 0:
            raise ValueError(f"partial_wave must be a non-negative integer, got {self.partial_wave}")
        if self.unit_system not in UNIT_SYSTEMS:
            raise ValueError(f"unknown unit system {self.unit_system!r}")

    @property
    def hbar(self):
        return HBAR

    # -- boundary conversions -------------------------------------------------

    def length_in(self, value):
        """Convert a user length (fm for mev_fm) to internal units."""
        if self.unit_system == "mev_fm":
            return value / HBARC_MEV_FM
        return value

    def length_out(self, value):
        if self.unit_system == "mev_fm":
            return value * HBARC_MEV_FM
        return value

    def wavenumber_in(self, value):
        """Convert a user wavenumber (fm^-1 for mev_fm) to internal units."""
        if self.unit_system == "mev_fm":
            return value * HBARC_MEV_FM
        return value

    def tmatrix_in(self, value):
        """t-matrix values (length/energy, i.e. fm/MeV for mev_fm) to internal."""
        return self.length_in(value)

    def time_out(self, value, unit="hbar/energy"):
        if unit not in TIME_UNITS[self.unit_system]:
            raise ValueError(f"time unit {unit!r} not available in {self.unit_system} units")
        if unit == "s":
            return value * HBAR_MEV_S
        if unit == "fm/c":
            return value * HBARC_MEV_FM
        return value


@dataclass(frozen=True)
class Wavenumber:
    """k and dk/dE at one energy. For E < 0, k = i*kappa with kappa > 0."""

    E: float
    k: complex
    dk_dE: complex

    @property
    def magnitude(self):
        return abs(self.k)


def wavenumber(E, ch):
    if E == 0:
        raise ValueError("threshold point; use limit operations")
    mu, hbar = ch.reduced_mass, ch.hbar
    kappa = np.sqrt(2.0 * mu * abs(E)) / hbar
    k = complex(kappa, 0.0) if E > 0 else complex(0.0, kappa)
    return Wavenumber(E=float(E), k=k, dk_dE=mu / (hbar**2 * k))


def energy_from_wavenumber(k, ch):
    """Energy for a real wavenumber magnitude, E = hbar^2 k^2 / 2 mu."""
    return (ch.hbar * k) ** 2 / (2.0 * ch.reduced_mass)


def energy_grid(E_min, E_max, n_points, spacing="linear"):
    """Strictly increasing energy grid that never contains E = 0.

    A linear grid that lands on threshold has that node moved up by a
    machine-scale amount (bounded so ordering is preserved).
    """
    if not E_min < E_max:
        raise ValueError(f"degenerate energy range [{E_min}, {E_max}]")
    if n_points < 2:
        raise ValueError("an energy grid needs at least 2 points")
    if spacing == "linear":
        grid = np.linspace(E_min, E_max, int(n_points))
    elif spacing in ("log", "log-from-threshold"):
        if E_min <= 0:
            raise ValueError("log spacing requires E_min > 0")
        grid = np.geomspace(E_min, E_max, int(n_points))
        grid[0], grid[-1] = E_min, E_max
    else:
        raise ValueError(f"unknown spacing {spacing!r}")
    zero = np.flatnonzero(grid == 0.0)
    if zero.size:
        i = zero[0]
        nudge = np.finfo(float).eps * (E_max - E_min)
        if i + 1 < len(grid):
            nudge = min(nudge, 0.5 * grid[i + 1])
        grid[i] = nudge
    return grid
