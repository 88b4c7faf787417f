"""Phase, self-interference and dwell time delays of a scattering channel.

The phase time delay is evaluated from the complex t-matrix as

    tau_phase = (2 hbar / A) [ -(mu/2pi) k dt_R/dE
                               - (mu^2 k^2 / 2pi^2) (t_I dt_R/dE - t_R dt_I/dE)
                               - (mu/2pi) t_R dk/dE ]
    A = 1 + 2 mu k t_I / pi + mu^2 k^2 |t|^2 / pi^2  ( = |S|^2 )

which equals Re[-i hbar S^-1 dS/dE]. The last bracket term is the
self-interference delay -hbar mu t_R (dk/dE) / pi, and removing it leaves
the dwell time delay, which stays finite at an s-wave threshold.

Below threshold k = i kappa. Writing -i k t = -i kappa (i t) shows that the
same formula applies with the real momentum kappa, dkappa/dE and the rotated
amplitude i t, i.e. t_R -> -t_I and t_I -> t_R. The rotation is done in
complex arithmetic and the real-valuedness of the rotated kinematics is
asserted rather than assumed.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError, PoleError
from .kinematics import ChannelConfig, energy_from_wavenumber, wavenumber
from .numdiff import sampled_derivative

A_MIN = 1e-14
REAL_TOL = 1e-10


@dataclass(frozen=True)
class DelayPoint:
    E: float
    tau_phase: float
    tau_si: float
    tau_dwell: float
    A_factor: float
    dos_diff: float


@dataclass
class DelaySpectrum:
    channel: ChannelConfig
    points: list
    flagged_poles: list = field(default_factory=list)

    COLUMNS = ("tau_phase", "tau_si", "tau_dwell", "A_factor", "dos_diff")

    @property
    def energies(self):
        return np.array([p.E for p in self.points])

    def column(self, name):
        if name == "A":
            name = "A_factor"
        if name not in self.COLUMNS:
            raise KeyError(f"unknown spectrum column {name!r}")
        return np.array([getattr(p, name) for p in self.points])


def _real(z, what, E):
    z = complex(z)
    if abs(z.imag) > REAL_TOL * max(abs(z.real), 1e-300):
        raise NumericalError(f"continuation inconsistency: {what} has imaginary part {z.imag:g}", E)
    return z.real


def _rotated(ap, kin):
    """(k, dk/dE, t, dt/dE) with k real and positive, see module docstring."""
    if ap.pole:
        raise PoleError("point is flagged as a pole", ap.E)
    phase = kin.k / abs(kin.k)
    k = _real(kin.k / phase, "k", ap.E)
    dk = _real(kin.dk_dE / phase, "dk/dE", ap.E)
    return k, dk, phase * ap.t, phase * ap.dt_dE


def a_factor(ap, kin, ch):
    k, _, t, _ = _rotated(ap, kin)
    mu = ch.reduced_mass
    return 1.0 + 2.0 * mu * k * t.imag / np.pi + (mu * k) ** 2 * abs(t) ** 2 / np.pi**2


def phase_time_delay(ap, kin, ch):
    k, dk, t, dt = _rotated(ap, kin)
    mu, hbar = ch.reduced_mass, ch.hbar
    tR, tI, dtR, dtI = t.real, t.imag, dt.real, dt.imag
    A = 1.0 + 2.0 * mu * k * tI / np.pi + (mu * k) ** 2 * (tR**2 + tI**2) / np.pi**2
    if A < A_MIN:
        raise PoleError("S-matrix zero on grid", ap.E)
    bracket = (
        -mu / (2.0 * np.pi) * k * dtR
        - (mu * k) ** 2 / (2.0 * np.pi**2) * (tI * dtR - tR * dtI)
        - mu / (2.0 * np.pi) * tR * dk
    )
    return 2.0 * hbar / A * bracket


def self_interference_delay(ap, kin, ch):
    """-hbar mu t_R (dk/dE) / pi, continued to E < 0.

    The reflection form -hbar Im(R)/k dk/dE is evaluated alongside with the
    complex k and must come out real and equal.
    """
    k, dk, t, _ = _rotated(ap, kin)
    mu, hbar = ch.reduced_mass, ch.hbar
    tau = -hbar * mu * t.real * dk / np.pi
    via_r = _real(-hbar * ap.R_amp.imag / kin.k * kin.dk_dE, "self-interference delay", ap.E)
    if abs(via_r - tau) > 1e-8 * max(abs(tau), abs(via_r), 1e-300):
        raise NumericalError("continuation inconsistency: t-matrix and reflection forms differ", ap.E)
    return tau


def dwell_time_delay(ap, kin, ch):
    return phase_time_delay(ap, kin, ch) - self_interference_delay(ap, kin, ch)


def delay_point(ap, ch):
    kin = wavenumber(ap.E, ch)
    tau_phase = phase_time_delay(ap, kin, ch)
    tau_si = self_interference_delay(ap, kin, ch)
    weight = 2 * ch.partial_wave + 1
    return DelayPoint(
        E=ap.E,
        tau_phase=tau_phase,
        tau_si=tau_si,
        tau_dwell=tau_phase - tau_si,
        A_factor=a_factor(ap, kin, ch),
        dos_diff=weight * tau_phase / (2.0 * np.pi * ch.hbar),
    )


def dos_difference(energies, phase_shifts):
    """Beth-Uhlenbeck density-of-states difference sum_l (2l+1)/pi d(delta_l)/dE.

    ``phase_shifts`` maps l to sampled (unwrapped) phase shifts on
    ``energies``; complex shifts contribute through their real part.
    """
    energies = np.asarray(energies, dtype=float)
    if len(energies) < 5:
        raise ValueError("dos_difference needs at least 5 samples")
    total = np.zeros_like(energies)
    for l, delta in dict(phase_shifts).items():
        delta = np.real(np.asarray(delta))
        if delta.shape != energies.shape:
            raise ValueError(f"phase shifts for l={l} do not match the energy grid")
        total += (2 * l + 1) / np.pi * sampled_derivative(energies, delta)
    return total


def spectrum(model, grid, ch):
    """Delays on ``grid``. Poles and S-matrix zeros are skipped and recorded."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) == 0:
        raise ValueError("empty energy grid")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("energy grid must be strictly increasing")
    if np.any(grid == 0):
        raise ValueError("energy grid contains the threshold E = 0")
    if np.any(grid < 0) and not getattr(model, "supports_negative_energy", False):
        raise ValueError(f"{type(model).__name__} does not support E < 0")
    points, poles = [], []
    for E in grid:
        ap = model.amplitude(float(E), ch)
        if ap.pole:
            poles.append(float(E))
            continue
        try:
            points.append(delay_point(ap, ch))
        except PoleError:
            poles.append(float(E))
    if not points:
        raise ValueError("no usable grid points left after pole exclusion")
    return DelaySpectrum(channel=ch, points=points, flagged_poles=poles)


@dataclass(frozen=True)
class ThresholdLimits:
    k_tau_phase_limit: float
    tau_dwell_limit: float


def _extrapolate_to_zero(ks, values, floor):
    """Richardson (polynomial) extrapolation to k = 0 with a convergence check."""
    ks = np.asarray(ks, dtype=float)
    values = np.asarray(values, dtype=float)
    full = _lagrange_at_zero(ks, values)
    partial = _lagrange_at_zero(ks[1:], values[1:])
    if abs(full - partial) > 0.01 * max(abs(full), floor):
        raise NumericalError(
            f"threshold extrapolation did not converge ({partial:g} vs {full:g})"
        )
    return full


def _lagrange_at_zero(x, y):
    total = 0.0
    for i in range(len(x)):
        w = 1.0
        for j in range(len(x)):
            if j != i:
                w *= -x[j] / (x[i] - x[j])
        total += w * y[i]
    return total


def threshold_limits(model, ch, ks=(1e-3, 5e-4, 2.5e-4)):
    """Limits of k*tau_phase and tau_dwell as k -> 0+.

    ``ks`` are in the channel's user units (fm^-1 for mev_fm).
    """
    ks_internal = [ch.wavenumber_in(k) for k in ks]
    k_tau, dwell, phase = [], [], []
    for k in ks_internal:
        ap = model.amplitude(energy_from_wavenumber(k, ch), ch)
        dp = delay_point(ap, ch)
        k_tau.append(k * dp.tau_phase)
        dwell.append(dp.tau_dwell)
        phase.append(dp.tau_phase)
    floor_dwell = 1e-6 * max(abs(v) for v in phase)
    return ThresholdLimits(
        k_tau_phase_limit=_extrapolate_to_zero(ks_internal, k_tau, 1e-300),
        tau_dwell_limit=_extrapolate_to_zero(ks_internal, dwell, floor_dwell),
    )
