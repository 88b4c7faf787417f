"""Complex t-matrix models for a single s-wave channel.

Sign convention: f(0) = +a, delta ~ +k a_R near threshold and
t(0) = -2 pi a / mu.  The t-matrix and S-matrix are tied by

    S = 1 - i mu k t / pi = 1 + 2 i k f,        t = -(2 pi / mu) f,

and the reflection amplitude of the equivalent radial problem is R = -S.
Closed-form models are continued to E < 0 by evaluating them at k = i kappa.
"""

import csv
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .kinematics import wavenumber
from .numdiff import default_step, fornberg_weights, five_point, stencil_nodes

POLE_TOL = 1e-14


@dataclass(frozen=True)
class ComplexScatteringLength:
    a_R: float
    a_I: float = 0.0

    def __post_init__(self):
        if self.a_I < 0:
            warnings.warn(
                f"a_I = {self.a_I} < 0 describes an emitting channel", RuntimeWarning, stacklevel=2
            )

    @property
    def value(self):
        return complex(self.a_R, self.a_I)


def _as_complex_length(a):
    if isinstance(a, ComplexScatteringLength):
        return a.value
    return complex(a)


@dataclass(frozen=True)
class AmplitudePoint:
    E: float
    k: complex
    t: complex
    dt_dE: complex
    delta: complex
    S: complex
    R_amp: complex
    eta: float
    pole: bool = False

    @property
    def t_R(self):
        return self.t.real

    @property
    def t_I(self):
        return self.t.imag


def s_from_t(t, k, mu):
    return 1.0 - 1j * mu * k * t / np.pi


def t_from_s(S, k, mu):
    return 1j * np.pi * (S - 1.0) / (mu * k)


def make_point(E, kin, t, dt_dE, ch):
    """Assemble an AmplitudePoint from t and dt/dE at one energy."""
    S = s_from_t(t, kin.k, ch.reduced_mass)
    with np.errstate(divide="ignore", invalid="ignore"):
        delta = np.log(S) / 2j if S != 0 else complex(np.nan, np.inf)
    return AmplitudePoint(
        E=float(E),
        k=kin.k,
        t=complex(t),
        dt_dE=complex(dt_dE),
        delta=complex(delta),
        S=complex(S),
        R_amp=complex(-S),
        eta=float(abs(S)),
    )


def pole_point(E, kin):
    nan = complex(np.nan, np.nan)
    return AmplitudePoint(E=float(E), k=kin.k, t=nan, dt_dE=nan, delta=nan, S=nan,
                          R_amp=nan, eta=np.nan, pole=True)


def _range_expansion(E, a, r_e, ch):
    # f = 1/D with D = 1/a - (r_e/2) k^2 - i k
    if a == 0:
        raise ValueError("trivial interaction: scattering length is zero")
    kin = wavenumber(E, ch)
    k = kin.k
    D = 1.0 / a - 0.5 * r_e * k * k - 1j * k
    scale = abs(1.0 / a) + abs(0.5 * r_e * k * k) + abs(k)
    if abs(D) <= POLE_TOL * scale:
        return pole_point(E, kin)
    mu = ch.reduced_mass
    t = -(2.0 * np.pi / mu) / D
    dD_dE = (-r_e * k - 1j) * kin.dk_dE
    dt_dE = (2.0 * np.pi / mu) * dD_dE / D**2
    return make_point(E, kin, t, dt_dE, ch)


def t_zero_range(E, a, ch):
    return _range_expansion(E, _as_complex_length(a), 0.0, ch)


def t_effective_range(E, a, r_e, ch):
    return _range_expansion(E, _as_complex_length(a), float(r_e), ch)


@dataclass(frozen=True)
class BreitWignerParams:
    E_r: float
    Gamma: float

    def __post_init__(self):
        if not self.E_r > 0:
            raise ValueError("E_r must be positive")
        if not self.Gamma > 0:
            raise ValueError("Gamma must be positive")


def t_breit_wigner(E, p, ch):
    """Elastic Breit-Wigner, f = (1/k) (Gamma/2) / (E_r - E - i Gamma/2)."""
    kin = wavenumber(E, ch)
    k = kin.k
    B = p.E_r - E - 0.5j * p.Gamma
    g = 0.5 * p.Gamma / B
    f = g / k
    df_dE = -kin.dk_dE * g / k**2 + (g / B) / k
    mu = ch.reduced_mass
    return make_point(E, kin, -(2.0 * np.pi / mu) * f, -(2.0 * np.pi / mu) * df_dE, ch)


def reflection_asymptotics(a, k):
    """Low-energy reference value R ~ exp(i (pi - 2 a k))."""
    return np.exp(1j * (np.pi - 2.0 * _as_complex_length(a).real * k))


# -- tabulated t-matrices -----------------------------------------------------


def _slopes(x, y):
    # 4th-order node slopes, then a Hyman filter so monotone data stay monotone
    n = len(x)
    d = np.empty(n)
    for i in range(n):
        lo = min(max(i - 2, 0), n - 5) if n >= 5 else 0
        window = slice(lo, min(lo + 5, n))
        d[i] = np.dot(fornberg_weights(x[i], x[window]), y[window])
    secant = np.diff(y) / np.diff(x)
    for i in range(n):
        left = secant[i - 1] if i > 0 else secant[0]
        right = secant[i] if i < n - 1 else secant[-1]
        if left * right > 0:
            bound = 3.0 * min(abs(left), abs(right))
            if d[i] * left <= 0:
                d[i] = 0.0
            elif abs(d[i]) > bound:
                d[i] = np.copysign(bound, left)
    return d


class TabulatedTMatrix:
    """Cubic Hermite interpolation of sampled t(E) for E > 0.

    Real and imaginary parts are interpolated independently. No
    extrapolation: queries outside the table raise.
    """

    def __init__(self, energies, t_values):
        E = np.asarray(energies, dtype=float)
        t = np.asarray(t_values, dtype=complex)
        if E.ndim != 1 or E.shape != t.shape:
            raise ValueError("energies and t values must be 1-D arrays of equal length")
        if len(E) < 4:
            raise ValueError(f"a t-matrix table needs at least 4 points, got {len(E)}")
        if np.any(np.diff(E) <= 0):
            raise ValueError("table energies must be strictly increasing")
        if E[0] <= 0:
            raise ValueError("tabulated t-matrices support E > 0 only")
        self.energies = E
        self.t_values = t
        self._re = CubicHermiteSpline(E, t.real, _slopes(E, t.real))
        self._im = CubicHermiteSpline(E, t.imag, _slopes(E, t.imag))

    def __call__(self, E):
        return complex(self._re(E), self._im(E))

    def derivative(self, E):
        return complex(self._re(E, 1), self._im(E, 1))

    @classmethod
    def from_csv(cls, path, ch):
        """Read ``E,t_re,t_im`` rows; ``#`` lines are comments.

        Values are in the channel's declared units (E in MeV and t in fm/MeV
        for ``mev_fm``).
        """
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [line for line in fh if line.strip() and not line.lstrip().startswith("#")]
        reader = csv.reader(rows)
        header = [h.strip() for h in next(reader, [])]
        if header != ["E", "t_re", "t_im"]:
            raise ValueError(f"expected header E,t_re,t_im in {path}, got {','.join(header)}")
        E, t = [], []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise ValueError(f"{path}: row {lineno} has {len(row)} fields")
            e, tr, ti = (float(v) for v in row)
            E.append(e)
            t.append(ch.tmatrix_in(complex(tr, ti)))
        return cls(E, t)


def t_tabulated(E, table, ch):
    if not table.energies[0] <= E <= table.energies[-1]:
        raise ValueError(
            f"E = {E} outside tabulated range [{table.energies[0]}, {table.energies[-1]}]"
        )
    kin = wavenumber(E, ch)
    return make_point(E, kin, table(E), table.derivative(E), ch)


# -- model objects --------------------------------------------------------------
# Thin immutable wrappers so spectra can be driven by any model uniformly.


@dataclass(frozen=True)
class ZeroRange:
    a: complex
    supports_negative_energy = True

    def amplitude(self, E, ch):
        return t_zero_range(E, self.a, ch)


@dataclass(frozen=True)
class EffectiveRange:
    a: complex
    r_e: float
    supports_negative_energy = True

    def amplitude(self, E, ch):
        return t_effective_range(E, self.a, self.r_e, ch)


@dataclass(frozen=True)
class BreitWigner:
    params: BreitWignerParams
    supports_negative_energy = True

    def amplitude(self, E, ch):
        return t_breit_wigner(E, self.params, ch)


@dataclass(frozen=True)
class Tabulated:
    table: TabulatedTMatrix
    supports_negative_energy = False

    def amplitude(self, E, ch):
        return t_tabulated(E, self.table, ch)


def t_with_numeric_derivative(E, t_of_E, ch, h=None):
    """AmplitudePoint for a t(E) without analytic derivative (5-point stencil)."""
    if h is None:
        h = default_step(E)
    kin = wavenumber(E, ch)
    dt = five_point([t_of_E(e) for e in stencil_nodes(E, h)], h)
    return make_point(E, kin, t_of_E(E), dt, ch)
