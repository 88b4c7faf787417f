"""Radial Schroedinger equation: Numerov phase shifts for short-range potentials.

Solves u'' = [2 mu (V - E) / hbar^2 + l(l+1)/r^2] u outward from the origin
(or a hard core) and reads off S_l by matching to Riccati-Hankel functions
at two radii beyond the potential. Complex (absorptive, Im V <= 0)
potentials go through the same complex arithmetic.
"""

import csv
from dataclasses import dataclass

import numpy as np
from scipy.special import spherical_jn, spherical_yn

from .amplitudes import make_point, t_from_s
from .errors import NumericalError
from .kinematics import wavenumber
from .numdiff import default_step, five_point, stencil_nodes

N_STEPS = 4000
MATCH_OFFSET = 10


@dataclass(frozen=True)
class SquareWell:
    """V = -depth for r < radius. A positive real depth is attractive."""

    depth: complex
    radius: float
    inner_radius = 0.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("well radius must be positive")
        object.__setattr__(self, "depth", complex(self.depth))

    @property
    def range(self):
        return self.radius

    def jumps(self):
        """(radius, V(r+) - V(r-)) for every step discontinuity."""
        return [(self.radius, self.depth)]

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        v = np.where(r < self.radius, -self.depth, 0.0 + 0j)
        # the jump sits on a grid node; use the mean there
        return np.where(r == self.radius, -0.5 * self.depth, v)


@dataclass(frozen=True)
class HardSphere:
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("hard-sphere radius must be positive")

    @property
    def range(self):
        return self.radius

    @property
    def inner_radius(self):
        return self.radius

    def __call__(self, r):
        return np.zeros(np.shape(r), dtype=complex)


class TabulatedPotential:
    """Potential sampled on r (linear interpolation, zero beyond the table)."""

    inner_radius = 0.0

    def __init__(self, r, V):
        r = np.asarray(r, dtype=float)
        V = np.asarray(V, dtype=complex)
        if r.ndim != 1 or r.shape != V.shape or len(r) < 2:
            raise ValueError("r and V must be 1-D arrays of equal length (>= 2)")
        if r[0] <= 0 or np.any(np.diff(r) <= 0):
            raise ValueError("radii must be positive and strictly increasing")
        self.r = r
        self.V = V

    @property
    def range(self):
        return float(self.r[-1])

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        re = np.interp(r, self.r, self.V.real, left=self.V.real[0], right=0.0)
        im = np.interp(r, self.r, self.V.imag, left=self.V.imag[0], right=0.0)
        return re + 1j * im

    @classmethod
    def from_csv(cls, path):
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [line for line in fh if line.strip() and not line.lstrip().startswith("#")]
        reader = csv.reader(rows)
        header = [h.strip() for h in next(reader, [])]
        if header != ["r", "V_re", "V_im"]:
            raise ValueError(f"expected header r,V_re,V_im in {path}")
        data = np.array([[float(v) for v in row] for row in reader])
        return cls(data[:, 0], data[:, 1] + 1j * data[:, 2])


@dataclass(frozen=True)
class PhaseShiftPoint:
    E: float
    l: int
    delta: complex
    S: complex


def riccati(l, x):
    """Riccati-Bessel x j_l(x), x y_l(x) and their x-derivatives."""
    j, jp = spherical_jn(l, x), spherical_jn(l, x, derivative=True)
    y, yp = spherical_yn(l, x), spherical_yn(l, x, derivative=True)
    return x * j, j + x * jp, x * y, y + x * yp


def _hankel(l, x):
    jh, _, nh, _ = riccati(l, x)
    # h+ ~ exp(+i(x - l pi/2)), h- ~ exp(-i(x - l pi/2))
    return -nh + 1j * jh, -nh - 1j * jh


def _radial_grid(pot, n_steps):
    h = pot.range / n_steps
    n_match = n_steps + n_steps // 4
    n_total = n_match + MATCH_OFFSET
    r = pot.inner_radius + pot.range * (np.arange(n_total + 1) / n_steps)
    return r, h, n_match


def _numerov(energies, l, pot, mu, hbar, n_steps):
    """u(r) at the two matching radii for every energy (vectorised over E)."""
    r, h, n_match = _radial_grid(pot, n_steps)
    V = pot(r)
    E = np.asarray(energies, dtype=float)[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        centrifugal = np.where(r > 0, l * (l + 1) / r**2, 0.0)
    g = 2.0 * mu * (V[None, :] - E) / hbar**2 + centrifugal[None, :]
    f = 1.0 - h * h * g / 12.0

    u_prev = np.zeros(len(E), dtype=complex)
    u_curr = np.full(len(E), h ** (l + 1), dtype=complex)
    # g*u at the origin: finite only for l = 1 (u ~ r^2, g ~ 2/r^2)
    if pot.inner_radius == 0.0 and l == 1:
        gu_origin = 2.0
    else:
        gu_origin = 0.0
    # first step written out since f[0] is singular at r = 0 for l > 0
    u_next = (2.0 * u_curr * (1.0 + 5.0 * h * h * g[:, 1] / 12.0) + h * h * gu_origin / 12.0) / f[:, 2]
    u_prev, u_curr = u_curr, u_next
    # A step in V on a node makes u''' jump by dg*u'; adding h^3/12 dg u'
    # there keeps the scheme fourth order.
    kinks = {}
    for radius, dV in getattr(pot, "jumps", lambda: [])():
        node = int(round((radius - pot.inner_radius) / h))
        if abs(r[node] - radius) <= 1e-12 * radius:
            kinks[node] = 2.0 * mu * dV / hbar**2
    def f_side(n, side):
        # stencils not centred on a step node see the one-sided value there
        if n not in kinks:
            return f[:, n]
        return 1.0 - h * h * (g[:, n] + 0.5 * side * kinks[n]) / 12.0

    # Summed (Henrici) form of f_{n+1} u_{n+1} = 2 f_n u_n + h^2 g_n u_n
    # - f_{n-1} u_{n-1}: carrying w = f u and its first difference keeps the
    # O(h^2) increments from being swamped by rounding when k h << 1.
    f_in = f_side(2, -1)
    w = f_in * u_curr
    dw = w - f[:, 1] * u_prev
    saved = {}
    for n in range(2, len(r) - 1):
        if n == n_match:
            saved["u1"] = u_curr.copy()
        shift = (f[:, n] - f_in) * u_curr
        w = w + shift
        dw = dw + shift - (f_side(n - 1, +1) - f[:, n - 1]) * u_prev
        dw = dw + h * h * g[:, n] * u_curr
        if n in kinks:
            dg = kinks[n]
            g_left = g[:, n] - 0.5 * dg
            du = (u_curr - u_prev) / h + 0.5 * h * g_left * u_curr
            dw = dw + h**3 / 12.0 * dg * du
        f_in = f_side(n + 1, -1)
        w = w + dw
        u_prev, u_curr = u_curr, w / f_in
        # rescale occasionally so strongly growing solutions cannot overflow
        if n % 256 == 0:
            scale = np.maximum(np.abs(u_curr), 1e-300)
            u_prev, u_curr, w, dw = u_prev / scale, u_curr / scale, w / scale, dw / scale
            if "u1" in saved:
                saved["u1"] = saved["u1"] / scale
    return saved["u1"], u_curr, r[n_match], r[-1]


def _check_match_radius(pot, r_m):
    if np.max(np.abs(pot(np.array([r_m])))) >= 1e-12:
        raise NumericalError(f"potential not negligible at match radius r = {r_m:g}")


def solve_phase_shifts(energies, l, pot, ch, n_steps=N_STEPS):
    """Vectorised ``solve_phase_shift`` over an array of positive energies."""
    energies = np.atleast_1d(np.asarray(energies, dtype=float))
    if np.any(energies <= 0):
        raise ValueError("the radial solver handles E > 0 only")
    mu, hbar = ch.reduced_mass, ch.hbar
    u1, u2, r1, r2 = _numerov(energies, l, pot, mu, hbar, n_steps)
    _check_match_radius(pot, r1)
    k = np.sqrt(2.0 * mu * energies) / hbar
    hp1, hm1 = _hankel(l, k * r1)
    hp2, hm2 = _hankel(l, k * r2)
    denom = u1 * hp2 - u2 * hp1
    if np.any(np.abs(denom) < 1e-14 * (np.abs(u1) + np.abs(u2))):
        raise NumericalError("degenerate match")
    S = (u1 * hm2 - u2 * hm1) / denom
    delta = np.log(S) / 2j
    # principal branch: Re(delta) in (-pi/2, pi/2]
    delta = delta - np.pi * np.round(delta.real / np.pi - 1e-15)
    return [PhaseShiftPoint(float(E), int(l), complex(d), complex(s)) for E, d, s in zip(energies, delta, S)]


def solve_phase_shift(E, l, pot, ch, n_steps=N_STEPS):
    return solve_phase_shifts([E], l, pot, ch, n_steps)[0]


def unwrap_phases(delta, anchor="low"):
    """Minimal-jump continuation of phase shifts along an energy grid.

    ``anchor="high"`` shifts the whole curve by a multiple of pi so that the
    highest-energy point sits in (-pi/2, pi/2], which exposes Levinson's
    n_b * pi at threshold when the grid reaches high enough.
    """
    delta = np.array(delta, dtype=complex)
    for i in range(1, len(delta)):
        delta[i] += np.pi * np.round((delta[i - 1].real - delta[i].real) / np.pi)
    if anchor == "high":
        delta -= np.pi * np.round(delta[-1].real / np.pi)
    elif anchor != "low":
        raise ValueError(f"unknown anchor {anchor!r}")
    return delta


def phase_shift_spectrum(pot, l, grid, ch, n_steps=N_STEPS, anchor="low"):
    points = solve_phase_shifts(grid, l, pot, ch, n_steps)
    return np.asarray(grid, dtype=float), unwrap_phases([p.delta for p in points], anchor)


def square_well_phase_shift(E, l, depth, radius, ch):
    """Closed-form square-well phase shift (log-derivative matching at the edge)."""
    mu, hbar = ch.reduced_mass, ch.hbar
    k = np.sqrt(2.0 * mu * E) / hbar
    kin = np.sqrt(2.0 * mu * (E + complex(depth)) + 0j) / hbar
    jh, jhp, _, _ = riccati(l, kin * radius)
    beta = kin * jhp / jh
    x = k * radius
    jo, jop, no, nop = riccati(l, x)
    hp, hm = -no + 1j * jo, -no - 1j * jo
    hpp, hmp = -nop + 1j * jop, -nop - 1j * jop
    S = (k * hmp - beta * hm) / (k * hpp - beta * hp)
    delta = np.log(S) / 2j
    return complex(delta - np.pi * np.round(delta.real / np.pi - 1e-15))


@dataclass(frozen=True)
class RadialModel:
    """t-matrix from Numerov phase shifts, dt/dE by a 5-point energy stencil."""

    potential: object
    l: int = 0
    n_steps: int = N_STEPS
    supports_negative_energy = False

    def amplitude(self, E, ch):
        h = default_step(E)
        nodes = np.concatenate([[E], stencil_nodes(E, h)])
        points = solve_phase_shifts(nodes, self.l, self.potential, ch, self.n_steps)
        k = np.sqrt(2.0 * ch.reduced_mass * nodes) / ch.hbar
        t = np.array([t_from_s(p.S, kk, ch.reduced_mass) for p, kk in zip(points, k)])
        return make_point(E, wavenumber(E, ch), t[0], five_point(t[1:], h), ch)
