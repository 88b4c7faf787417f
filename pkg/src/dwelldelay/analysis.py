"""Peak finding, Lorentzian fits and verdicts on delay spectra."""

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks as _scipy_find_peaks
from scipy.signal import peak_widths

from .kinematics import wavenumber


@dataclass(frozen=True)
class PeakCandidate:
    E: float
    value: float
    prominence: float
    width: float
    index: int


@dataclass(frozen=True)
class ResonanceFit:
    E_r: float
    Gamma: float
    amplitude: float
    background: float
    residual_norm: float
    converged: bool
    window: tuple
    iterations: int = 0
    message: str = ""


@dataclass(frozen=True)
class Classification:
    verdict: str
    evidence: dict = field(default_factory=dict)


def _columns(spec, column):
    return spec.energies, spec.column(column)


def find_peaks(spec, column="tau_dwell", min_prominence=0.0):
    E, y = _columns(spec, column)
    return find_peaks_in(E, y, min_prominence)


def find_peaks_in(E, y, min_prominence=0.0):
    """Local maxima of sampled y(E), most prominent first (ties: lower E first)."""
    E = np.asarray(E, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(E) < 7:
        raise ValueError("peak search needs at least 7 points")
    idx, props = _scipy_find_peaks(y, prominence=max(min_prominence, 0.0))
    if len(idx) == 0:
        return []
    prominences = props["prominences"]
    keep = prominences > 0
    idx, prominences = idx[keep], prominences[keep]
    if len(idx) == 0:
        return []
    _, _, left, right = peak_widths(y, idx, rel_height=0.5)
    positions = np.arange(len(E))
    widths = np.interp(right, positions, E) - np.interp(left, positions, E)
    peaks = [
        PeakCandidate(E=float(E[i]), value=float(y[i]), prominence=float(p), width=float(w), index=int(i))
        for i, p, w in zip(idx, prominences, widths)
    ]
    return sorted(peaks, key=lambda pk: (-pk.prominence, pk.E))


def lorentzian(E, background, amplitude, E_r, Gamma):
    quarter = 0.25 * Gamma * Gamma
    return background + amplitude * quarter / ((E - E_r) ** 2 + quarter)


def _jacobian(E, background, amplitude, E_r, Gamma):
    quarter = 0.25 * Gamma * Gamma
    denom = (E - E_r) ** 2 + quarter
    shape = quarter / denom
    d_er = amplitude * quarter * 2.0 * (E - E_r) / denom**2
    d_gamma = amplitude * 0.5 * Gamma * (E - E_r) ** 2 / denom**2
    return np.column_stack([np.ones_like(E), shape, d_er, d_gamma])


def _initial_guess(E, y):
    i = int(np.argmax(y))
    background = float(np.min(y))
    amplitude = float(y[i] - background)
    if not amplitude > 0:
        return None
    half = background + 0.5 * amplitude
    lo = i
    while lo > 0 and y[lo] > half:
        lo -= 1
    hi = i
    while hi < len(y) - 1 and y[hi] > half:
        hi += 1
    left = np.interp(half, [y[lo], y[lo + 1]], [E[lo], E[lo + 1]]) if y[lo] <= half else E[lo]
    right = np.interp(half, [y[hi], y[hi - 1]], [E[hi], E[hi - 1]]) if y[hi] <= half else E[hi]
    width = right - left
    if not width > 0:
        width = 0.25 * (E[-1] - E[0])
    return np.array([background, amplitude, float(E[i]), float(width)])


def fit_lorentzian(E, y, window=None, initial=None, max_iter=200, tol=1e-10):
    """Damped least-squares fit of background + Lorentzian.

    Model: c0 + A (Gamma^2/4) / ((E - E_r)^2 + Gamma^2/4). Damping starts at
    1e-3 and is divided by 10 after an accepted step, multiplied by 10 after
    a rejected one. Stops when the residual norm changes by less than
    ``tol`` (relative) or after ``max_iter`` iterations.
    """
    E = np.asarray(E, dtype=float)
    y = np.asarray(y, dtype=float)
    if window is None:
        window = (float(E[0]), float(E[-1]))
    lo, hi = window
    mask = (E >= lo) & (E <= hi)
    if np.count_nonzero(mask) < 8:
        raise ValueError(f"fit window {window} holds fewer than 8 points")
    E, y = E[mask], y[mask]
    scale = max(np.linalg.norm(y), 1e-300)

    def result(p, norm, converged, iterations, message):
        return ResonanceFit(
            E_r=float(p[2]), Gamma=float(abs(p[3])), amplitude=float(p[1]), background=float(p[0]),
            residual_norm=float(norm / scale), converged=bool(converged), window=(lo, hi),
            iterations=iterations, message=message,
        )

    p = np.asarray(initial, dtype=float) if initial is not None else _initial_guess(E, y)
    if p is None:
        return result(np.full(4, np.nan), np.nan, False, 0, "no peak to initialise from")

    r = y - lorentzian(E, *p)
    norm = np.linalg.norm(r)
    damping = 1e-3
    converged = False
    message = "iteration limit reached"
    iterations = 0
    for iterations in range(1, max_iter + 1):
        J = _jacobian(E, *p)
        JtJ = J.T @ J
        g = J.T @ r
        diag = np.diag(np.diag(JtJ))
        if not np.all(np.isfinite(JtJ)) or np.linalg.matrix_rank(JtJ) < 4:
            message = "singular normal equations"
            break
        if norm <= 1e-14 * scale:
            converged, message = True, "exact fit"
            break
        accepted = False
        while damping < 1e16:
            try:
                step = np.linalg.solve(JtJ + damping * diag, g)
            except np.linalg.LinAlgError:
                damping *= 10.0
                continue
            trial = p + step
            r_trial = y - lorentzian(E, *trial)
            norm_trial = np.linalg.norm(r_trial)
            if np.isfinite(norm_trial) and norm_trial <= norm:
                accepted = True
                break
            damping *= 10.0
        if not accepted:
            # no downhill step left at any damping: a stationary point
            converged, message = True, "no further decrease"
            break
        change = (norm - norm_trial) / max(norm, 1e-300)
        if change < tol:
            # keep the pre-step parameters so a refit from them is a fixed point
            converged, message = True, "residual norm converged"
            break
        p, r, norm = trial, r_trial, norm_trial
        damping = max(damping / 10.0, 1e-12)

    if converged and not (abs(p[3]) > 0 and np.isfinite(p).all()):
        converged, message = False, "no positive width"
    if converged and not lo <= p[2] <= hi:
        converged, message = False, "resonance energy left the window"
    if converged and not p[1] > 0:
        converged, message = False, "non-positive peak amplitude"
    return result(p, norm, converged, iterations, message)


def fit_spectrum(spec, column="tau_phase", window=None, **kwargs):
    E, y = _columns(spec, column)
    return fit_lorentzian(E, y, window, **kwargs)


def _interp_at_k(y, k_target, k_grid):
    # k*y is smooth where y ~ 1/k, so interpolate that
    return float(np.interp(k_target, k_grid, y * k_grid)) / k_target


def classify(spec, peak_fraction=0.1):
    """Verdict on a delay spectrum.

    Checked in order: a prominent positive tau_dwell peak (resonance), a
    negative tau_dwell near threshold (time_advancement), a tau_phase
    divergence at threshold that tau_dwell does not share
    (threshold_artifact). The threshold tests use the lowest decade in k
    covered by the spectrum's positive energies.
    """
    E = spec.energies
    dwell = spec.column("tau_dwell")
    phase = spec.column("tau_phase")
    evidence = {}

    span = float(np.max(dwell) - np.min(dwell))
    tiny = 1e-8 * max(np.max(np.abs(phase)), 1e-300)
    if len(E) >= 7 and span > tiny:
        peaks = find_peaks_in(E, dwell, peak_fraction * span)
        peaks = [pk for pk in peaks if pk.value > 0]
        if peaks:
            best = peaks[0]
            evidence.update(peak_E=best.E, peak_value=best.value, peak_width=best.width)
            if best.E < 0:
                evidence["note"] = "peak at E<0"
            return Classification("resonance", evidence)

    positive = E > 0
    threshold_window = None
    if np.count_nonzero(positive) >= 2:
        Ep = E[positive]
        k = np.array([abs(wavenumber(e, spec.channel).k) for e in Ep])
        if k[-1] >= 10.0 * k[0]:
            threshold_window = (k, Ep)

    if threshold_window is not None:
        k, Ep = threshold_window
        k_lo, k_hi = k[0], 10.0 * k[0]
        near = positive.copy()
        near[positive] = k <= k_hi
        min_dwell = float(np.min(dwell[near]))
        evidence["min_tau_dwell_near_threshold"] = min_dwell
        if min_dwell < -tiny:
            return Classification("time_advancement", evidence)
        phase_p, dwell_p = phase[positive], dwell[positive]
        ph_lo, ph_hi = _interp_at_k(phase_p, k_lo, k), _interp_at_k(phase_p, k_hi, k)
        dw_lo, dw_hi = _interp_at_k(dwell_p, k_lo, k), _interp_at_k(dwell_p, k_hi, k)
        phase_growth = abs(ph_lo) / max(abs(ph_hi), 1e-300)
        dwell_change = abs(dw_lo - dw_hi) / max(abs(dw_hi), tiny)
        evidence.update(phase_growth=phase_growth, dwell_change=dwell_change)
        if phase_growth >= 10.0 and dwell_change < 0.1:
            return Classification("threshold_artifact", evidence)
    return Classification("none", evidence)
