"""Near-threshold delays of eta-4He and eta-N channels from zero-range amplitudes.

Prints tau_phase, tau_si and tau_dwell (in fm/c) against the centre-of-mass
energy and the verdict of the spectrum classifier for each channel.

    python scripts/eta_helium_delays.py --a-he4 -3.94,1.0 --a-en 0.88,0.41
"""

import argparse

import numpy as np

from dwelldelay.amplitudes import ZeroRange
from dwelldelay.analysis import classify
from dwelldelay.delays import spectrum, threshold_limits
from dwelldelay.kinematics import ChannelConfig, energy_from_wavenumber

M_ETA, M_N, M_HE4 = 547.862, 938.919, 3727.379  # MeV


def reduced(m1, m2):
    return m1 * m2 / (m1 + m2)


def complex_pair(text):
    re, im = (float(v) for v in text.split(","))
    return complex(re, im)


def report(label, mu, a_fm, n_rows):
    ch = ChannelConfig(mu, unit_system="mev_fm")
    model = ZeroRange(ch.length_in(a_fm))
    lo, hi = (energy_from_wavenumber(ch.wavenumber_in(k), ch) for k in (1e-4, 0.5))
    spec = spectrum(model, np.geomspace(lo, hi, 300), ch)
    verdict = classify(spec)
    lim = threshold_limits(model, ch)
    print(f"\n{label}: mu = {mu:.3f} MeV, a = ({a_fm.real:+.2f}, {a_fm.imag:+.2f}) fm")
    print(f"  verdict: {verdict.verdict}")
    # k * tau is dimensionless: 2 a_R mu / hbar in any unit system
    print(f"  k*tau_phase -> {lim.k_tau_phase_limit:.4g} (2 a_R mu / hbar = {2 * ch.length_in(a_fm.real) * mu:.4g}),"
          f" tau_dwell(0) -> {ch.time_out(lim.tau_dwell_limit, 'fm/c'):.4g} fm/c")
    print(f"  {'E [MeV]':>12} {'tau_phase':>12} {'tau_si':>12} {'tau_dwell':>12}   [fm/c]")
    for i in np.linspace(0, len(spec.points) - 1, n_rows).astype(int):
        p = spec.points[i]
        cols = [ch.time_out(v, "fm/c") for v in (p.tau_phase, p.tau_si, p.tau_dwell)]
        print(f"  {p.E:12.4e} " + " ".join(f"{v:12.5g}" for v in cols))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--a-he4", type=complex_pair, default=complex(-3.94, 1.0))
    parser.add_argument("--a-en", type=complex_pair, default=complex(0.88, 0.41))
    parser.add_argument("--rows", type=int, default=8)
    args = parser.parse_args()
    report("eta-4He", reduced(M_ETA, M_HE4), args.a_he4, args.rows)
    report("eta-N", reduced(M_ETA, M_N), args.a_en, args.rows)


if __name__ == "__main__":
    main()
