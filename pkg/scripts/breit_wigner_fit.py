"""Generate a Breit-Wigner delay spectrum and recover E_r and Gamma by a Lorentzian fit.

    python scripts/breit_wigner_fit.py --er 10 --gamma 0.2 --noise 0.01 --seed 7
"""

import argparse

import numpy as np

from dwelldelay.amplitudes import BreitWigner, BreitWignerParams
from dwelldelay.analysis import find_peaks_in, fit_lorentzian
from dwelldelay.delays import spectrum
from dwelldelay.kinematics import ChannelConfig, energy_grid


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--er", type=float, default=10.0)
    parser.add_argument("--gamma", type=float, default=0.2)
    parser.add_argument("--noise", type=float, default=0.0, help="relative Gaussian noise")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--n", type=int, default=401)
    args = parser.parse_args()

    ch = ChannelConfig(1.0)
    grid = energy_grid(args.er - 5 * args.gamma, args.er + 5 * args.gamma, args.n)
    spec = spectrum(BreitWigner(BreitWignerParams(args.er, args.gamma)), grid, ch)
    y = spec.column("tau_phase")
    if args.noise:
        y = y * (1 + args.noise * np.random.default_rng(args.seed).standard_normal(len(y)))

    peak = find_peaks_in(spec.energies, y)[0]
    fit = fit_lorentzian(spec.energies, y)
    print(f"peak tau_phase = {peak.value:.6g} at E = {peak.E:.6g} (4 hbar/Gamma = {4 / args.gamma:.6g})")
    print(f"fit: E_r = {fit.E_r:.8g}, Gamma = {fit.Gamma:.8g}, amplitude = {fit.amplitude:.6g}, "
          f"background = {fit.background:.3g}")
    print(f"     converged = {fit.converged} ({fit.message}, {fit.iterations} iterations), "
          f"residual = {fit.residual_norm:.3g}")
    print(f"relative errors: E_r {abs(fit.E_r - args.er) / args.er:.2e}, Gamma {abs(fit.Gamma - args.gamma) / args.gamma:.2e}")


if __name__ == "__main__":
    main()
