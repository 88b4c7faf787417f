"""Phase, self-interference and dwell time delays for quantum scattering.

The dwell time delay is the phase (Wigner) time delay with the
self-interference term of quantum reflection removed; unlike the phase
delay it stays finite at an s-wave threshold.
"""

__version__ = "0.1.0"

from .amplitudes import (  # noqa: E402
    AmplitudePoint,
    BreitWigner,
    BreitWignerParams,
    ComplexScatteringLength,
    EffectiveRange,
    Tabulated,
    TabulatedTMatrix,
    ZeroRange,
)
from .delays import DelayPoint, DelaySpectrum, delay_point, spectrum, threshold_limits  # noqa: E402
from .kinematics import ChannelConfig, energy_grid, wavenumber  # noqa: E402
