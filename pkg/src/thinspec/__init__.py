"""Dephasing of a two-spin qubit by the thin spectrum of its manipulation device.

A finite Lieb-Mattis antiferromagnet supplies the staggered field that
rotates a singlet-triplet qubit.  Its nearly degenerate collective levels
(the thin spectrum) are shifted by the qubit state, and tracing them out
dephases the qubit with t_coh ~ N B / (T gamma) in units hbar = k_B = 1.
"""

from .coherence import (
    CoherenceTrace,
    TimeGrid,
    approx_period,
    branch_envelope,
    coherence_approx,
    coherence_exact,
    extract_t_coh,
    thermal_state,
)
from .errors import (
    ConvergenceError,
    ParameterError,
    SweepError,
    ThinspecError,
    ThresholdNotReached,
    ValidityError,
)
from .meanfield import (
    QubitTrajectory,
    meanfield_coherence,
    meanfield_qubit_evolve,
    normalized_trace,
    qubit_hamiltonian,
)
from .params import ModelParams
from .scaling import (
    SweepResult,
    TimeBudget,
    fit_scaling_exponent,
    reference_times,
    sweep,
)
from .sector import (
    SectorHamiltonian,
    SpectrumResult,
    build_sector_hamiltonian,
    diagonalize,
    eigenvalues,
)
from .thermal import ThinSpectrum, thin_spectrum

__version__ = "0.1.0"

__all__ = [
    "CoherenceTrace",
    "ConvergenceError",
    "ModelParams",
    "ParameterError",
    "QubitTrajectory",
    "SectorHamiltonian",
    "SpectrumResult",
    "SweepError",
    "SweepResult",
    "ThinSpectrum",
    "ThinspecError",
    "ThresholdNotReached",
    "TimeBudget",
    "TimeGrid",
    "ValidityError",
    "approx_period",
    "branch_envelope",
    "build_sector_hamiltonian",
    "coherence_approx",
    "coherence_exact",
    "diagonalize",
    "eigenvalues",
    "extract_t_coh",
    "fit_scaling_exponent",
    "meanfield_coherence",
    "meanfield_qubit_evolve",
    "normalized_trace",
    "qubit_hamiltonian",
    "reference_times",
    "sweep",
    "thermal_state",
    "thin_spectrum",
]
