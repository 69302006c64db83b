"""Thermally occupied thin-spectrum levels and their Boltzmann weights."""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ValidityError
from .params import ModelParams
from .sector import SpectrumResult

# Fraction of the sector the thermal cloud may occupy before the truncated
# description stops being trustworthy.
SECTOR_FILL_LIMIT = 0.9

# Number of level spacings used for the harmonic-frequency estimate; kept
# short so anharmonicity at higher n does not contaminate the fit.
FIT_WINDOW = 10


@dataclass(frozen=True)
class ThinSpectrum:
    """Retained thin-spectrum levels of the uncoupled device.

    energies are shifted so the ground level sits at zero; weights are
    Boltzmann factors normalized over the retained levels.
    """

    energies: np.ndarray
    weights: np.ndarray
    partition_function: float
    n_max: int
    omega_fit: float
    anharmonicity: float


def truncation_index(energies: np.ndarray, t: float, weight_cutoff: float):
    """Index of the last level to retain, or None if the window supplied
    does not reach the cutoff."""
    rel = np.exp(-(energies - energies[0]) / t)
    below = np.nonzero(rel < weight_cutoff)[0]
    if below.size == 0:
        return None
    return int(below[0]) - 1


def thin_spectrum(spec: SpectrumResult, params: ModelParams) -> ThinSpectrum:
    """Truncate a sector spectrum to its thermally occupied levels.

    Levels are kept while their relative Boltzmann weight stays at or above
    ``params.weight_cutoff``.  Raises :class:`ValidityError` when the thermal
    cloud reaches the sector boundary (n_max >= 0.9 * dim), where the
    collective-sector description breaks down.
    """
    ev = np.asarray(spec.eigenvalues, dtype=float)
    if ev.ndim != 1 or ev.size < 2:
        raise ParameterError("spectrum must contain at least two levels")
    dim = spec.sector_dim
    n_max = truncation_index(ev, params.t, params.weight_cutoff)
    if n_max is None:
        if ev.size < dim:
            raise ParameterError(
                "supplied spectrum window does not reach the weight cutoff; "
                "diagonalize more levels"
            )
        n_max = ev.size - 1
    if n_max >= SECTOR_FILL_LIMIT * dim:
        raise ValidityError(
            "temperature too high for the truncated collective sector "
            f"(n_max={n_max}, dim={dim})"
        )
    shifted = ev[: n_max + 1] - ev[0]
    rel = np.exp(-shifted / params.t)
    z = float(rel.sum())
    weights = rel / z

    # Harmonic spacing from a short window near the bottom of the ladder.
    # At n_max = 0 the spec'd window is empty; fall back to the first spacing.
    window = min(FIT_WINDOW, max(n_max, 1))
    if ev.size < window + 1:
        raise ParameterError(
            f"need at least {window + 1} levels for the spacing fit, "
            f"got {ev.size}"
        )
    spacings = np.diff(ev[: window + 1])
    omega = float(spacings.mean())
    anharm = float(np.abs(spacings - omega).max() / omega) if omega > 0 else 0.0
    return ThinSpectrum(
        energies=shifted,
        weights=weights,
        partition_function=z,
        n_max=n_max,
        omega_fit=omega,
        anharmonicity=anharm,
    )
