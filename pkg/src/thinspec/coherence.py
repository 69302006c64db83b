"""Reduced-qubit coherence from branch-resolved device evolution.

After the sudden switch-on of the coupling, each qubit component of the
S^z_tot = 0 doublet drags the device with a shifted staggered field.  The
normalized qubit off-diagonal is the thermally weighted overlap of the two
branch evolutions,

    C(t) = sum_n w_n <n| e^{+i H_- t} e^{-i H_+ t} |n>,

evaluated by spectral decomposition of both branch Hamiltonians (no time
stepping, exact unitarity at any t).  The physical singlet off-diagonal is
-C(t)/2.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ThresholdNotReached
from .params import ModelParams
from .sector import build_sector_hamiltonian, diagonalize, eigenvalues
from .thermal import FIT_WINDOW, ThinSpectrum, thin_spectrum, truncation_index

# Total spilled amplitude allowed when the branch eigenbases are truncated.
SPILL_TOL = 1e-12


@dataclass(frozen=True)
class TimeGrid:
    """Uniform inclusive time grid, in units hbar/J."""

    t_start: float
    t_end: float
    steps: int

    def __post_init__(self):
        if not isinstance(self.steps, int) or self.steps < 2:
            raise ParameterError(f"steps must be an integer >= 2, got {self.steps!r}")
        if self.t_start < 0:
            raise ParameterError(f"t_start must be >= 0, got {self.t_start}")
        if self.t_end <= self.t_start:
            raise ParameterError(
                f"t_end must exceed t_start, got [{self.t_start}, {self.t_end}]"
            )

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.steps)


@dataclass(frozen=True)
class CoherenceTrace:
    """Normalized complex qubit coherence sampled on a time grid."""

    times: np.ndarray
    values: np.ndarray
    method: str
    params: ModelParams


def thermal_state(params: ModelParams):
    """Thin spectrum of the uncoupled device plus its occupied eigenvectors.

    Grows the diagonalization window until the Boltzmann cutoff is reached,
    so only the thermally relevant corner of large sectors is ever computed.
    Returns ``(ThinSpectrum, eigenvector matrix of the retained levels)``.
    """
    h0 = build_sector_hamiltonian(params, 0)
    dim = h0.dim
    count = min(dim, 16)
    while True:
        vals = eigenvalues(h0, lowest=count)
        n_max = truncation_index(vals, params.t, params.weight_cutoff)
        if n_max is not None or count >= dim:
            break
        count = min(dim, 2 * count)
    if n_max is None:
        n_max = dim - 1
    need = min(dim, max(n_max + 2, min(FIT_WINDOW, max(n_max, 1)) + 1))
    spec = diagonalize(h0, lowest=need)
    thin = thin_spectrum(spec, params)
    return thin, spec.eigenvectors[:, : thin.n_max + 1]


def branch_envelope(params: ModelParams, times: np.ndarray) -> np.ndarray:
    """Decoherence envelope D(t) = sum_n w_n <n| e^{+iH_-t} e^{-iH_+t} |n>.

    The occupied levels |n> are expanded in the eigenbases of the two branch
    Hamiltonians.  For large sectors only the low-energy window of each
    branch is diagonalized; the window grows until the amplitude spilled
    outside it is below ``SPILL_TOL``, which bounds the error on D(t) by the
    same amount.  The result is normalized so D(0) = 1.
    """
    times = np.asarray(times, dtype=float)
    thin, v0 = thermal_state(params)
    if params.gamma == 0.0:
        # H_+ and H_- coincide; the branch evolutions cancel identically.
        return np.ones(times.shape, dtype=complex)
    w = thin.weights
    h_minus = build_sector_hamiltonian(params, -1)
    h_plus = build_sector_hamiltonian(params, +1)
    dim = h_minus.dim
    margin = 64
    while True:
        k = min(dim, thin.n_max + 1 + margin)
        spec_m = diagonalize(h_minus, lowest=k)
        spec_p = diagonalize(h_plus, lowest=k)
        a = spec_m.eigenvectors.T @ v0
        b = spec_p.eigenvectors.T @ v0
        spill_m = np.sqrt(np.clip(1.0 - (a * a).sum(axis=0), 0.0, None))
        spill_p = np.sqrt(np.clip(1.0 - (b * b).sum(axis=0), 0.0, None))
        spill = float((w * (spill_m + spill_p)).sum())
        if spill <= SPILL_TOL or k >= dim:
            break
        margin *= 2

    overlap = spec_m.eigenvectors.T @ spec_p.eigenvectors
    kernel = overlap * (a @ (b * w).T)
    # Prepend t = 0 so every trace is normalized by the same-length gemm.
    t_aug = np.concatenate(([0.0], times))
    phase_m = np.exp(1j * np.outer(t_aug, spec_m.eigenvalues))
    phase_p = np.exp(-1j * np.outer(t_aug, spec_p.eigenvalues))
    raw = ((phase_m @ kernel) * phase_p).sum(axis=1)
    values = raw[1:] / raw[0]
    if times.size and times[0] == 0.0:
        values[0] = 1.0 + 0.0j
    return values


def coherence_exact(params: ModelParams, grid: TimeGrid) -> CoherenceTrace:
    """Exact branch-evolution coherence; requires delta = 0.

    For delta = 0 the coupled model is exactly solvable by product states,
    and C(t) is the branch envelope itself.
    """
    if params.delta != 0.0:
        raise ParameterError(
            "coherence_exact requires delta = 0; use the meanfield method "
            f"for delta = {params.delta}"
        )
    times = grid.times()
    return CoherenceTrace(
        times=times, values=branch_envelope(params, times), method="exact",
        params=params,
    )


def coherence_approx(
    params: ModelParams, thin: ThinSpectrum, grid: TimeGrid
) -> CoherenceTrace:
    """Closed-form phase approximation of the coherence.

    Each occupied level contributes a phase linear in its index,
    C(t) = sum_n w_n exp(-i sqrt(J/B) gamma/(4N) n t), so the trace is
    exactly periodic with period 2 pi (4N/gamma) sqrt(B/J).
    """
    if params.b <= 0.0:
        raise ParameterError("coherence_approx requires B > 0")
    step = np.sqrt(params.j / params.b) * params.gamma / (4.0 * params.n)
    levels = np.arange(thin.weights.size, dtype=float)
    times = grid.times()
    t_aug = np.concatenate(([0.0], times))
    raw = np.exp(-1j * step * np.outer(t_aug, levels)) @ thin.weights
    values = raw[1:] / raw[0]
    if times.size and times[0] == 0.0:
        values[0] = 1.0 + 0.0j
    return CoherenceTrace(times=times, values=values, method="approx", params=params)


def approx_period(params: ModelParams) -> float:
    """Exact revival period of the phase-approximation trace."""
    if params.gamma <= 0.0 or params.b <= 0.0:
        raise ParameterError("approx period requires gamma > 0 and B > 0")
    return 2.0 * np.pi * (4.0 * params.n / params.gamma) * np.sqrt(
        params.b / params.j
    )


def extract_t_coh(trace: CoherenceTrace, threshold: float = 0.5) -> float:
    """First time |C(t)| crosses below ``threshold``, linearly interpolated.

    Raises :class:`ThresholdNotReached` (carrying the attained minimum) if
    the trace never crosses within its grid.
    """
    if not 0.0 < threshold < 1.0:
        raise ParameterError(f"threshold must lie in (0, 1), got {threshold}")
    times = trace.times
    if times[0] != 0.0:
        raise ParameterError("t_coh extraction requires a trace starting at t = 0")
    mag = np.abs(trace.values)
    if abs(mag[0] - 1.0) > 1e-9:
        raise ParameterError(f"trace is not normalized, |C(0)| = {mag[0]}")
    below = np.nonzero(mag < threshold)[0]
    if below.size == 0:
        raise ThresholdNotReached(
            f"|C| never fell below {threshold} up to t = {times[-1]} "
            f"(min |C| = {mag.min():.6g}); extend the time grid",
            min_abs=mag.min(),
            t_end=times[-1],
        )
    i = int(below[0])
    frac = (mag[i - 1] - threshold) / (mag[i - 1] - mag[i])
    return float(times[i - 1] + frac * (times[i] - times[i - 1]))
