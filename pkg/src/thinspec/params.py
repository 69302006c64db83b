"""Physical model parameters and their validation.

Units: hbar = k_B = 1 and the antiferromagnetic exchange J sets the energy
scale, so times are reported in units of hbar/J.
"""

from dataclasses import dataclass, replace

from .errors import ParameterError


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the coupled qubit / manipulation-device model.

    Attributes
    ----------
    n : int
        Number of device spins. Must be a positive multiple of 4 so the
        sublattice spin n/4 is an integer.
    j : float
        Antiferromagnetic exchange (energy unit), > 0.
    b : float
        Symmetry-breaking staggered field, >= 0.
    t : float
        Temperature in energy units (k_B = 1), > 0.
    gamma : float
        Qubit-device coupling strength, >= 0.
    delta : float
        Qubit singlet-triplet splitting, >= 0.
    weight_cutoff : float
        Relative Boltzmann weight below which thermal levels are dropped.
    """

    n: int
    t: float
    j: float = 1.0
    b: float = 0.0
    gamma: float = 0.0
    delta: float = 0.0
    weight_cutoff: float = 1e-12

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool):
            raise ParameterError(f"N must be an integer, got {self.n!r}")
        if self.n < 4 or self.n % 4 != 0:
            raise ParameterError("N must be a multiple of 4")
        if self.j <= 0:
            raise ParameterError(f"J must be > 0, got {self.j}")
        if self.t <= 0:
            raise ParameterError(f"T must be > 0, got {self.t}")
        if self.b < 0:
            raise ParameterError(f"B must be >= 0, got {self.b}")
        if self.gamma < 0:
            raise ParameterError(f"gamma must be >= 0, got {self.gamma}")
        if self.delta < 0:
            raise ParameterError(f"delta must be >= 0, got {self.delta}")
        if not 0 < self.weight_cutoff < 1:
            raise ParameterError(
                f"weight_cutoff must lie in (0, 1), got {self.weight_cutoff}"
            )

    @property
    def sublattice_spin(self) -> int:
        return self.n // 4

    @property
    def sector_dim(self) -> int:
        """Dimension of the maximal-sublattice-spin, zero-S^z sector."""
        return self.n // 2 + 1

    def with_value(self, field: str, value) -> "ModelParams":
        """Return a copy with one field replaced."""
        return replace(self, **{field: value})
