"""Square phase-space grids."""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Square grid of half-width ``radius`` and spacing ``step`` around ``center``.

    The grid always contains ``center`` itself and extends by
    ``floor(radius / step)`` steps in each direction.
    """

    radius: float = 4.0
    step: float = 0.05
    center: complex = 0j

    def __post_init__(self):
        if not self.step > 0:
            raise ValidationError(f"grid step must be > 0, got {self.step}")
        if not self.radius > 0:
            raise ValidationError(f"grid radius must be > 0, got {self.radius}")
        object.__setattr__(self, "center", complex(self.center))

    @property
    def half_count(self) -> int:
        return int(np.floor(self.radius / self.step + 1e-9))

    def axis(self) -> np.ndarray:
        k = np.arange(-self.half_count, self.half_count + 1)
        return k * self.step

    def points(self) -> np.ndarray:
        """2-D complex array; rows vary the imaginary part, columns the real part."""
        x = self.axis()
        return self.center + x[None, :] + 1j * x[:, None]
