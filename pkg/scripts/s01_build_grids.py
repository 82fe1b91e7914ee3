import math
from dataclasses import dataclass, field
import numpy as np
from utils import logger


@dataclass(frozen=True)
class ModeGrid:
    """
    Equidistant midpoint discretization of a continuum interval [k_min, k_max].

    Mode j sits at k_min + spacing * (j + 1/2), so there is never a k = 0 mode
    and a [0, 2*Omega] grid is symmetric about Omega.
    """
    k_min: float
    k_max: float
    n_modes: int
    values: np.ndarray = field(repr=False, compare=False)

    @property
    def spacing(self) -> float:
        return (self.k_max - self.k_min) / self.n_modes

    def __len__(self) -> int:
        return self.n_modes


def build_mode_grid(k_min: float, k_max: float, n_modes: int) -> ModeGrid:
    """
    Build an equidistant grid of mode frequencies.

    Args:
        k_min: Lower edge of the interval (>= 0, outgoing waves only)
        k_max: Upper edge of the interval (> k_min)
        n_modes: Number of modes (>= 1)

    Returns:
        The ModeGrid with values at interval midpoints

    Raises:
        ValueError: on an empty or negative range, or fewer than one mode
    """
    if not (math.isfinite(k_min) and math.isfinite(k_max)):
        raise ValueError(f"Grid edges must be finite, got [{k_min}, {k_max}]")
    if k_min < 0:
        raise ValueError(f"k_min must be >= 0 (outgoing waves only), got {k_min}")
    if k_max <= k_min:
        raise ValueError(f"Empty grid range: k_max ({k_max}) must exceed k_min ({k_min})")
    if int(n_modes) != n_modes or n_modes < 1:
        raise ValueError(f"n_modes must be a positive integer, got {n_modes}")

    n_modes = int(n_modes)
    spacing = (k_max - k_min) / n_modes
    values = k_min + spacing * (np.arange(n_modes) + 0.5)
    values.setflags(write=False)

    logger.debug(f"Built grid [{k_min}, {k_max}] with {n_modes} modes, spacing {spacing:.6g}")
    return ModeGrid(k_min=float(k_min), k_max=float(k_max), n_modes=n_modes, values=values)


def recurrence_time(grid: ModeGrid) -> float:
    """Revival time 2*pi/spacing of an equidistant discretized continuum."""
    return 2.0 * math.pi / grid.spacing
