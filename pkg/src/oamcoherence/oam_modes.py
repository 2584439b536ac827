"""Laguerre-Gauss (p = 0) beam profiles and their fork interference with a tilted plane wave.

Coordinates are in units of the beam waist. Pixel ``(row, col)`` sits at
``x = (col - width // 2) * dx`` and ``y = (height // 2 - row) * dy`` with
``dx = 2 * extent / width``, so the beam axis always lands on a pixel centre
and ``y`` increases towards the top of the image.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_SIZE = 512
DEFAULT_EXTENT = 3.0
DEFAULT_TILT = 8.0


@dataclass(frozen=True, eq=False)
class FieldGrid:
    width: int
    height: int
    extent: float
    values: np.ndarray  # complex, shape (height, width)

    def __post_init__(self):
        if self.width < 16 or self.height < 16:
            raise ValueError(f"grid must be at least 16x16, got {self.width}x{self.height}")
        if not self.extent > 0:
            raise ValueError(f"extent must be positive, got {self.extent}")

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    @property
    def center(self) -> tuple[int, int]:
        """(row, col) of the beam axis."""
        return self.height // 2, self.width // 2


def coordinates(width: int, height: int, extent: float) -> tuple[np.ndarray, np.ndarray]:
    dx = 2.0 * extent / width
    dy = 2.0 * extent / height
    x = (np.arange(width) - width // 2) * dx
    y = (height // 2 - np.arange(height)) * dy
    return np.meshgrid(x, y)


def lg_field(
    l: int,
    waist: float = 1.0,
    size: int | tuple[int, int] = DEFAULT_SIZE,
    extent: float = DEFAULT_EXTENT,
) -> FieldGrid:
    """Complex LG_{0,l} amplitude, peak-normalised to 1.

    ``size`` is either a square side or ``(width, height)``.
    """
    if not waist > 0:
        raise ValueError(f"waist must be positive, got {waist}")
    width, height = (size, size) if np.isscalar(size) else size
    x, y = coordinates(width, height, extent)
    r = np.hypot(x, y)
    phi = np.arctan2(y, x)
    m = abs(int(l))
    rho = r * np.sqrt(2.0) / waist
    amp = rho**m * np.exp(-(r**2) / waist**2)
    # analytic peak of rho^m exp(-rho^2/2) sits at rho^2 = m
    peak = m ** (m / 2) * np.exp(-m / 2) if m else 1.0
    values = (amp / peak) * np.exp(1j * l * phi)
    return FieldGrid(width, height, float(extent), values)


def plane_wave(field: FieldGrid, tilt: float, plane_amp: float = 1.0) -> np.ndarray:
    """Plane wave tilted along x with ``tilt`` fringes per ``extent``."""
    x, _ = coordinates(field.width, field.height, field.extent)
    return plane_amp * np.exp(2j * np.pi * tilt * x / field.extent)


def interference(field: FieldGrid, tilt: float = DEFAULT_TILT, plane_amp: float = 1.0) -> np.ndarray:
    """Intensity of ``field`` superposed with a tilted plane wave."""
    if not plane_amp > 0:
        raise ValueError(f"plane_amp must be positive, got {plane_amp}")
    return np.abs(field.values + plane_wave(field, tilt, plane_amp)) ** 2


def to_pgm(grid) -> str:
    grid = np.asarray(grid, dtype=float)
    if not np.all(np.isfinite(grid)) or np.any(grid < 0):
        raise ValueError("PGM input must be finite and non-negative")
    top = grid.max() if grid.size and grid.max() > 0 else 1.0
    pixels = np.rint(grid / top * 255.0).astype(int)
    h, w = pixels.shape
    lines = ["P2", f"{w} {h}", "255"]
    lines += [" ".join(map(str, row)) for row in pixels.tolist()]
    return "\n".join(lines) + "\n"


def write_pgm(grid, path) -> None:
    """Write a plain (ASCII, ``P2``) greyscale image scaled linearly to 0..255."""
    text = to_pgm(grid)
    with open(path, "w", newline="\n", encoding="ascii") as f:
        f.write(text)
