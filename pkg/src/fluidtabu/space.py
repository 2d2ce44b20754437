"""Bounded, grid-quantized parameter domains.

Points are plain 1-D float arrays. Every point the search touches is snapped
onto the lattice ``lower + k * grid`` (``k = 0 .. kmax``) so that exact float
equality is a valid identity test for tabu bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class DimensionMismatch(ValueError):
    """A vector does not have the dimension of the space it is used with."""


def _as_vector(values, name: str = "values") -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


def _like(values, ref: np.ndarray, name: str) -> np.ndarray:
    # scalars broadcast; anything else must match the reference dimension
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        return np.full(ref.shape, float(arr))
    if arr.shape != ref.shape:
        raise DimensionMismatch(f"{name} has shape {arr.shape}, expected {ref.shape}")
    return arr.copy()


@dataclass(frozen=True, eq=False)
class SearchSpace:
    """Box bounds plus a per-dimension lattice resolution.

    Parameters
    ----------
    lower, upper : array_like
        Per-dimension bounds, ``lower < upper``.
    grid : array_like
        Smallest representable increment per dimension.
    names, units : sequence of str, optional
        Labels used in reports.
    """

    lower: np.ndarray
    upper: np.ndarray
    grid: np.ndarray
    names: tuple[str, ...] = field(default=())
    units: tuple[str, ...] = field(default=())

    def __post_init__(self):
        lower = _as_vector(self.lower, "lower")
        upper = _like(self.upper, lower, "upper")
        grid = _like(self.grid, lower, "grid")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ValueError("bounds must be finite")
        if np.any(lower >= upper):
            raise ValueError("lower[i] < upper[i] must hold for every dimension")
        if np.any(grid <= 0) or np.any(grid > upper - lower):
            raise ValueError("grid[i] must lie in (0, upper[i] - lower[i]]")
        names = tuple(self.names) or tuple(f"x{i}" for i in range(lower.size))
        units = tuple(self.units) or ("",) * lower.size
        if len(names) != lower.size or len(units) != lower.size:
            raise ValueError("names/units must have one entry per dimension")
        for arr in (lower, upper, grid):
            arr.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "units", units)
        kmax = np.floor((upper - lower) / grid + 1e-9)
        kmax.setflags(write=False)
        object.__setattr__(self, "_kmax", kmax)

    @property
    def dimension(self) -> int:
        return self.lower.size

    def _check(self, p) -> np.ndarray:
        arr = np.asarray(p, dtype=float)
        if arr.shape[-1:] != (self.dimension,):
            raise DimensionMismatch(
                f"expected dimension {self.dimension}, got shape {arr.shape}"
            )
        return arr

    def quantize(self, p) -> np.ndarray:
        """Snap to the nearest in-bounds lattice point; ties go toward ``lower``.

        Works row-wise on ``(..., dimension)`` arrays.
        """
        arr = self._check(p)
        k = np.ceil((arr - self.lower) / self.grid - 0.5)
        k = np.clip(k, 0.0, self._kmax)
        return np.clip(self.lower + k * self.grid, self.lower, self.upper)

    def clamp(self, p) -> np.ndarray:
        arr = self._check(p)
        return np.clip(arr, self.lower, self.upper)

    def contains(self, p) -> bool:
        arr = self._check(p)
        return bool(np.all(arr >= self.lower) and np.all(arr <= self.upper))

    def random_point(self, rng: np.random.Generator) -> np.ndarray:
        """Uniform draw over the box, quantized to the lattice."""
        return self.quantize(rng.uniform(self.lower, self.upper))

    def neighborhood(self, base, steps) -> list[np.ndarray]:
        """Coordinate moves ``base[i] +/- steps[i]``, clamped and quantized.

        Candidates that collapse back onto ``base`` are dropped, so the result
        has at most ``2 * dimension`` members. Order is ``+`` then ``-`` for
        each dimension in turn.
        """
        base = self._check(base)
        steps = np.broadcast_to(np.asarray(steps, dtype=float), base.shape)
        d = self.dimension
        cand = np.repeat(base[None, :], 2 * d, axis=0)
        idx = np.arange(d)
        cand[2 * idx, idx] += steps
        cand[2 * idx + 1, idx] -= steps
        cand = self.quantize(self.clamp(cand))
        keep = np.any(cand != base, axis=1)
        return [row for row in cand[keep]]


@dataclass(frozen=True, eq=False)
class StepSchedule:
    """Initial and minimum step per dimension with a common reduction factor."""

    initial: np.ndarray
    minimum: np.ndarray
    reduction_factor: float = 2.0

    def __post_init__(self):
        initial = _as_vector(self.initial, "initial")
        minimum = _like(self.minimum, initial, "minimum")
        if np.any(minimum <= 0) or np.any(initial < minimum):
            raise ValueError("need initial[i] >= minimum[i] > 0")
        if not self.reduction_factor > 1:
            raise ValueError("reduction_factor must exceed 1")
        initial.setflags(write=False)
        minimum.setflags(write=False)
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "minimum", minimum)
        object.__setattr__(self, "reduction_factor", float(self.reduction_factor))

    def check_against(self, space: SearchSpace) -> None:
        if self.initial.size != space.dimension:
            raise DimensionMismatch("schedule and space dimensions differ")
        if np.any(self.minimum < space.grid * (1 - 1e-12)):
            raise ValueError("minimum step must not be finer than the grid")


def quantize(p, space: SearchSpace) -> np.ndarray:
    return space.quantize(p)


def clamp(p, space: SearchSpace) -> np.ndarray:
    return space.clamp(p)


def random_point(space: SearchSpace, rng: np.random.Generator) -> np.ndarray:
    return space.random_point(rng)


def neighborhood(base, steps, space: SearchSpace) -> list[np.ndarray]:
    return space.neighborhood(base, steps)
