"""Uniform sampling on the unit torus cell, smooth cut-off windows, periodization.

The cell [0,1)^d stands for one period of the torus; windows are compactly
supported plateau bumps whose support fits strictly inside one period, so
multiplying by a window and periodizing is a single pointwise product with
wrapped indexing.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Grid",
    "SampledField",
    "CutoffWindow",
    "make_grid",
    "bump_window",
    "sample",
    "periodize",
    "smoothstep",
]


def smoothstep(t):
    """C-infinity monotone step: 0 for t <= 0, 1 for t >= 1.

    Built from h(t) = exp(-1/t) as h(t) / (h(t) + h(1-t)).  All derivatives
    vanish at both ends, which is what makes the window spectra decay faster
    than any polynomial.
    """
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape)
    inside = (t > 0.0) & (t < 1.0)
    ti = t[inside]
    h1 = np.exp(-1.0 / ti)
    h0 = np.exp(-1.0 / (1.0 - ti))
    out[inside] = h1 / (h1 + h0)
    out[t >= 1.0] = 1.0
    return out


@dataclass(frozen=True)
class Grid:
    """Uniform grid with M samples per axis on [0,1)^d."""

    d: int
    M: int

    def __post_init__(self):
        if self.d not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.d}")
        if self.M < 8 or (self.M & (self.M - 1)) != 0:
            # power of two >= 8: FFT contract
            raise ValueError(f"M must be a power of two >= 8, got {self.M}")

    @property
    def spacing(self) -> float:
        return 1.0 / self.M

    @property
    def n_points(self) -> int:
        return self.M**self.d

    def axes(self) -> tuple[np.ndarray, ...]:
        """Per-axis sample coordinates k/M."""
        x = np.arange(self.M) / self.M
        return tuple(x for _ in range(self.d))

    def points(self) -> np.ndarray:
        """All grid points, shape (M^d, d), row-major order."""
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


@dataclass(frozen=True)
class SampledField:
    """Complex samples of one period of a field, row-major over the grid."""

    grid: Grid
    values: np.ndarray
    meta: str = ""

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        shape = (self.grid.M,) * self.grid.d
        if vals.shape != shape:
            if vals.size == self.grid.n_points:
                vals = vals.reshape(shape)
            else:
                raise ValueError(
                    f"value count {vals.size} != M^d = {self.grid.n_points}"
                )
        if not np.all(np.isfinite(vals.view(float))):
            raise ValueError("field contains non-finite values")
        object.__setattr__(self, "values", vals)


def _wrap_offset(x, center):
    """Signed offset x - center wrapped into [-1/2, 1/2) per axis."""
    return (np.asarray(x, dtype=float) - center + 0.5) % 1.0 - 0.5


@dataclass(frozen=True)
class CutoffWindow:
    """Tensor-product plateau bump centered at x0.

    Exactly 1 on the closed box of half-width eps_in around x0 (mod 1),
    exactly 0 outside the open box of half-width eps_out, smooth in between.
    """

    x0: tuple
    eps_in: float
    eps_out: float

    def __post_init__(self):
        x0 = tuple(float(c) % 1.0 for c in np.atleast_1d(self.x0))
        object.__setattr__(self, "x0", x0)
        if not (0.0 < self.eps_in < self.eps_out < 0.5):
            raise ValueError(
                f"need 0 < eps_in < eps_out < 1/2, got ({self.eps_in}, {self.eps_out})"
            )

    @property
    def d(self) -> int:
        return len(self.x0)

    def profile(self, u):
        """1-D transition profile as a function of the wrapped offset u."""
        return smoothstep((self.eps_out - np.abs(u)) / (self.eps_out - self.eps_in))

    def __call__(self, x):
        """Evaluate the window at points x (shape (..., d) or scalar for d=1)."""
        x = np.asarray(x, dtype=float)
        if self.d == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            x = x.reshape(x.shape + (1,))
        val = np.ones(x.shape[:-1])
        for j in range(self.d):
            u = _wrap_offset(x[..., j], self.x0[j])
            val = val * self.profile(u)
        return val

    def check_resolvable(self, grid: Grid) -> None:
        # transition region must contain >= 2 samples per axis or the
        # "smooth" window aliases on this grid
        if self.eps_out - self.eps_in < 2.0 / grid.M:
            raise ValueError(
                f"degenerate window: eps_out - eps_in = {self.eps_out - self.eps_in:g}"
                f" < 2/M = {2.0 / grid.M:g}; refine the grid or widen the transition"
            )


def make_grid(d: int, M: int) -> Grid:
    return Grid(d=d, M=M)


def bump_window(x0, eps_in: float, eps_out: float) -> CutoffWindow:
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    return CutoffWindow(x0=tuple(x0), eps_in=float(eps_in), eps_out=float(eps_out))


def sample(fn, grid: Grid) -> SampledField:
    """Sample a pointwise function at all grid points."""
    pts = grid.points()
    arg = pts[:, 0] if grid.d == 1 else pts
    try:
        vals = np.asarray(fn(arg), dtype=complex)
    except (TypeError, ValueError):
        vals = None  # fn is not vectorized (branches on or converts scalars)
    if vals is None or vals.shape != (grid.n_points,):
        vals = np.array(
            [fn(p[0] if grid.d == 1 else p) for p in pts], dtype=complex
        )
    if not np.all(np.isfinite(vals.view(float))):
        raise ValueError("sampled function produced non-finite values")
    return SampledField(grid=grid, values=vals.reshape((grid.M,) * grid.d))


def periodize(fld: SampledField, window: CutoffWindow) -> SampledField:
    """Samples of (window * field) as one period of its periodic extension.

    The window's support fits inside one period, so the periodization of the
    cut-off field is just the pointwise product on the cell; centers near the
    cell boundary wrap via the window's mod-1 offset.
    """
    if window.d != fld.grid.d:
        raise ValueError(f"window dimension {window.d} != field dimension {fld.grid.d}")
    window.check_resolvable(fld.grid)
    x = np.arange(fld.grid.M) / fld.grid.M
    wvals = None
    for j in range(fld.grid.d):
        u = _wrap_offset(x, window.x0[j])
        wj = window.profile(u)
        shape = [1] * fld.grid.d
        shape[j] = fld.grid.M
        wj = wj.reshape(shape)
        wvals = wj if wvals is None else wvals * wj
    return SampledField(
        grid=fld.grid, values=fld.values * wvals, meta=fld.meta
    )
