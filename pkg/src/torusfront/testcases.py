"""Oracle distributions with documented classical singularity structure.

Each case bundles an analytic input with the ground truth its verdicts are
judged against: which probe points are singular, in which directions, and at
what Sobolev order.  Coefficients come either from textbook series
(closed-form route) or from the refining quadrature path (windowed kinds
without a closed form).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coeffs import CoeffArray, TestDistribution, analytic_coeffs
from .grid import CutoffWindow, Grid, periodize, sample

__all__ = [
    "GroundTruth",
    "OracleCase",
    "classical_coeffs",
    "generate",
    "standard_cases",
]


@dataclass(frozen=True)
class GroundTruth:
    """Expected verdicts at one probe point.

    directions lists the singular unit directions there (empty = regular);
    sobolev_order is the classical critical s*, decay_order the coefficient
    decay exponent t, where those are standard facts.
    """

    x0: tuple
    directions: tuple = ()
    sobolev_order: float | None = None
    decay_order: float | None = None


@dataclass(frozen=True)
class OracleCase:
    name: str
    dist: TestDistribution
    truth: tuple[GroundTruth, ...]
    route: str  # "closed-form" | "refined-quadrature"
    justification: str

    def __post_init__(self):
        if self.route not in ("closed-form", "refined-quadrature"):
            raise ValueError(f"unknown generation route {self.route!r}")


def _square_series(n: np.ndarray, c: float) -> np.ndarray:
    """Coefficients of the unit square wave with jumps at c and c + 1/2."""
    a = np.zeros(n.shape, dtype=complex)
    odd = (n % 2) != 0
    a[odd] = 2.0 / (np.pi * 1j * n[odd])
    return a * np.exp(-2j * np.pi * n * c)


def _kink_series(n: np.ndarray, c: float) -> np.ndarray:
    """Coefficients of x -> |wrap(x - c)| (corners at c and c + 1/2)."""
    a = np.zeros(n.shape, dtype=complex)
    odd = (n % 2) != 0
    a[odd] = -1.0 / (np.pi**2 * n[odd].astype(float) ** 2)
    a[n == 0] = 0.25
    return a * np.exp(-2j * np.pi * n * c)


def _gauss_series(n: np.ndarray, c: float, sigma: float) -> np.ndarray:
    """Coefficients of the periodized Gaussian (whole-line transform at n)."""
    amp = sigma * np.sqrt(2.0 * np.pi) * np.exp(-2.0 * np.pi**2 * sigma**2 * n**2)
    return amp * np.exp(-2j * np.pi * n * c)


def _axis_of(direction) -> tuple[int, float]:
    nu = np.asarray(direction, dtype=float)
    nu = nu / np.linalg.norm(nu)
    j = int(np.argmax(np.abs(nu)))
    if abs(abs(nu[j]) - 1.0) > 1e-12:
        raise ValueError(
            f"no closed-form series for oblique direction {tuple(nu)}; "
            "supply a window to use the quadrature route"
        )
    return j, float(np.sign(nu[j]))


def classical_coeffs(dist: TestDistribution, N_max: int) -> CoeffArray:
    """Textbook Fourier series of the unwindowed periodic distribution."""
    n = np.arange(-N_max, N_max + 1)
    if dist.d == 1:
        c = dist.location[0]
        if dist.kind == "delta":
            a = np.exp(-2j * np.pi * n * c)
        elif dist.kind == "square_wave_1d":
            a = _square_series(n, c)
        elif dist.kind == "kink_1d":
            a = _kink_series(n, c)
        elif dist.kind == "gaussian_smooth":
            a = _gauss_series(n, c, dist.width)
        elif dist.kind == "plane_wave":
            k = int(round(dist.direction[0])) if dist.direction else 1
            a = (n == k).astype(complex)
        else:
            raise ValueError(f"no closed-form series for {dist.kind} in d=1")
        return CoeffArray(d=1, N_max=N_max, a=a, source="analytic")

    if dist.d != 2:
        raise ValueError("closed-form series cover d in {1, 2}")
    if dist.kind == "gaussian_smooth":
        ax = [_gauss_series(n, dist.location[j], dist.width) for j in range(2)]
        a = np.outer(ax[0], ax[1])
    elif dist.kind == "plane_wave":
        k = tuple(int(round(v)) for v in dist.direction)
        a = np.outer((n == k[0]).astype(complex), (n == k[1]).astype(complex))
    elif dist.kind == "halfplane_edge_2d":
        j, sign = _axis_of(dist.direction if dist.direction else (1.0, 0.0))
        prof = sign * _square_series(n, dist.location[j])
        flat = (n == 0).astype(complex)
        a = np.outer(prof, flat) if j == 0 else np.outer(flat, prof)
    elif dist.kind == "line_delta_2d":
        j, _ = _axis_of(dist.direction if dist.direction else (1.0, 0.0))
        prof = np.exp(-2j * np.pi * n * dist.location[j])
        flat = (n == 0).astype(complex)
        a = np.outer(prof, flat) if j == 0 else np.outer(flat, prof)
    else:
        raise ValueError(f"no closed-form series for {dist.kind} in d=2")
    return CoeffArray(d=2, N_max=N_max, a=a, source="analytic")


def generate(
    case: OracleCase,
    grid: Grid | None = None,
    N_max: int | None = None,
    window: CutoffWindow | None = None,
):
    """Realize an oracle as samples (grid given) or coefficients (N_max given).

    With a window, samples are periodized / coefficients follow the windowed
    analytic path (exact or refining quadrature); without one, coefficients
    are the classical unwindowed series.
    """
    if (grid is None) == (N_max is None):
        raise ValueError("provide exactly one of grid or N_max")
    if grid is not None:
        if not case.dist.is_function():
            raise ValueError(
                f"{case.dist.kind} has no pointwise values; request coefficients"
            )
        fld = sample(case.dist.evaluate, grid)
        return periodize(fld, window) if window is not None else fld
    if window is not None:
        return analytic_coeffs(case.dist, window, N_max)
    return classical_coeffs(case.dist, N_max)


def standard_cases() -> dict[str, OracleCase]:
    """The oracle set the acceptance suite runs on (all at canonical spots)."""
    delta = OracleCase(
        name="delta",
        dist=TestDistribution(kind="delta", location=(0.5,)),
        truth=(
            GroundTruth(
                x0=(0.5,),
                directions=((1.0,), (-1.0,)),
                sobolev_order=-0.5,
                decay_order=0.0,
            ),
            GroundTruth(x0=(0.25,)),
        ),
        route="closed-form",
        justification=(
            "point mass: coefficients have unit modulus in every direction, "
            "H^s exactly for s < -1/2"
        ),
    )
    square = OracleCase(
        name="square",
        dist=TestDistribution(kind="square_wave_1d", location=(0.5,)),
        truth=(
            GroundTruth(
                x0=(0.5,),
                directions=((1.0,), (-1.0,)),
                sobolev_order=0.5,
                decay_order=1.0,
            ),
            GroundTruth(
                x0=(0.0,),
                directions=((1.0,), (-1.0,)),
                sobolev_order=0.5,
                decay_order=1.0,
            ),
            GroundTruth(x0=(0.25,)),
        ),
        route="closed-form",
        justification=(
            "jump discontinuities at both sign changes: first-order coefficient "
            "decay, H^s exactly for s < 1/2"
        ),
    )
    kink = OracleCase(
        name="kink",
        dist=TestDistribution(kind="kink_1d", location=(0.5,)),
        truth=(
            GroundTruth(
                x0=(0.5,),
                directions=((1.0,), (-1.0,)),
                sobolev_order=1.5,
                decay_order=2.0,
            ),
            GroundTruth(
                x0=(0.0,),
                directions=((1.0,), (-1.0,)),
                sobolev_order=1.5,
                decay_order=2.0,
            ),
            GroundTruth(x0=(0.25,)),
        ),
        route="closed-form",
        justification=(
            "continuous with derivative jumps at the corner points: "
            "second-order coefficient decay, H^s exactly for s < 3/2"
        ),
    )
    gaussian = OracleCase(
        name="gaussian",
        dist=TestDistribution(kind="gaussian_smooth", location=(0.5,), width=0.01),
        truth=(GroundTruth(x0=(0.5,)), GroundTruth(x0=(0.25,))),
        route="closed-form",
        justification=(
            "periodized Gaussian is real-analytic: super-polynomial "
            "coefficient decay everywhere, wave front empty"
        ),
    )
    edge = OracleCase(
        name="edge",
        dist=TestDistribution(
            kind="halfplane_edge_2d", location=(0.5, 0.5), direction=(1.0, 0.0)
        ),
        truth=(
            GroundTruth(
                x0=(0.5, 0.5),
                directions=((1.0, 0.0), (-1.0, 0.0)),
                sobolev_order=0.5,
                decay_order=1.0,
            ),
            GroundTruth(x0=(0.25, 0.5)),
        ),
        route="refined-quadrature",
        justification=(
            "indicator with a straight jump line: wave front is the conormal "
            "bundle of the edge (both unit normals), smooth elsewhere"
        ),
    )
    return {c.name: c for c in (delta, square, kink, gaussian, edge)}
