"""Weighted sequence spaces on the frequency lattice.

A weight is a positive function on Z^d; the associated space carries the norm
of {a_n w(n)} in little l^q.  Everything here is desk-scale: infinite sums
become partial sums over growing boxes with an explicit three-way verdict
(convergent / divergent / inconclusive) instead of a silent answer.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coeffs import CoeffArray, window_coefficients
from .grid import CutoffWindow, Grid

__all__ = [
    "Weight",
    "polyweight",
    "ModerateReport",
    "is_nu_moderate",
    "weighted_norm",
    "membership_estimate",
    "MembershipReport",
    "dual_pairing",
    "localize",
    "effective_bandwidth",
]

MEMBERSHIP_LADDER = (64, 128, 256, 512)


@dataclass(frozen=True)
class Weight:
    """Positive lattice weight: polynomial <n>^s or an explicit table.

    Polynomial weights use the Japanese bracket <n> = sqrt(1 + |n|^2); they
    satisfy the Peetre inequality <m+n>^s <= 2^{|s|/2} <m>^s <n>^{|s|},
    which is what makes them moderate.
    """

    kind: str = "polynomial"
    s: float = 0.0
    table: dict | None = None

    def __post_init__(self):
        if self.kind not in ("polynomial", "tabulated"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind == "tabulated":
            if not self.table:
                raise ValueError("tabulated weight needs a table")
            tbl = {}
            for k, v in self.table.items():
                key = tuple(int(c) for c in np.atleast_1d(k))
                if float(v) <= 0:
                    raise ValueError(f"weight value at {key} must be positive")
                tbl[key] = float(v)
            object.__setattr__(self, "table", tbl)

    def __call__(self, n) -> np.ndarray:
        """Evaluate at lattice points; n of shape (..., d) or (...) for d=1."""
        n = np.asarray(n, dtype=float)
        if self.kind == "polynomial":
            sq = np.sum(n**2, axis=-1) if n.ndim > 1 else n**2
            return (1.0 + sq) ** (self.s / 2.0)
        flat = np.atleast_2d(n) if n.ndim > 1 else n.reshape(-1, 1)
        vals = np.array(
            [self.table[tuple(int(c) for c in row)] for row in flat.reshape(-1, flat.shape[-1])]
        )
        return vals.reshape(n.shape[:-1] if n.ndim > 1 else n.shape)

    def on_box(self, d: int, N_max: int) -> np.ndarray:
        """Weight values on the coefficient box, shaped like a CoeffArray."""
        n = np.arange(-N_max, N_max + 1)
        mesh = np.meshgrid(*([n] * d), indexing="ij")
        sq = sum(m.astype(float) ** 2 for m in mesh)
        if self.kind == "polynomial":
            return (1.0 + sq) ** (self.s / 2.0)
        out = np.empty_like(sq)
        it = np.nditer(sq, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            pt = tuple(int(n[i]) for i in idx)
            out[idx] = self.table[pt]
        return out


def polyweight(s: float) -> Weight:
    return Weight(kind="polynomial", s=s)


@dataclass(frozen=True)
class ModerateReport:
    R: int
    C_hat: float
    C_half: float
    verdict: str  # "moderate-up-to-R" | "growing"

    @property
    def growing(self) -> bool:
        return self.verdict == "growing"


def is_nu_moderate(
    omega: Weight, nu: Weight, R: int, d: int | None = None, growth_ratio: float = 1.5
) -> ModerateReport:
    """Exhaustive check of w(m+n) <= C w(m) v(n) over the box |m|inf, |n|inf <= R.

    Returns the empirical constant C_hat(R) = max ratio, and a growing/stable
    verdict from comparing C_hat(R/2) against C_hat(R).  Exhaustive on a
    finite lattice, hence a necessary-condition test only.  The lattice
    dimension comes from tabulated weights when present, else defaults to 1.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    if d is None:
        d = 1
        for w in (omega, nu):
            if w.kind == "tabulated":
                d = len(next(iter(w.table)))
                break
    return _moderate_boxed(omega, nu, R, d=d, growth_ratio=growth_ratio)


def _max_ratio(omega: Weight, nu: Weight, R: int, d: int) -> float:
    n = np.arange(-R, R + 1)
    if d == 1:
        w = omega(np.arange(-2 * R, 2 * R + 1).astype(float))
        wm = omega(n.astype(float))
        vn = nu(n.astype(float))
        best = 0.0
        for i, nn in enumerate(n):
            # w(m+n) for all m: a shifted slice of the doubled box
            shifted = w[(n + nn) + 2 * R]
            best = max(best, float(np.max(shifted / (wm * vn[i]))))
        return best
    mesh = np.meshgrid(*([np.arange(-2 * R, 2 * R + 1)] * d), indexing="ij")
    pts = np.stack(mesh, axis=-1).astype(float)
    wbig = omega(pts)
    meshm = np.meshgrid(*([n] * d), indexing="ij")
    ptsm = np.stack(meshm, axis=-1).astype(float)
    wm = omega(ptsm)
    vn = nu(ptsm)
    best = 0.0
    idx_grid = tuple(meshm[j] + 2 * R for j in range(d))
    for offset in np.ndindex(*([2 * R + 1] * d)):
        nn = tuple(int(o) - R for o in offset)
        sl = tuple(idx_grid[j] + nn[j] for j in range(d))
        shifted = wbig[sl]
        vval = vn[tuple(o for o in offset)]
        best = max(best, float(np.max(shifted / (wm * vval))))
    return best


def _moderate_boxed(omega, nu, R, d, growth_ratio):
    C_full = _max_ratio(omega, nu, R, d)
    C_half = _max_ratio(omega, nu, max(1, R // 2), d)
    verdict = "growing" if C_full > growth_ratio * C_half else "moderate-up-to-R"
    return ModerateReport(R=R, C_hat=C_full, C_half=C_half, verdict=verdict)


def weighted_norm(
    coeffs: CoeffArray, omega: Weight, q: float, cone=None
) -> float:
    """Norm of {a_n w(n)} in l^q over the truncated box (max for q = inf).

    An optional cone restricts the sum to its lattice points.
    """
    if q != np.inf and q < 1:
        raise ValueError(f"q must be >= 1 or inf, got {q}")
    mag = np.abs(coeffs.a) * omega.on_box(coeffs.d, coeffs.N_max)
    if cone is not None:
        mag = np.where(_cone_mask(coeffs, cone), mag, 0.0)
    if q == np.inf:
        return float(np.max(mag))
    return float(np.sum(mag**q) ** (1.0 / q))


def _cone_mask(coeffs: CoeffArray, cone) -> np.ndarray:
    axes = coeffs.lattice_axes()
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack(mesh, axis=-1).astype(float)
    if coeffs.d == 1:
        return cone.contains(pts[..., 0])
    return cone.contains(pts)


@dataclass(frozen=True)
class MembershipReport:
    verdict: str  # "convergent" | "divergent" | "inconclusive"
    radii: tuple
    norms: tuple

    @property
    def final_relative_increment(self) -> float:
        if len(self.norms) < 2 or self.norms[-1] == 0:
            return 0.0
        return (self.norms[-1] - self.norms[-2]) / self.norms[-1]


def membership_estimate(
    source, omega: Weight, q: float, cone=None, radii=MEMBERSHIP_LADDER
) -> MembershipReport:
    """Estimate whether the weighted l^q norm is finite from a dyadic ladder.

    source is a CoeffArray whose box covers the ladder, or a callable
    N -> CoeffArray.  Partial norms S_i are computed at the ladder radii;
    with dS_i the successive increments,

      convergent   : final relative increment < 1e-3, or the increments
                     decay along the ladder (ratio < 0.95 throughout);
      divergent    : the increments grow (ratio > 1.05 throughout);
      inconclusive : anything else (boundary behavior is reported, not forced).
    """
    radii = tuple(int(r) for r in radii)
    if callable(source):
        arrays = {r: source(r) for r in radii}
    else:
        if source.N_max < max(radii):
            raise ValueError(
                f"coefficient box N_max={source.N_max} smaller than ladder max {max(radii)}"
            )
        arrays = {r: source.crop(r) for r in radii}
    norms = tuple(weighted_norm(arrays[r], omega, q, cone=cone) for r in radii)

    increments = np.diff(np.asarray(norms, dtype=float))
    final_rel = (
        (norms[-1] - norms[-2]) / norms[-1] if norms[-1] > 0 else 0.0
    )
    if final_rel < 1e-3:
        verdict = "convergent"
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = increments[1:] / increments[:-1]
        ratios = ratios[np.isfinite(ratios)]
        if ratios.size and np.all(ratios < 0.95):
            verdict = "convergent"
        elif ratios.size and np.all(ratios > 1.05):
            verdict = "divergent"
        else:
            verdict = "inconclusive"
    return MembershipReport(verdict=verdict, radii=radii, norms=norms)


def dual_pairing(f: CoeffArray, phi: CoeffArray) -> complex:
    """The pairing sum of f_n phi_{-n} over the common box."""
    if f.d != phi.d:
        raise ValueError(f"dimension mismatch: {f.d} vs {phi.d}")
    N = min(f.N_max, phi.N_max)
    fa = f.crop(N).a
    pa = phi.crop(N).a
    flipped = pa[tuple(slice(None, None, -1) for _ in range(phi.d))]
    return complex(np.sum(fa * flipped))


def localize(
    f: CoeffArray,
    window: CutoffWindow,
    grid: Grid | None = None,
    N_out: int | None = None,
) -> CoeffArray:
    """Coefficients of (window * f) by coefficient convolution.

    The output box must stay inside the region where the truncated
    convolution is trustworthy: N_out <= N_max(f) - window bandwidth.  The
    grid argument is accepted for interface symmetry with the sampling path
    and only participates in window resolvability checks.
    """
    from .algebra import coeff_convolution

    if grid is not None:
        window.check_resolvable(grid)
    if window.d != f.d:
        raise ValueError(f"window dimension {window.d} != coefficient dimension {f.d}")
    w = window_coefficients(window, f.N_max)
    bw = effective_bandwidth(w)
    max_reliable = f.N_max - bw
    if N_out is None:
        N_out = max(max_reliable, 1)
    if N_out > max_reliable:
        raise ValueError(
            f"truncation starvation: requested output radius {N_out} exceeds "
            f"reliable radius {max_reliable} = N_max({f.N_max}) - window bandwidth({bw}); "
            f"supply coefficients with N_max >= {N_out + bw}"
        )
    return coeff_convolution(f, w, N_out)


def effective_bandwidth(coeffs: CoeffArray, tol: float = 1e-6) -> int:
    """Smallest radius whose exterior holds at most tol of the l1 mass.

    Truncating a convolution against these coefficients at radius b drops
    at most (l1 tail beyond b) x sup of the partner sequence, so this is
    the radius that controls truncation error, not the visual support.
    Exactly band-limited input reports its support radius (tail zero).
    """
    mag = np.abs(coeffs.a).ravel()
    mass = float(mag.sum())
    if mass == 0.0:
        return 0
    mesh = np.meshgrid(*coeffs.lattice_axes(), indexing="ij")
    # box radius: convolution cropping is an infinity-norm statement
    r = np.max(np.abs(np.stack([m.ravel() for m in mesh])), axis=0)
    per_radius = np.bincount(r, weights=mag)
    tail = mass - np.cumsum(per_radius)  # tail[b] = mass strictly beyond radius b
    small = np.nonzero(tail <= tol * mass)[0]
    return int(small.min()) if small.size else int(coeffs.N_max)
