"""Wave front detection from coefficient decay on frequency cones.

A direction is microlocally regular when the windowed coefficients decay
rapidly on a cone around it; singular directions show polynomial envelopes.
The decay order t (sup-norm surrogate) drives the wave front verdict; the
weighted l2 shell sums give the Sobolev critical order s* = -beta/2.

Rapid decay is undecidable from a finite box, so verdicts are threshold
comparisons of fitted orders, reported together with their residuals;
inconclusive is a first-class outcome, never rounded away.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .coeffs import CoeffArray, TestDistribution, analytic_coeffs, fourier_coefficients
from .cones import Cone, shrink
from .grid import CutoffWindow, SampledField, bump_window, periodize

__all__ = [
    "DecayEstimate",
    "SobolevEstimate",
    "WavefrontReport",
    "ScanFailure",
    "DECAY_ORDER_CAP",
    "direction_grid",
    "default_half_angle",
    "directional_decay",
    "sobolev_order",
    "wavefront_scan",
    "sobolev_wavefront_scan",
    "full_wf_map",
]

DECAY_ORDER_CAP = 40.0  # reported order when data vanish beyond a few shells
RESIDUAL_LIMIT = 0.5  # log2-units RMS beyond which a rate fit is not trusted
DEFAULT_THRESHOLD_ORDER = 8.0
WORKERS_ENV = "TORUSFRONT_WORKERS"


@dataclass(frozen=True)
class DecayEstimate:
    """Envelope-decay regression on one cone.

    envelopes[i] is the max of |a_n| over cone lattice points in dyadic
    shell shells[i] (2^k <= |n| < 2^{k+1}); t >= 0 estimates the decay
    order |a_n| ~ <n>^{-t} there, from least squares on log2 envelopes.
    """

    cone: Cone
    shells: tuple
    envelopes: tuple
    t: float
    intercept: float
    residual: float
    empty_shells: int = 0


@dataclass(frozen=True)
class SobolevEstimate:
    """Shell-sum rate fit on one cone: sums[i] = sum |a_n|^2 over the shell.

    The geometric rate beta of the sums gives the critical order
    s* = -beta/2: the cone sum with weight <n>^{2s} converges iff s < s*.
    """

    cone: Cone
    shells: tuple
    sums: tuple
    beta: float
    s_star: float
    residual: float
    empty_shells: int = 0

    def verdict(self, s: float, band: float = 0.1) -> str:
        """WF_s membership at this direction: singular iff s >= s*."""
        if self.residual > RESIDUAL_LIMIT:
            return "inconclusive"
        if abs(s - self.s_star) <= band:
            return "inconclusive"
        return "singular" if s >= self.s_star else "regular"


@dataclass(frozen=True)
class WavefrontReport:
    """Discretized fiber of the (Sobolev) wave front set over one point."""

    x0: tuple
    window: CutoffWindow
    mode: str  # "decay" | "sobolev"
    threshold: float  # N_thr for decay mode, s for sobolev mode
    directions: tuple  # unit vectors scanned, in input order
    cones: tuple  # nominal cones, one per direction
    estimates: tuple
    verdicts: tuple  # "singular" | "regular" | "inconclusive"
    N_max: int
    k_min: int
    k_max: int
    half_angle: float
    eval_shrink: float
    band: float = 0.0

    @property
    def singular_directions(self) -> tuple:
        return tuple(
            d for d, v in zip(self.directions, self.verdicts) if v == "singular"
        )

    @property
    def inconclusive_directions(self) -> tuple:
        return tuple(
            d for d, v in zip(self.directions, self.verdicts) if v == "inconclusive"
        )


@dataclass(frozen=True)
class ScanFailure:
    """Per-point failure inside a batch scan; batch processing continues."""

    x0: tuple
    error: str


def default_k_max(N_max: int) -> int:
    # top shell [2^k, 2^{k+1}) must fit inside the coefficient box
    return int(np.floor(np.log2(N_max))) - 1


def _shell_data(coeffs: CoeffArray, cone: Cone, k_min: int, k_max: int):
    """Per-shell (points' |a_n| values) for shells k_min..k_max on the cone."""
    if k_max is None:
        k_max = default_k_max(coeffs.N_max)
    if 2 ** (k_max + 1) > coeffs.N_max:
        raise ValueError(
            f"top shell needs 2^{k_max + 1} <= N_max = {coeffs.N_max}"
        )
    if k_max - k_min + 1 < 3:
        raise ValueError(f"shell range [{k_min}, {k_max}] has fewer than 3 shells")
    axes = coeffs.lattice_axes()
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1).astype(float)
    r = np.linalg.norm(pts, axis=-1)
    inside = (r >= 2.0**k_min) & (r < 2.0 ** (k_max + 1)) & cone.contains(pts)
    mag = np.abs(coeffs.a).ravel()[inside]
    k_of = np.floor(np.log2(r[inside])).astype(int)
    shells, per_shell = [], []
    empty = 0
    for k in range(k_min, k_max + 1):
        sel = k_of == k
        if not np.any(sel):
            empty += 1
            continue
        shells.append(k)
        per_shell.append(mag[sel])
    if len(shells) < 3:
        raise ValueError(
            f"only {len(shells)} shells contain cone lattice points in "
            f"[{k_min}, {k_max}]; increase N_max or widen the cone"
        )
    return shells, per_shell, empty, k_max


def _rate_fit(shells, values):
    """Least-squares slope/intercept/RMS residual of log2 values vs shell k.

    Values that are exactly zero cannot enter a log fit; callers drop them
    before calling.
    """
    x = np.asarray(shells, dtype=float)
    y = np.log2(np.asarray(values, dtype=float))
    A = np.stack([x, np.ones_like(x)], axis=-1)
    sol, *_ = np.linalg.lstsq(A, y, rcond=None)
    slope, intercept = float(sol[0]), float(sol[1])
    res = y - A @ sol
    return slope, intercept, float(np.sqrt(np.mean(res**2)))


def directional_decay(
    coeffs: CoeffArray, cone: Cone, k_min: int = 3, k_max: int | None = None
) -> DecayEstimate:
    """Fit the coefficient-envelope decay order t on one cone.

    Per-shell envelopes (max over cone lattice points) regress against the
    shell index; t = max(0, -slope), capped at DECAY_ORDER_CAP when the data
    vanish on all but < 3 shells (decay beyond any polynomial order).
    """
    shells, per_shell, empty, k_max = _shell_data(coeffs, cone, k_min, k_max)
    env = np.array([float(np.max(v)) for v in per_shell])
    nz = env > 0.0
    if int(nz.sum()) < 3:
        # coefficient-free cone (or support exhausted): faster than any power
        return DecayEstimate(
            cone=cone,
            shells=tuple(shells),
            envelopes=tuple(env),
            t=DECAY_ORDER_CAP,
            intercept=0.0,
            residual=0.0,
            empty_shells=empty,
        )
    ks = [k for k, keep in zip(shells, nz) if keep]
    slope, intercept, residual = _rate_fit(ks, env[nz])
    t = min(max(0.0, -slope), DECAY_ORDER_CAP)
    return DecayEstimate(
        cone=cone,
        shells=tuple(shells),
        envelopes=tuple(env),
        t=t,
        intercept=intercept,
        residual=residual,
        empty_shells=empty,
    )


def sobolev_order(
    coeffs: CoeffArray, cone: Cone, k_min: int = 3, k_max: int | None = None
) -> SobolevEstimate:
    """Fit the shell-sum rate beta and critical order s* = -beta/2 on a cone."""
    shells, per_shell, empty, k_max = _shell_data(coeffs, cone, k_min, k_max)
    sums = np.array([float(np.sum(v.astype(float) ** 2)) for v in per_shell])
    nz = sums > 0.0
    if int(nz.sum()) < 3:
        return SobolevEstimate(
            cone=cone,
            shells=tuple(shells),
            sums=tuple(sums),
            beta=-2.0 * DECAY_ORDER_CAP,
            s_star=DECAY_ORDER_CAP,
            residual=0.0,
            empty_shells=empty,
        )
    ks = [k for k, keep in zip(shells, nz) if keep]
    beta, _, residual = _rate_fit(ks, sums[nz])
    s_star = float(np.clip(-beta / 2.0, -DECAY_ORDER_CAP, DECAY_ORDER_CAP))
    return SobolevEstimate(
        cone=cone,
        shells=tuple(shells),
        sums=tuple(sums),
        beta=beta,
        s_star=s_star,
        residual=residual,
        empty_shells=empty,
    )


def direction_grid(d: int, n_directions: int | None = None) -> np.ndarray:
    """Unit direction set covering the sphere: {+,-} / uniform angles / icosphere."""
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        n = 72 if n_directions is None else int(n_directions)
        ang = 2.0 * np.pi * np.arange(n) / n
        return np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    if d == 3:
        return _icosphere(2 if n_directions is None else _icosphere_level(n_directions))
    raise ValueError(f"no direction grid for d = {d}")


def _icosphere_level(n_directions: int) -> int:
    sizes = {12: 0, 42: 1, 162: 2, 642: 3}
    if n_directions not in sizes:
        raise ValueError(f"d=3 direction counts are {sorted(sizes)}, not {n_directions}")
    return sizes[n_directions]


def _icosphere(level: int) -> np.ndarray:
    t = (1.0 + np.sqrt(5.0)) / 2.0
    verts = [
        (-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
        (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
        (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1),
    ]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    v = [np.asarray(p, dtype=float) / np.linalg.norm(p) for p in verts]
    for _ in range(level):
        cache: dict = {}
        new_faces = []

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = v[i] + v[j]
                v.append(m / np.linalg.norm(m))
                cache[key] = len(v) - 1
            return cache[key]

        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    return np.asarray(v)


def default_half_angle(d: int) -> float:
    return {1: np.pi / 4.0, 2: np.deg2rad(10.0), 3: np.deg2rad(15.0)}[d]


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _ordered_map(fn, items):
    w = _worker_count()
    if w <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=w) as pool:
        return list(pool.map(fn, items))


def _ingest_windowed(source, window: CutoffWindow, N_max: int) -> CoeffArray:
    """Coefficients of the windowed periodization, whatever the source form."""
    if isinstance(source, CoeffArray):
        return source if source.N_max <= N_max else source.crop(N_max)
    if isinstance(source, SampledField):
        return fourier_coefficients(periodize(source, window), N_max)
    if isinstance(source, TestDistribution):
        return analytic_coeffs(source, window, N_max)
    raise TypeError(f"cannot analyze {type(source).__name__}")


def _check_centered(window: CutoffWindow, x0) -> tuple:
    x0t = tuple(float(c) % 1.0 for c in np.atleast_1d(np.asarray(x0, dtype=float)))
    off = [abs(float((a - b + 0.5) % 1.0 - 0.5)) for a, b in zip(window.x0, x0t)]
    if max(off) > 1e-9:
        raise ValueError(
            f"window center {window.x0} is not the probe point {x0t}"
        )
    return x0t


def wavefront_scan(
    source,
    x0,
    window: CutoffWindow,
    directions=None,
    half_angle: float | None = None,
    N_thr: float = DEFAULT_THRESHOLD_ORDER,
    N_max: int = 256,
    k_min: int = 3,
    k_max: int | None = None,
    eval_shrink: float = 0.5,
) -> WavefrontReport:
    """Discretize the wave front fiber over x0 by thresholding decay orders.

    Per direction, a nominal cone of the given half-angle is reported while
    the decay fit runs on the cone shrunk by eval_shrink: boundary cones of
    a conormal singularity would otherwise clip its ridge and an honest
    half-angle would never separate neighbors.  Direction singular iff
    t < N_thr.
    """
    x0t = _check_centered(window, x0)
    coeffs = _ingest_windowed(source, window, N_max)
    d = coeffs.d
    dirs = direction_grid(d) if directions is None else np.atleast_2d(
        np.asarray(directions, dtype=float)
    )
    theta = default_half_angle(d) if half_angle is None else float(half_angle)
    if not 0.0 < eval_shrink <= 1.0:
        raise ValueError(f"eval_shrink must be in (0, 1], got {eval_shrink}")
    cones = tuple(Cone(axis=tuple(v), half_angle=theta) for v in dirs)

    def one(cone: Cone) -> DecayEstimate:
        return directional_decay(coeffs, shrink(cone, eval_shrink), k_min, k_max)

    raw = _ordered_map(one, list(cones))
    # report the nominal cone, not the evaluation cone
    estimates = tuple(
        DecayEstimate(
            cone=c,
            shells=e.shells,
            envelopes=e.envelopes,
            t=e.t,
            intercept=e.intercept,
            residual=e.residual,
            empty_shells=e.empty_shells,
        )
        for c, e in zip(cones, raw)
    )
    verdicts = tuple("singular" if e.t < N_thr else "regular" for e in estimates)
    return WavefrontReport(
        x0=x0t,
        window=window,
        mode="decay",
        threshold=float(N_thr),
        directions=tuple(tuple(float(c) for c in v) for v in dirs),
        cones=cones,
        estimates=estimates,
        verdicts=verdicts,
        N_max=coeffs.N_max,
        k_min=k_min,
        k_max=default_k_max(coeffs.N_max) if k_max is None else k_max,
        half_angle=theta,
        eval_shrink=eval_shrink,
    )


def sobolev_wavefront_scan(
    source,
    x0,
    window: CutoffWindow,
    s: float,
    directions=None,
    half_angle: float | None = None,
    N_max: int = 256,
    k_min: int = 3,
    k_max: int | None = None,
    eval_shrink: float = 0.5,
    band: float = 0.1,
) -> WavefrontReport:
    """Discretize the order-s Sobolev wave front fiber over x0.

    Per direction: singular iff s >= s*, regular iff s < s*, inconclusive
    inside the +-band margin or when the rate fit is poor.
    """
    x0t = _check_centered(window, x0)
    coeffs = _ingest_windowed(source, window, N_max)
    d = coeffs.d
    dirs = direction_grid(d) if directions is None else np.atleast_2d(
        np.asarray(directions, dtype=float)
    )
    theta = default_half_angle(d) if half_angle is None else float(half_angle)
    if not 0.0 < eval_shrink <= 1.0:
        raise ValueError(f"eval_shrink must be in (0, 1], got {eval_shrink}")
    cones = tuple(Cone(axis=tuple(v), half_angle=theta) for v in dirs)

    def one(cone: Cone) -> SobolevEstimate:
        return sobolev_order(coeffs, shrink(cone, eval_shrink), k_min, k_max)

    raw = _ordered_map(one, list(cones))
    estimates = tuple(
        SobolevEstimate(
            cone=c,
            shells=e.shells,
            sums=e.sums,
            beta=e.beta,
            s_star=e.s_star,
            residual=e.residual,
            empty_shells=e.empty_shells,
        )
        for c, e in zip(cones, raw)
    )
    verdicts = tuple(e.verdict(s, band) for e in estimates)
    return WavefrontReport(
        x0=x0t,
        window=window,
        mode="sobolev",
        threshold=float(s),
        directions=tuple(tuple(float(c) for c in v) for v in dirs),
        cones=cones,
        estimates=estimates,
        verdicts=verdicts,
        N_max=coeffs.N_max,
        k_min=k_min,
        k_max=default_k_max(coeffs.N_max) if k_max is None else k_max,
        half_angle=theta,
        eval_shrink=eval_shrink,
        band=band,
    )


def full_wf_map(
    source,
    points,
    eps_in: float,
    eps_out: float,
    mode: str = "decay",
    **scan_params,
) -> list:
    """Independent scans over a list of probe points, window rebuilt per point.

    Failures are collected as ScanFailure entries in place; output order
    follows input order.
    """
    if mode not in ("decay", "sobolev"):
        raise ValueError(f"mode must be decay or sobolev, not {mode!r}")
    results = []
    for p in points:
        p_arr = np.atleast_1d(np.asarray(p, dtype=float))
        w = bump_window(p_arr, eps_in, eps_out)
        try:
            if mode == "decay":
                results.append(wavefront_scan(source, p_arr, w, **scan_params))
            else:
                results.append(sobolev_wavefront_scan(source, p_arr, w, **scan_params))
        except (ValueError, RuntimeError) as exc:
            results.append(ScanFailure(x0=tuple(float(c) for c in p_arr), error=str(exc)))
    return results
