"""Products of periodic distributions via coefficient convolution.

The product of two coefficient sequences is their convolution; on truncated
boxes the sum runs over the available index range only, so results carry a
reliable radius and per-entry flags where the neglected tail is not provably
small.  Local products multiply both factors by one cut-off window first and
are trustworthy on its plateau.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .coeffs import CoeffArray, analytic_coeffs, fourier_coefficients
from .grid import CutoffWindow, Grid, SampledField, periodize
from .spaces import Weight, effective_bandwidth, is_nu_moderate, weighted_norm

__all__ = [
    "ProductReport",
    "coeff_convolution",
    "truncation_flags",
    "local_product",
    "young_exponent",
    "sobolev_index_gate",
    "young_bound_check",
]

FFT_ROUTE_MIN_SIDE = 64  # direct double sum below this per-axis box size
CROSS_CHECK_RTOL = 1e-12
TAIL_FLAG_LEVEL = 1e-8


@dataclass(frozen=True)
class ProductReport:
    """Convolution product plus the bookkeeping that makes it honest.

    reliable_radius bounds the box where truncation error is controlled;
    norms/C_hat/exponents are filled by young_bound_check.
    """

    coeffs: CoeffArray
    reliable_radius: int
    tail_flags: np.ndarray | None = None
    norms: tuple = ()  # (|f1|, |f2|, |f1 f2|)
    C_hat: float = float("nan")
    bound_holds: bool | None = None
    exponents: tuple = ()  # (q1, q2, q)


def coeff_convolution(f1: CoeffArray, f2: CoeffArray, N_out: int) -> CoeffArray:
    """Truncated convolution (f1 f2)_n = sum_j f1_{n-j} f2_j over available j.

    Entries use every index pair both boxes provide; terms outside either box
    are dropped.  Use truncation_flags to locate entries where the dropped
    in-box mass is not provably below 1e-8.
    """
    if f1.d != f2.d:
        raise ValueError(f"dimension mismatch: {f1.d} vs {f2.d}")
    if N_out > min(f1.N_max, f2.N_max):
        raise ValueError(
            f"output radius {N_out} exceeds both input boxes "
            f"({f1.N_max}, {f2.N_max}); shrink N_out"
        )
    full = _convolve_full(f1.a, f2.a)
    center = f1.N_max + f2.N_max
    sl = tuple(slice(center - N_out, center + N_out + 1) for _ in range(f1.d))
    return CoeffArray(d=f1.d, N_max=N_out, a=np.ascontiguousarray(full[sl]), source="analytic")


def _convolve_full(a1: np.ndarray, a2: np.ndarray) -> np.ndarray:
    """Full zero-padded convolution; FFT route cross-checked against the sum."""
    if min(a1.shape) >= FFT_ROUTE_MIN_SIDE or min(a2.shape) >= FFT_ROUTE_MIN_SIDE:
        out = fftconvolve(a1.astype(complex), a2.astype(complex), mode="full")
        _cross_check(a1, a2, out)
        return out
    return _convolve_direct(a1, a2)


def _convolve_direct(a1: np.ndarray, a2: np.ndarray) -> np.ndarray:
    shape = tuple(s1 + s2 - 1 for s1, s2 in zip(a1.shape, a2.shape))
    out = np.zeros(shape, dtype=complex)
    for idx in np.ndindex(*a2.shape):
        sl = tuple(slice(i, i + s) for i, s in zip(idx, a1.shape))
        out[sl] += a1 * a2[idx]
    return out


def _direct_entry(a1: np.ndarray, a2: np.ndarray, k: tuple) -> complex:
    """One entry of the full convolution by explicit summation."""
    sl1, sl2 = [], []
    for ax, kk in enumerate(k):
        j_lo = max(0, kk - (a1.shape[ax] - 1))
        j_hi = min(a2.shape[ax] - 1, kk)
        sl2.append(slice(j_lo, j_hi + 1))
        # a1 index k-j runs downward as j ascends: slice then reverse
        sl1.append(slice(kk - j_hi, kk - j_lo + 1))
    block1 = a1[tuple(sl1)][tuple(slice(None, None, -1) for _ in k)]
    return complex(np.sum(block1 * a2[tuple(sl2)]))


def _cross_check(a1: np.ndarray, a2: np.ndarray, out: np.ndarray) -> None:
    """Probe the FFT result against direct sums at center/corner/mid entries."""
    scale = float(np.max(np.abs(out)))
    if scale == 0.0:
        return
    coords = [sorted({0, s // 2, s - 1}) for s in out.shape]
    mesh = np.meshgrid(*coords, indexing="ij")
    probes = np.stack([m.ravel() for m in mesh], axis=-1)
    for k in probes:
        ref = _direct_entry(a1, a2, tuple(int(v) for v in k))
        if abs(out[tuple(k)] - ref) > CROSS_CHECK_RTOL * scale:
            raise RuntimeError(
                f"convolution routes disagree at {tuple(int(v) for v in k)}: "
                f"|{out[tuple(k)]:.3e} - {ref:.3e}| > {CROSS_CHECK_RTOL:g} * {scale:.3e}"
            )


def truncation_flags(f1: CoeffArray, f2: CoeffArray, N_out: int) -> np.ndarray:
    """Mark output entries whose dropped in-box terms may exceed 1e-8.

    For an output index n the available sum covers |j| <= N_small with
    |n - j| <= N_big; dropped in-box terms all have |j| >= N_big - |n| + 1.
    Bound their total by sup|f_big| times the l1 mass of f_small at those
    radii (box norms throughout).
    """
    big, small = (f1, f2) if f1.N_max >= f2.N_max else (f2, f1)
    sup_big = float(np.max(np.abs(big.a)))
    axes_small = small.lattice_axes()
    mesh_s = np.meshgrid(*axes_small, indexing="ij")
    r_small = np.max(np.abs(np.stack(mesh_s)), axis=0)
    mag_small = np.abs(small.a)
    n = np.arange(-N_out, N_out + 1)
    mesh_o = np.meshgrid(*([n] * f1.d), indexing="ij")
    out_r = np.max(np.abs(np.stack(mesh_o)), axis=0)
    flags = np.zeros(out_r.shape, dtype=bool)
    for rv in np.unique(out_r):
        dropped = float(np.sum(mag_small[r_small >= big.N_max - rv + 1]))
        flags[out_r == rv] = sup_big * dropped > TAIL_FLAG_LEVEL
    return flags


def local_product(
    f1,
    f2,
    x0,
    window: CutoffWindow,
    N_max: int,
    grid: Grid | None = None,
) -> ProductReport:
    """Product of the two inputs localized by one window around x0.

    Each factor is ingested (sampled field -> windowed FFT coefficients,
    analytic distribution -> exact/quadrature coefficients, coefficient box
    -> cropped), the boxes are convolved, and the synthesized result is
    trustworthy on the window plateau up to the reliable radius.
    """
    x0_arr = np.atleast_1d(np.asarray(x0, dtype=float))
    off = np.abs(_wrap_all(x0_arr - np.asarray(window.x0)))
    if np.max(off) > window.eps_in + 1e-12:
        raise ValueError(
            f"plateau mismatch: x0 offset {np.max(off):.4f} from window center "
            f"exceeds eps_in = {window.eps_in:g}"
        )
    c1 = _ingest(f1, window, N_max, grid)
    c2 = _ingest(f2, window, N_max, grid)
    out = coeff_convolution(c1, c2, N_max)
    bw = min(effective_bandwidth(c1), effective_bandwidth(c2))
    return ProductReport(
        coeffs=out,
        reliable_radius=max(N_max - bw, 0),
        tail_flags=truncation_flags(c1, c2, N_max),
    )


def _wrap_all(u: np.ndarray) -> np.ndarray:
    return (u + 0.5) % 1.0 - 0.5


def _ingest(f, window: CutoffWindow, N_max: int, grid: Grid | None) -> CoeffArray:
    if isinstance(f, CoeffArray):
        return f if f.N_max == N_max else f.crop(N_max)
    if isinstance(f, SampledField):
        return fourier_coefficients(periodize(f, window), N_max)
    return analytic_coeffs(f, window, N_max)


def young_exponent(q1: float, q2: float) -> float:
    """Solve 1/q1 + 1/q2 = 1/q + 1 for q, requiring q >= 1."""
    if q1 < 1 or q2 < 1:
        raise ValueError("exponents must be >= 1")
    inv = 1.0 / q1 + 1.0 / q2 - 1.0
    if inv < -1e-12:
        # 1/q would be negative; not even q = inf satisfies the relation
        raise ValueError(f"no q >= 1 solves 1/{q1:g} + 1/{q2:g} = 1/q + 1")
    if inv <= 1e-12:
        return float("inf")
    return 1.0 / inv


def sobolev_index_gate(s1: float, s2: float, s: float) -> None:
    """Refuse index triples outside the product-stability region.

    Products of order-s1 and order-s2 spaces land in order s only when
    s1 + s2 >= 0 and s <= min(s1, s2).
    """
    if s1 + s2 < 0:
        raise ValueError(f"refused: s1 + s2 = {s1 + s2:g} < 0")
    if s > min(s1, s2):
        raise ValueError(f"refused: s = {s:g} > min(s1, s2) = {min(s1, s2):g}")


def young_bound_check(
    f1: CoeffArray,
    f2: CoeffArray,
    omega: Weight,
    nu: Weight,
    q1: float,
    q2: float,
    R_moderate: int = 30,
) -> ProductReport:
    """Verify |f1 f2|_{q,omega} <= C_hat |f1|_{q1,omega} |f2|_{q2,nu}.

    The inputs are taken as complete sequences (zero outside their boxes), so
    the full convolution is the exact product and the check carries no
    truncation error.  q comes from the exponent relation; C_hat from the
    moderate-weight scan, which must not be growing.
    """
    if f1.d != f2.d:
        raise ValueError(f"dimension mismatch: {f1.d} vs {f2.d}")
    q = young_exponent(q1, q2)
    mod = is_nu_moderate(omega, nu, R_moderate, d=f1.d)
    if mod.growing:
        raise ValueError(
            f"weight check failed: C_hat grew from {mod.C_half:g} to {mod.C_hat:g}"
        )
    full = _convolve_full(f1.a, f2.a)
    prod = CoeffArray(
        d=f1.d, N_max=f1.N_max + f2.N_max, a=full, source="analytic"
    )
    n1 = weighted_norm(f1, omega, q1)
    n2 = weighted_norm(f2, nu, q2)
    n_prod = weighted_norm(prod, omega, q)
    holds = n_prod <= mod.C_hat * n1 * n2 * (1.0 + 1e-12)
    return ProductReport(
        coeffs=prod,
        reliable_radius=prod.N_max,
        norms=(n1, n2, n_prod),
        C_hat=mod.C_hat,
        bound_holds=bool(holds),
        exponents=(q1, q2, q),
    )
