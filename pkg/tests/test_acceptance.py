"""Acceptance gate: ten end-to-end criteria, one PASS/FAIL line each.

Every criterion runs at the parameters fixed for the whole project: scan
window plateau 0.05 / support 0.25 (swap variant 0.15), N_max = 256 with
dyadic shells k = 3..7, 72 directions of 10-degree cones in d = 2, decay
threshold 1.6, Gaussian width 0.01, membership ladder up to a 512 box.
The verdict table is printed by the conftest terminal-summary hook.
"""
import functools
import json
import subprocess
import sys

import numpy as np
import pytest

import torusfront as tf
from conftest import ACCEPTANCE_LINES

CMD = [sys.executable, "-m", "torusfront.cli"]
N_THR = 1.6
BAND = 0.05
STEP_DEG = 5.0  # 72-direction grid spacing

DISTS = {
    "delta": tf.TestDistribution(kind="delta", location=(0.5,)),
    "square": tf.TestDistribution(kind="square_wave_1d", location=(0.5,)),
    "kink": tf.TestDistribution(kind="kink_1d", location=(0.5,)),
    "gaussian": tf.TestDistribution(kind="gaussian_smooth", location=(0.5,), width=0.01),
}
EDGE = tf.TestDistribution(
    kind="halfplane_edge_2d", location=(0.5, 0.5), direction=(1.0, 0.0)
)
CONES_1D = (
    tf.Cone(axis=(1.0,), half_angle=np.pi / 4),
    tf.Cone(axis=(-1.0,), half_angle=np.pi / 4),
)


def criterion(num, title):
    """Record one PASS/FAIL acceptance line, then assert."""

    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                ok, detail = fn(*args, **kwargs)
            except Exception as exc:
                ACCEPTANCE_LINES.append(f"FAIL criterion {num}: {title} - error: {exc}")
                raise
            word = "PASS" if ok else "FAIL"
            ACCEPTANCE_LINES.append(f"{word} criterion {num}: {title} - {detail}")
            assert ok, f"criterion {num} ({title}): {detail}"

        return wrapper

    return deco


@pytest.fixture(scope="module")
def oracle_256():
    """Windowed coefficients of the four 1-D oracles at the base window."""
    w = tf.bump_window((0.5,), 0.05, 0.25)
    return {name: tf.analytic_coeffs(dist, w, 256) for name, dist in DISTS.items()}


@pytest.fixture(scope="module")
def edge_base_report(edge_windowed_256):
    w = tf.bump_window((0.5, 0.5), 0.05, 0.25)
    return tf.wavefront_scan(edge_windowed_256, (0.5, 0.5), w, N_thr=N_THR, N_max=256)


def flag_angles(report):
    """Flagged directions as sorted angles in degrees."""
    out = []
    for v in report.singular_directions:
        out.append(round(float(np.degrees(np.arctan2(v[1], v[0])) % 360.0), 6))
    return tuple(sorted(out))


def circ_dist(a, b):
    return abs((a - b + 180.0) % 360.0 - 180.0)


def edge_precision_recall(angles):
    normals = (0.0, 180.0)
    tol = STEP_DEG + 1e-9
    precision = all(min(circ_dist(a, t) for t in normals) <= tol for a in angles)
    recall = all(any(circ_dist(a, t) <= tol for a in angles) for t in normals)
    return precision, recall


def decay_verdicts(coeffs):
    return tuple(
        "singular" if tf.directional_decay(coeffs, c).t < N_THR else "regular"
        for c in CONES_1D
    )


def random_coeffs(rng, N, d=1, integer=False):
    side = (2 * N + 1,) * d
    if integer:
        a = rng.integers(-5, 6, side).astype(complex) + 1j * rng.integers(-5, 6, side)
    else:
        a = rng.standard_normal(side) + 1j * rng.standard_normal(side)
    return tf.CoeffArray(d=d, N_max=N, a=a, source="analytic")


def pad_to(c, N):
    return tf.CoeffArray(d=c.d, N_max=N, a=np.pad(c.a, N - c.N_max), source="analytic")


class TestAcceptance:
    @criterion(1, "band-limited round trip, relative error <= 1e-12")
    def test_criterion_01(self, rng):
        worst = 0.0
        for d in (1, 2):
            for M in (64, 256):
                c = random_coeffs(rng, M // 4, d=d)
                fld = tf.synthesize(c, tf.Grid(d=d, M=M))
                back = tf.fourier_coefficients(fld, M // 4)
                rel = float(np.max(np.abs(back.a - c.a)) / np.max(np.abs(c.a)))
                worst = max(worst, rel)
        return worst <= 1e-12, f"worst relative error {worst:.2e} over d in {{1,2}}, M in {{64,256}}"

    @criterion(2, "decay orders: delta 0, jump 1, kink 2, Gaussian >= 8")
    def test_criterion_02(self, oracle_256):
        t = {
            name: tuple(tf.directional_decay(oracle_256[name], c).t for c in CONES_1D)
            for name in DISTS
        }
        checks = (
            all(abs(v - 0.0) <= 0.1 for v in t["delta"]),
            all(abs(v - 1.0) <= 0.1 for v in t["square"]),
            all(abs(v - 2.0) <= 0.1 for v in t["kink"]),
            all(v >= 8.0 for v in t["gaussian"]),
        )
        detail = (
            f"t(delta)={t['delta'][0]:.3f}, t(jump)={t['square'][0]:.3f}, "
            f"t(kink)={t['kink'][0]:.3f}, t(gaussian)={t['gaussian'][0]:.2f}"
        )
        return all(checks), detail

    @criterion(3, "edge geometry: both normals, nothing else, off-edge clean")
    def test_criterion_03(self, edge_base_report):
        angles = flag_angles(edge_base_report)
        precision, recall = edge_precision_recall(angles)
        off_empty = []
        for x0 in ((0.25, 0.5), (0.75, 0.5)):
            w = tf.bump_window(x0, 0.05, 0.25)
            c = tf.analytic_coeffs(EDGE, w, 256)
            rep = tf.wavefront_scan(c, x0, w, N_thr=N_THR, N_max=256)
            off_empty.append(len(rep.singular_directions) == 0)
        ok = precision and recall and all(off_empty)
        detail = (
            f"flagged {angles} deg, precision={precision}, recall={recall}, "
            f"off-edge empty={off_empty}"
        )
        return ok, detail

    @criterion(4, "critical orders 0.5/1.5/-0.5 and membership flips at s* -/+ 0.2")
    def test_criterion_04(self, oracle_256):
        s_hat = {
            name: tf.sobolev_order(oracle_256[name], CONES_1D[0]).s_star
            for name in ("square", "kink", "delta")
        }
        order_ok = (
            abs(s_hat["square"] - 0.5) <= 0.1
            and abs(s_hat["kink"] - 1.5) <= 0.15
            and abs(s_hat["delta"] + 0.5) <= 0.1
        )
        flips = {}
        for name, s_true in (("square", 0.5), ("kink", 1.5), ("delta", -0.5)):
            c512 = tf.classical_coeffs(DISTS[name], 512)
            below = tf.membership_estimate(c512, tf.polyweight(s_true - 0.2), 2.0)
            above = tf.membership_estimate(c512, tf.polyweight(s_true + 0.2), 2.0)
            flips[name] = (below.verdict, above.verdict)
        flips_ok = all(v == ("convergent", "divergent") for v in flips.values())
        detail = (
            f"s*(jump)={s_hat['square']:.3f}, s*(kink)={s_hat['kink']:.3f}, "
            f"s*(delta)={s_hat['delta']:.3f}; flips={flips}"
        )
        return order_ok and flips_ok, detail

    @criterion(5, "convolution matches product fields (1e-10) and brute force (exact)")
    def test_criterion_05(self, rng):
        grid = tf.Grid(d=1, M=256)
        worst = 0.0
        for _ in range(100):
            b1, b2 = int(rng.integers(2, 33)), int(rng.integers(2, 33))
            c1, c2 = random_coeffs(rng, b1), random_coeffs(rng, b2)
            N = b1 + b2
            conv = tf.coeff_convolution(pad_to(c1, N), pad_to(c2, N), N)
            f1, f2 = tf.synthesize(c1, grid), tf.synthesize(c2, grid)
            prod = tf.SampledField(grid=grid, values=f1.values * f2.values)
            ref = tf.fourier_coefficients(prod, N)
            rel = float(np.max(np.abs(conv.a - ref.a)) / np.max(np.abs(ref.a)))
            worst = max(worst, rel)
        exact = 0
        for _ in range(20):
            c1 = random_coeffs(rng, 4, integer=True)  # 9 support points each
            c2 = random_coeffs(rng, 4, integer=True)
            N = 8
            conv = tf.coeff_convolution(pad_to(c1, N), pad_to(c2, N), N)
            brute = np.zeros(2 * N + 1, dtype=complex)
            for n in range(-N, N + 1):
                brute[n + N] = sum(
                    c1.get((n - j,)) * c2.get((j,)) for j in range(-4, 5)
                )
            exact += int(np.array_equal(conv.a, brute))
        ok = worst <= 1e-10 and exact == 20
        return ok, f"worst field-route error {worst:.2e}; {exact}/20 brute-force exact"

    @criterion(6, "Young bound over 100 pairs x 3 exponent triples")
    def test_criterion_06(self, rng):
        omega, nu = tf.polyweight(-1.0), tf.polyweight(1.0)
        violations, total = 0, 0
        for q1, q2 in ((1.0, 1.0), (1.0, 2.0), (2.0, 1.0)):
            for _ in range(100):
                rep = tf.young_bound_check(
                    random_coeffs(rng, 16), random_coeffs(rng, 16), omega, nu, q1, q2
                )
                total += 1
                violations += int(not rep.bound_holds)
        return violations == 0, f"{violations}/{total} violations"

    @criterion(7, "localization norm bound over 100 random inputs")
    def test_criterion_07(self, rng, base_window):
        omega, nu = tf.polyweight(-1.0), tf.polyweight(1.0)
        C_hat = tf.is_nu_moderate(omega, nu, 50, d=1).C_hat
        phi_norm = tf.weighted_norm(
            tf.window_coefficients(base_window, 256), nu, 1.0
        )
        violations = 0
        for _ in range(100):
            f = random_coeffs(rng, 128)
            lhs = tf.weighted_norm(tf.localize(f, base_window), omega, 2.0)
            rhs = C_hat * phi_norm * tf.weighted_norm(f, omega, 2.0)
            violations += int(lhs > rhs * (1.0 + 1e-12))
        return violations == 0, f"{violations}/100 violations (C_hat={C_hat:.3f})"

    @criterion(8, "Peetre constants within 2^(|s|/2); exponential weight flagged")
    def test_criterion_08(self):
        worst_margin = -np.inf
        peetre_ok = True
        for s in range(-3, 4):
            rep = tf.is_nu_moderate(tf.polyweight(s), tf.polyweight(abs(s)), 50, d=1)
            bound = 2.0 ** (abs(s) / 2.0)
            peetre_ok = peetre_ok and rep.C_hat <= bound + 1e-12 and not rep.growing
            worst_margin = max(worst_margin, rep.C_hat / bound)
        table = {
            (int(k),): float(np.exp(0.1 * abs(k))) for k in range(-100, 101)
        }
        exp_w = tf.Weight(kind="tabulated", table=table)
        exp_rep = tf.is_nu_moderate(exp_w, exp_w, 50, d=1)
        ok = peetre_ok and exp_rep.growing
        detail = (
            f"max C_hat/bound = {worst_margin:.4f} over s in -3..3; "
            f"exponential verdict: {exp_rep.verdict}"
        )
        return ok, detail

    @criterion(9, "verdicts invariant under window swap and modulation by |m| = 4")
    def test_criterion_09(self, oracle_256, edge_windowed_256, edge_base_report):
        w_base = tf.bump_window((0.5,), 0.05, 0.25)
        w_swap = tf.bump_window((0.5,), 0.05, 0.15)
        mismatches = []

        # decay and Sobolev verdicts on the four 1-D oracles
        margins = {"square": (0.0, 1.0), "kink": (1.0, 3.0), "delta": (-1.0, 0.0)}
        for name, dist in DISTS.items():
            base = oracle_256[name]
            variants = {
                "swap": tf.analytic_coeffs(dist, w_swap, 256),
                "mod+4": tf.modulate(base, (4,)),
                "mod-4": tf.modulate(base, (-4,)),
            }
            base_decay = decay_verdicts(base)
            for label, c in variants.items():
                if decay_verdicts(c) != base_decay:
                    mismatches.append(f"decay:{name}/{label}")
            if name in margins:
                s_lo, s_hi = margins[name]
                base_est = tf.sobolev_order(base, CONES_1D[0])
                base_sob = (base_est.verdict(s_lo, BAND), base_est.verdict(s_hi, BAND))
                for label, c in variants.items():
                    est = tf.sobolev_order(c, CONES_1D[0])
                    if (est.verdict(s_lo, BAND), est.verdict(s_hi, BAND)) != base_sob:
                        mismatches.append(f"sobolev:{name}/{label}")

        # edge singular set
        base_angles = flag_angles(edge_base_report)
        w2_base = tf.bump_window((0.5, 0.5), 0.05, 0.25)
        w2_swap = tf.bump_window((0.5, 0.5), 0.05, 0.15)
        edge_variants = {
            "swap": (tf.analytic_coeffs(EDGE, w2_swap, 256), w2_swap),
            "mod+4": (tf.modulate(edge_windowed_256, (4, 0)), w2_base),
        }
        for label, (c, w) in edge_variants.items():
            rep = tf.wavefront_scan(c, (0.5, 0.5), w, N_thr=N_THR, N_max=256)
            if flag_angles(rep) != base_angles:
                mismatches.append(f"edge:{label}")

        # membership verdicts under modulation
        for name, s_true in (("square", 0.5), ("kink", 1.5), ("delta", -0.5)):
            c512 = tf.classical_coeffs(DISTS[name], 512)
            def pair(c):
                return (
                    tf.membership_estimate(c, tf.polyweight(s_true - 0.2), 2.0).verdict,
                    tf.membership_estimate(c, tf.polyweight(s_true + 0.2), 2.0).verdict,
                )
            base_pair = pair(c512)
            for m in (4, -4):
                if pair(tf.modulate(c512, (m,))) != base_pair:
                    mismatches.append(f"membership:{name}/mod{m:+d}")

        ok = not mismatches
        detail = "all verdict blocks stable" if ok else f"mismatches: {mismatches}"
        return ok, detail

    @criterion(10, "identical configurations produce byte-identical reports")
    def test_criterion_10(self):
        scenarios = (
            ("analyze", "wf", "--dist", "square", "--location", "0.5",
             "--x0", "0.5", "--threshold", "1.6"),
            ("analyze", "sobolev", "--dist", "square", "--location", "0.5",
             "--x0", "0.5", "--order", "0.6", "--band", "0.05"),
        )
        stable = []
        for args in scenarios:
            a = subprocess.run(CMD + list(args), capture_output=True)
            b = subprocess.run(CMD + list(args), capture_output=True)
            json.loads(a.stdout.decode())  # must also be valid JSON
            stable.append(a.stdout == b.stdout and a.stdout != b"")
        return all(stable), f"{sum(stable)}/{len(scenarios)} scenarios byte-identical"
