"""Weighted sequence norms, moderateness, membership, pairing, localization.

Ground truth:
- <n> = sqrt(1 + n^2), so the three-term sequence {1 at 0, 2 at +-1} has
  l^1_<n> norm 1 + 4 sqrt(2).
- Peetre: <m+n>^s <= 2^{|s|/2} <m>^s <n>^{|s|}, so the empirical constant
  of (omega, nu) = (<n>^s, <n>^{|s|}) stays below 2^{|s|/2}.
- Membership of the square-wave coefficients in l^2_{<n>^s} flips at s = 1/2.
- <delta, phi> = phi(0) for any test sequence phi.
"""
import numpy as np
import pytest

import torusfront as tf
from torusfront.spaces import effective_bandwidth


def seq(entries, N):
    """1-D CoeffArray from a {n: value} dict."""
    a = np.zeros(2 * N + 1, dtype=complex)
    for n, v in entries.items():
        a[N + n] = v
    return tf.CoeffArray(d=1, N_max=N, a=a, source="analytic")


class TestWeight:
    def test_polyweight_values(self):
        w = tf.polyweight(1.0)
        assert w(np.array(0.0)) == 1.0
        assert abs(w(np.array(1.0)) - np.sqrt(2.0)) < 1e-15
        assert abs(w(np.array(-2.0)) - np.sqrt(5.0)) < 1e-15

    def test_tabulated_lookup(self):
        w = tf.Weight(kind="tabulated", table={(0,): 1.0, (1,): 3.0, (-1,): 3.0})
        assert w(np.array(1.0)) == 3.0

    def test_tabulated_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            tf.Weight(kind="tabulated", table={(0,): 0.0})

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            tf.Weight(kind="callable")


class TestModerate:
    @pytest.mark.parametrize("s", [-3, -2, -1, 1, 2, 3])
    def test_peetre_constant_bound(self, s):
        rep = tf.is_nu_moderate(tf.polyweight(float(s)), tf.polyweight(float(abs(s))), 50, d=1)
        bound = 2.0 ** (abs(s) / 2.0)
        assert rep.C_hat <= bound + 1e-12, f"C_hat {rep.C_hat:.6f} exceeds {bound:.6f} at s={s}"
        assert not rep.growing

    def test_exponential_weight_grows(self):
        R = 30
        table = {(int(n),): float(np.exp(abs(n))) for n in range(-2 * R, 2 * R + 1)}
        om = tf.Weight(kind="tabulated", table=table)
        rep = tf.is_nu_moderate(om, tf.polyweight(3.0), R, d=1)
        assert rep.growing, "e^{|n|} must not look <n>^3-moderate"

    def test_rejects_bad_radius(self):
        with pytest.raises(ValueError):
            tf.is_nu_moderate(tf.polyweight(1.0), tf.polyweight(1.0), 0, d=1)


class TestWeightedNorm:
    def test_unit_sequence(self):
        assert tf.weighted_norm(seq({0: 1.0}, 4), tf.polyweight(2.0), 1) == 1.0

    def test_three_term_example(self):
        got = tf.weighted_norm(seq({0: 1.0, 1: 2.0, -1: 2.0}, 4), tf.polyweight(1.0), 1)
        assert abs(got - (1.0 + 4.0 * np.sqrt(2.0))) < 1e-14

    def test_sup_norm(self):
        got = tf.weighted_norm(seq({0: 1.0, 2: 3.0}, 4), tf.polyweight(0.0), np.inf)
        assert got == 3.0

    def test_cone_restriction(self):
        c = seq({-2: 5.0, 3: 1.0}, 8)
        pos = tf.Cone(axis=(1.0,), half_angle=0.5)
        assert tf.weighted_norm(c, tf.polyweight(0.0), np.inf, cone=pos) == 1.0

    def test_monotone_in_nmax(self, rng):
        a = rng.normal(size=65) + 1j * rng.normal(size=65)
        c = tf.CoeffArray(d=1, N_max=32, a=a, source="analytic")
        w = tf.polyweight(0.7)
        norms = [tf.weighted_norm(c.crop(N), w, 2) for N in (8, 16, 24, 32)]
        assert all(n1 <= n2 + 1e-15 for n1, n2 in zip(norms, norms[1:]))

    def test_lq_inclusion_on_fixed_box(self, rng):
        # q1 <= q2 and omega2 <= omega1 pointwise: norms can only shrink
        a = rng.normal(size=33) + 1j * rng.normal(size=33)
        c = tf.CoeffArray(d=1, N_max=16, a=a, source="analytic")
        lo = tf.weighted_norm(c, tf.polyweight(-1.0), 2)
        hi = tf.weighted_norm(c, tf.polyweight(1.0), 1)
        assert lo <= hi

    def test_rejects_q_below_one(self):
        with pytest.raises(ValueError):
            tf.weighted_norm(seq({0: 1.0}, 2), tf.polyweight(0.0), 0.5)


class TestMembership:
    def test_summable_tail_convergent(self):
        src = lambda N: seq({n: 1.0 / (1.0 + n * n) for n in range(-N, N + 1)}, N)
        rep = tf.membership_estimate(src, tf.polyweight(0.0), 2)
        assert rep.verdict == "convergent"

    def test_delta_against_growing_weight(self):
        src = lambda N: seq({n: 1.0 for n in range(-N, N + 1)}, N)
        rep = tf.membership_estimate(src, tf.polyweight(1.0), 2)
        assert rep.verdict == "divergent"

    def test_delta_against_decaying_weight(self):
        # sum <n>^{-2} converges: the boundary case lands convergent
        src = lambda N: seq({n: 1.0 for n in range(-N, N + 1)}, N)
        rep = tf.membership_estimate(src, tf.polyweight(-1.0), 2)
        assert rep.verdict == "convergent"

    @pytest.mark.parametrize("s,verdict", [(0.3, "convergent"), (0.7, "divergent")])
    def test_square_wave_flips_at_half(self, s, verdict):
        c = tf.classical_coeffs(tf.TestDistribution(kind="square_wave_1d", location=(0.5,)), 512)
        rep = tf.membership_estimate(c, tf.polyweight(s), 2)
        assert rep.verdict == verdict, f"s={s}: got {rep.verdict}, norms {rep.norms}"

    def test_coeff_array_too_small(self):
        c = seq({0: 1.0}, 32)
        with pytest.raises(ValueError):
            tf.membership_estimate(c, tf.polyweight(0.0), 2)


class TestDualPairing:
    def test_unit_sequences(self):
        f = seq({1: 1.0}, 4)
        phi = seq({-1: 1.0}, 4)
        assert tf.dual_pairing(f, phi) == 1.0

    def test_delta_pairing_evaluates(self):
        w = tf.bump_window((0.5,), 0.05, 0.25)
        dc = tf.classical_coeffs(tf.TestDistribution(kind="delta", location=(0.5,)), 128)
        phi = tf.window_coefficients(w, 128)
        got = tf.dual_pairing(dc, phi)
        assert abs(got - 1.0) < 1e-8, f"<delta, phi> = phi(1/2) = 1, got {got}"

    def test_smooth_pairing_matches_quadrature(self):
        g = tf.make_grid(1, 512)
        f_fun = lambda x: np.cos(2 * np.pi * x) + 0.5 * np.sin(4 * np.pi * x)
        p_fun = lambda x: np.exp(np.cos(2 * np.pi * x))
        f = tf.fourier_coefficients(tf.sample(f_fun, g), 100)
        phi = tf.fourier_coefficients(tf.sample(p_fun, g), 100)
        x = g.axes()[0]
        integral = np.mean(f_fun(x) * p_fun(x))
        assert abs(tf.dual_pairing(f, phi) - integral) < 1e-8

    def test_dimension_mismatch(self):
        f = seq({0: 1.0}, 2)
        phi = tf.CoeffArray(d=2, N_max=2, a=np.ones((5, 5), complex), source="analytic")
        with pytest.raises(ValueError):
            tf.dual_pairing(f, phi)


class TestLocalize:
    def test_constant_gives_window_coefficients(self):
        w = tf.bump_window((0.5,), 0.05, 0.25)
        e0 = seq({0: 1.0}, 128)
        out = tf.localize(e0, w, N_out=40)
        wc = tf.window_coefficients(w, 128)
        assert np.max(np.abs(out.a - wc.crop(40).a)) < 1e-12

    def test_plateau_delta_passthrough(self):
        # phi = 1 near the point, so phi*delta keeps the delta's coefficients
        w = tf.bump_window((0.5,), 0.05, 0.25)
        dc = tf.classical_coeffs(tf.TestDistribution(kind="delta", location=(0.5,)), 128)
        out = tf.localize(dc, w, N_out=40)
        assert np.max(np.abs(out.a - dc.crop(40).a)) < 1e-5

    def test_starvation_error_names_requirement(self):
        w = tf.bump_window((0.5,), 0.05, 0.25)
        dc = tf.classical_coeffs(tf.TestDistribution(kind="delta", location=(0.5,)), 128)
        with pytest.raises(ValueError, match="starvation"):
            tf.localize(dc, w, N_out=120)

    def test_norm_bound_random_inputs(self, rng):
        # ||phi f|| <= C_hat ||phi||_{l1_nu} ||f|| with omega = <n>^{-1}, nu = <n>
        om, nu = tf.polyweight(-1.0), tf.polyweight(1.0)
        w = tf.bump_window((0.5,), 0.05, 0.25)
        wc = tf.window_coefficients(w, 128)
        C_hat = tf.is_nu_moderate(om, nu, 50, d=1).C_hat
        w_norm = tf.weighted_norm(wc, nu, 1)
        for _ in range(25):
            b = int(rng.integers(2, 31))
            a = np.zeros(257, dtype=complex)
            a[128 - b : 128 + b + 1] = rng.normal(size=2 * b + 1) + 1j * rng.normal(size=2 * b + 1)
            f = tf.CoeffArray(d=1, N_max=128, a=a, source="analytic")
            lhs = tf.weighted_norm(tf.localize(f, w), om, 2)
            rhs = C_hat * w_norm * tf.weighted_norm(f, om, 2)
            assert lhs <= rhs * (1 + 1e-12), f"localization bound broken: {lhs} > {rhs}"


class TestEffectiveBandwidth:
    def test_band_limited_support(self):
        a = np.zeros(41, dtype=complex)
        a[20 - 3 : 20 + 4] = 1.0
        c = tf.CoeffArray(d=1, N_max=20, a=a, source="analytic")
        assert effective_bandwidth(c) == 3

    def test_zero_sequence(self):
        c = tf.CoeffArray(d=1, N_max=8, a=np.zeros(17, complex), source="analytic")
        assert effective_bandwidth(c) == 0

    def test_window_bandwidth_below_box(self):
        w = tf.bump_window((0.5,), 0.05, 0.25)
        wc = tf.window_coefficients(w, 128)
        bw = effective_bandwidth(wc)
        assert 0 < bw < 128
