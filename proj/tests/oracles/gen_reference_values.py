#!/usr/bin/env python3
"""Regenerates tests/unit/reference_values.hpp with mpmath.

Every value here is computed independently of the C++ code: incomplete
gamma and Ei from mpmath, Meijer G from mpmath.meijerg, and the outage and
rate references by direct numerical integration over the user position.
"""
import sys
from pathlib import Path

import mpmath as mp

mp.mp.dps = 40

# Default scenario: h = 10, R_m = 10, R_d = 20, alpha = 3, splits 0.75 / 0.25,
# R = 1.5 BPCU, unit noise.
h, R_m, R_d, alpha = mp.mpf(10), mp.mpf(10), mp.mpf(20), mp.mpf(3)
a_far, a_near = mp.mpf("0.75"), mp.mpf("0.25")
eps = 2 ** mp.mpf("1.5") - 1
l_m, l_d = mp.sqrt(h**2 + R_m**2), mp.sqrt(h**2 + R_d**2)


def rho(db):
    return mp.mpf(10) ** (mp.mpf(db) / 10)


def v_far(db):
    return eps / (rho(db) * (a_far - a_near * eps))


def v_near(db):
    return eps / (rho(db) * a_near)


def outage(V, m, lo, hi):
    # P(Z < V d^alpha) with Z ~ Exp(mean m/2), averaged over d^2 uniform.
    f = lambda x: (1 - mp.exp(-2 / m * V * x**alpha)) * 2 * x / (hi**2 - lo**2)
    return mp.quad(f, [lo, hi])


def log1p_exp_mean(s):
    # E ln(1 + s Y), Y ~ Exp(1)
    return mp.exp(1 / s) * mp.e1(1 / s)


def near_rate(db, m):
    f = lambda v: log1p_exp_mean(rho(db) * a_near * (m / 2) * v ** (-alpha / 2)) / R_m**2
    return mp.quad(f, [h**2, l_m**2]) / mp.log(2)


def far_rate(db, m):
    def f(v):
        s1 = rho(db) * (m / 2) * v ** (-alpha / 2)
        return (log1p_exp_mean(s1) - log1p_exp_mean(s1 * a_near)) / (R_d**2 - R_m**2)
    return mp.quad(f, [l_m**2, l_d**2]) / mp.log(2)


def meijer(z):
    return mp.meijerg([[-1, 0], [mp.mpf(2) / 3]], [[-mp.mpf(1) / 3, 0], []], z)


def j_integral(c):
    f = lambda x: x ** (-mp.mpf(2) / 3) * mp.gammainc(mp.mpf(5) / 3, 0, c * x) / (1 + x)
    return mp.quad(f, [0, 1, mp.inf])


def laplace_annulus(phi, lam, r0, RI, a):
    f = lambda r: (1 - mp.exp(-phi * r ** (-a))) * r
    return mp.exp(-lam * 2 * mp.pi * mp.quad(f, [r0, 10 * r0, RI]))


values = []


def add(name, v):
    values.append((name, mp.nstr(v, 20, min_fixed=-mp.inf, max_fixed=mp.inf)))


add("gamma_half_1", mp.gammainc(0.5, 0, 1))
add("gamma_third_1e_6", mp.gammainc(mp.mpf(1) / 3, 0, mp.mpf("1e-6")))
add("gamma_half_0p1", mp.gammainc(0.5, 0, mp.mpf("0.1")))
add("gamma_5_3_2p5", mp.gammainc(mp.mpf(5) / 3, 0, mp.mpf("2.5")))
add("gamma_2_3_40", mp.gammainc(mp.mpf(2) / 3, 0, 40))
add("ei_m1", mp.ei(-1))
add("ei_m10", mp.ei(-10))
add("ei_m0p01", mp.ei(mp.mpf("-0.01")))
add("ei_m50", mp.ei(-50))
add("ei_1", mp.ei(1))
add("ei_5", mp.ei(5))
add("ei_60", mp.ei(60))
add("scaled_e1_1e_3", mp.exp(mp.mpf("1e-3")) * mp.e1(mp.mpf("1e-3")))
add("scaled_e1_2", mp.exp(2) * mp.e1(2))
add("scaled_e1_1e3", mp.exp(1000) * mp.e1(1000))
for tag, z in [("1e_3", "1e-3"), ("1e_1", "0.1"), ("1", "1"), ("10", "10"), ("1e3", "1e3"), ("1e4", "1e4")]:
    add("meijer_" + tag, meijer(mp.mpf(z)))
add("j_integral_1", j_integral(1))
add("j_integral_0p01", j_integral(mp.mpf("0.01")))
add("laplace_annulus_phi_1e_3", laplace_annulus(mp.mpf("1e-3"), mp.mpf("1e-4"), 1, 1000, 3))
add("laplace_annulus_phi_10", laplace_annulus(mp.mpf(10), mp.mpf("1e-4"), 1, 1000, 3))
add("outage_far_60db_m1", outage(v_far(60), 1, l_m, l_d))
add("outage_near_60db_m1", outage(max(v_far(60), v_near(60)), 1, h, l_m))
add("outage_far_50db_m2", outage(v_far(50), 2, l_m, l_d))
add("outage_near_40db_m1", outage(max(v_far(40), v_near(40)), 1, h, l_m))
add("near_rate_60db_m1", near_rate(60, 1))
add("near_rate_40db_m1", near_rate(40, 1))
add("near_rate_60db_m2", near_rate(60, 2))
add("far_rate_60db_m1", far_rate(60, 1))

out = ["#pragma once", "", "// Generated by tests/oracles/gen_reference_values.py (mpmath, 40 digits).", "",
       "namespace ref {", ""]
for name, v in values:
    out.append(f"inline constexpr double {name} = {v};")
out += ["", "}  // namespace ref", ""]
target = Path(__file__).resolve().parent.parent / "unit" / "reference_values.hpp"
target.write_text("\n".join(out))
print(f"wrote {len(values)} values to {target}", file=sys.stderr)
