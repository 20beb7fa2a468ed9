#!/usr/bin/env python3
"""Regenerate golden.json with mpmath. Values are computed independently of
the C++ code: closed forms, matrix exponentials and tanh-sinh quadrature."""
import json
import os

from mpmath import (mp, mpf, mpc, pi, exp, log, sqrt, gamma, loggamma, quad, pcfu,
                    expm, matrix, inf, arg, cos, sin)

mp.dps = 30


def c2(z):
    z = mpc(z)
    return [float(z.real), float(z.imag)]


out = {}

out["gl_exp"] = float(exp(1) - 1)
out["log_gamma"] = [
    {"w": c2(w), "value": c2(loggamma(w))}
    for w in (mpf("0.5"), mpc(0, "0.3"), mpc("2.5", "-1.3"), mpc("-2.7", "0.4"), mpc("7.2", "11.5"))
]
out["gauss_half_power"] = float(quad(lambda w: exp(-8 * w * w) / sqrt(w), [0, 1, inf]))

# Truncated L-type sector integral: int_0^R rho drho int_{3pi/4}^{pi} rho^{-1/2} e^{8 rho^2 sin cos} dphi.
R = mpf(3)
out["L_truncated"] = {
    "R": float(R),
    "value": float(quad(lambda ph: quad(lambda r: sqrt(r) * exp(8 * r * r * sin(ph) * cos(ph)), [0, R]),
                        [3 * pi / 4, pi])),
}
# Untruncated constant: inner radial integral in closed form.
out["L_constant"] = float(quad(lambda ph: gamma(mpf(3) / 4) / (2 * (-8 * sin(ph) * cos(ph)) ** (mpf(3) / 4)),
                               [3 * pi / 4, pi]))

out["nu_half"] = float(-log(1 - mpf("0.25")) / (2 * pi))


def box(A, L, z):
    A = mpc(A)
    M = matrix([[-1j * z, A], [A.conjugate(), 1j * z]])
    E = expm(M * L)
    T = matrix([[exp(1j * z * L) * E[0, 0], exp(1j * z * L) * E[0, 1]],
                [exp(-1j * z * L) * E[1, 0], exp(-1j * z * L) * E[1, 1]]])
    return T[0, 0], T[1, 0]


a, b = box("0.5", 2, mpf("0.3"))
out["box"] = {"A": 0.5, "L": 2.0, "z": 0.3, "a": c2(a), "b": c2(b), "r": c2(b / a)}
a, b = box("0.7", 1, mpf("-1.1"))
out["box2"] = {"A": 0.7, "L": 1.0, "z": -1.1, "a": c2(a), "b": c2(b), "r": c2(b / a)}

# Parametrix constants at m = 0.5.
m = mpf("0.5")
Lm = log(1 - m * m)
nu = -Lm / (2 * pi)
beta = sqrt(2 * nu) * exp(1j * (pi / 4 + Lm * log(2) / (2 * pi) - loggamma(1j * Lm / (2 * pi)).imag))
e1 = exp(1j * log(2) * Lm / (4 * pi))
out["pc_half"] = {
    "m": 0.5,
    "beta": c2(beta),
    "B1_0": c2(e1 * (1 - m * m) ** (-mpf(1) / 8) / beta),
    "A2_0": c2((1 - m * m) ** (-mpf(1) / 8) * exp(-3j * pi / 4) / e1 / sqrt(2)),
    "B1_1": c2(e1 * (1 - m * m) ** (mpf(3) / 8) / beta),
    "A2_m1": c2((1 - m * m) ** (mpf(3) / 8) * exp(1j * pi / 4) / e1 / sqrt(2)),
}

aw = mpf("0.5") + 1j * nu
out["weber"] = []
for aa in (aw, -aw, aw - 1):
    for y in (mpc("0.7", "0.2"), mpc(5, -4), mpc(0, 15), mpc(-13, 2), mpc(30, 0), mpc(-4, -7), mpc(8, 8)):
        out["weber"].append({"a": c2(aa), "y": c2(y), "value": c2(pcfu(aa, y))})

# Synthetic reflection coefficient r(z) = 0.6 e^{-z^2 + iz}.
def r(z):
    return mpf("0.6") * exp(-z * z + 1j * z)


def g(s):
    return log(1 - mpf("0.36") * exp(-2 * s * s))


def dg(s):
    e = mpf("0.36") * exp(-2 * s * s)
    return 4 * s * e / (1 - e)


def stieltjes(z0):
    return quad(lambda s: log(z0 - s) * dg(s), [-inf, z0 - 1, z0])


def phase(z0):
    z0 = mpf(z0)
    S = stieltjes(z0)
    nu0 = -g(z0) / (2 * pi)
    aa = S / pi + pi / 4 + loggamma(1j * nu0).imag - arg(r(z0))
    return {"z0": float(z0), "nu": float(nu0), "arg_alpha": float(aa),
            "alpha": c2(sqrt(nu0 / 2) * exp(1j * aa)), "c": c2(exp(-1j * S / (2 * pi)))}


out["synthetic"] = [phase(z) for z in ("-0.5", "0", "0.5", "0.7")]

z0 = mpf("0.3")
zs = mpc("0.2", "0.5")
ld = quad(lambda s: g(s) / (s - zs), [-inf, z0 - 1, z0]) / (2j * pi)
out["synthetic_delta"] = {"z0": 0.3, "z": c2(zs), "delta": c2(exp(ld))}

path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "golden.json")
with open(path, "w") as fh:
    json.dump(out, fh, indent=1)
    fh.write("\n")
print("wrote", path)
