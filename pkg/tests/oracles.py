"""Reference values computed without the package's integration code.

Orbit moments of quadratic forms are reduced to polar/spherical coordinates:
for Q homogeneous of degree 2,

    int_O |Q|^t x^alpha exp(-pi |x|^2) dx
        = Gamma(B) / (2 pi^B) * int_{S^(n-1), sign Q(u) = eps} |Q(u)|^t u^alpha du,

B = t + (|alpha| + n)/2, and the spherical integral is done by scipy quadrature
with breakpoints on the cone Q = 0.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate, special

warnings.filterwarnings("ignore", category=integrate.IntegrationWarning)


def radial(tau, alpha_deg, n):
    B = tau + (alpha_deg + n) / 2
    return special.gamma(B) / (2 * math.pi ** B)


def tate_moment(tau, sign, power=0, rate=1.0):
    """int over sign * x > 0 of |x|^tau x^power exp(-pi rate^2 x^2) dx by scipy quad."""
    val, _ = integrate.quad(lambda x: x ** tau * x ** power * math.exp(-math.pi * rate ** 2 * x * x),
                            0, np.inf, epsabs=1e-14, epsrel=1e-12, limit=200)
    return sign ** power * val


def qf2_moment(p, q, tau, sign, alpha=(0, 0)):
    """Two variables, Q = sum_{j<p} x_j^2 - sum_{j>=p} x_j^2."""
    coeff = [1.0 if j < p else -1.0 for j in range(2)]

    def ang(phi):
        u = (math.cos(phi), math.sin(phi))
        Q = coeff[0] * u[0] ** 2 + coeff[1] * u[1] ** 2
        if Q * sign <= 0:
            return 0.0
        return abs(Q) ** tau * u[0] ** alpha[0] * u[1] ** alpha[1]

    pts = [k * math.pi / 4 for k in range(1, 8)]
    total = 0.0
    edges = [0.0] + pts + [2 * math.pi]
    for a, b in zip(edges[:-1], edges[1:]):
        v, _ = integrate.quad(ang, a, b, epsabs=1e-14, epsrel=1e-12, limit=200)
        total += v
    return radial(tau, sum(alpha), 2) * total


def qf3_moment(p, q, tau, sign, alpha=(0, 0, 0)):
    """Three variables; x_3 = cos(theta) carries the axis, Q with signature (p, q)."""
    coeff = [1.0 if j < p else -1.0 for j in range(3)]

    def inner(theta):
        st, ct = math.sin(theta), math.cos(theta)

        def f(phi):
            u = (st * math.cos(phi), st * math.sin(phi), ct)
            Q = sum(c * x * x for c, x in zip(coeff, u))
            if Q * sign <= 0:
                return 0.0
            return abs(Q) ** tau * u[0] ** alpha[0] * u[1] ** alpha[1] * u[2] ** alpha[2]

        v, _ = integrate.quad(f, 0, 2 * math.pi, epsabs=1e-14, epsrel=1e-12, limit=200)
        return v * st

    edges = [0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4, math.pi]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v, _ = integrate.quad(inner, a, b, epsabs=1e-13, epsrel=1e-11, limit=200)
        total += v
    return radial(tau, sum(alpha), 3) * total


def hyperbolic_angle_integral(tau, a, b):
    """int_0^1 (1-w)^tau (1+w)^(-B) w^((b-1)/2) dw via the Euler integral of 2F1."""
    B = tau + (a + b + 2) / 2
    c1 = (b + 1) / 2
    return special.beta(c1, tau + 1) * special.hyp2f1(B, c1, c1 + tau + 1, -1.0)


def gamma_r(s):
    return math.pi ** (-s / 2) * special.gamma(s / 2)


def fourier_1d(poly_coeffs, y, rate=1.0, a=1.0):
    """int p(x) exp(-pi rate^2 x^2) exp(2 pi i a y x) dx by scipy quad (real and imaginary parts)."""

    def p(x):
        return sum(c * x ** k for k, c in enumerate(poly_coeffs))

    g = lambda x: p(x) * math.exp(-math.pi * rate ** 2 * x * x)
    re, _ = integrate.quad(lambda x: g(x) * math.cos(2 * math.pi * a * y * x), -np.inf, np.inf, epsabs=1e-13, limit=400)
    im, _ = integrate.quad(lambda x: g(x) * math.sin(2 * math.pi * a * y * x), -np.inf, np.inf, epsabs=1e-13, limit=400)
    return complex(re, im)
