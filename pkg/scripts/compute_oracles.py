"""Independent reference values for the derived constants used in the tests.

Each unit-cell integral is done with adaptive quadrature (scipy.integrate.quad)
on the closed forms, so nothing here touches the sampled-function pipeline.

    python scripts/compute_oracles.py
"""

import math

from scipy.integrate import quad


def gauss_weighted_sq(x, s):
    return math.exp(-2 * math.pi * x * x) * (1 + abs(x)) ** (2 * s)


def cell_l2(n, s):
    val, _ = quad(gauss_weighted_sq, n, n + 1, args=(s,), epsabs=1e-15, epsrel=1e-14, limit=200)
    return math.sqrt(val)


def gaussian_amalgam_21(s=1, L=16):
    """sum_n ||e^{-pi x^2} (1+|x|)^s||_{L^2(I_n)}  over n in [-L, L)."""
    return math.fsum(cell_l2(n, s) for n in range(-L, L))


def gaussian_l2_weighted(s=1, L=16):
    return math.sqrt(math.fsum(cell_l2(n, s) ** 2 for n in range(-L, L)))


if __name__ == "__main__":
    g_star = gaussian_amalgam_21()
    # the Gaussian is its own transform, so the frequency part is the weighted L^2 norm
    a_star = g_star + gaussian_l2_weighted(s=1, L=128)
    print(f"G* = {g_star:.15f}")
    print(f"A* = {a_star:.15f}")
