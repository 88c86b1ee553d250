"""Reference computations that share no code with the package.

Brute-force matrix exponentials in a large Fock space, Cartesian-grid
Fourier sums, Kraus-operator loss, and the Laguerre closed forms of Fock
state quasi-distributions.
"""

from math import comb, factorial

import numpy as np
from scipy.linalg import expm
from scipy.special import eval_laguerre

BIG = 90


def ladder(dim=BIG):
    a = np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)
    return a, a.conj().T


def phi_fock_brute(n, beta, dim=BIG):
    """<n| e^{beta a^dag} e^{-beta^* a} |n> with explicit matrix exponentials."""
    a, ad = ladder(dim)
    return (expm(beta * ad) @ expm(-np.conj(beta) * a))[n, n]


def displacement_brute(beta, dim=BIG):
    a, ad = ladder(dim)
    return expm(beta * ad - np.conj(beta) * a)


def coherent_series(beta, dim):
    return np.array([np.exp(-abs(beta) ** 2 / 2) * beta**m / np.sqrt(float(factorial(m))) for m in range(dim)])


def s_distribution_cartesian(phi, alpha, s, half_width=12.0, n=1201):
    """Riemann sum of the smoothed characteristic function on a square grid."""
    x = np.linspace(-half_width, half_width, n)
    h = x[1] - x[0]
    beta = x[None, :] + 1j * x[:, None]
    f = phi(beta) * np.exp(-(1 - s) / 2 * np.abs(beta) ** 2) * np.exp(alpha * np.conj(beta) - np.conj(alpha) * beta)
    return float(np.real(f.sum()) * h * h / np.pi**2)


def fock_s_distribution(n, alpha, s):
    """Quasi-distribution of |n><n| for s < 1, s != -1."""
    x = np.abs(alpha) ** 2
    return 2 / (np.pi * (1 - s)) * ((s + 1) / (s - 1)) ** n * eval_laguerre(n, 4 * x / (1 - s * s)) * np.exp(-2 * x / (1 - s))


def fock_q_function(n, alpha):
    x = np.abs(alpha) ** 2
    return x**n * np.exp(-x) / (np.pi * factorial(n))


def pure_loss_kraus(rho, eta):
    d = rho.shape[0]
    out = np.zeros_like(rho, dtype=complex)
    for l in range(d):
        k = np.zeros((d, d))
        for n in range(l, d):
            k[n - l, n] = np.sqrt(comb(n, l) * eta ** (n - l) * (1 - eta) ** l)
        out += k @ rho @ k.T
    return out


def polar_integral(f, radius, n_r=400, n_theta=256):
    """Integral of f over a disk by Gauss-Legendre in r and trapezoid in angle."""
    x, w = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * radius * (x + 1)
    w = 0.5 * radius * w
    theta = np.linspace(0, 2 * np.pi, n_theta, endpoint=False)
    pts = r[:, None] * np.exp(1j * theta)[None, :]
    return float(np.sum(f(pts) * (w * r)[:, None]) * 2 * np.pi / n_theta)
