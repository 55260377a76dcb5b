"""Independent reference implementations used to cross-check the package.

Everything here deliberately avoids the production code paths: the
eigensolver is cyclic Jacobi instead of LAPACK, Hamiltonians are built from
explicit Kronecker products instead of bit arithmetic, the barrier factor
integrates the WKB action numerically instead of using the closed form, and
the fits solve normal equations with hand-written Legendre polynomials
instead of the numpy polynomial machinery. Constants are re-entered as
literals on purpose.
"""

from __future__ import annotations

import math

import numpy as np

SX = np.array([[0.0, 1.0], [1.0, 0.0]])
SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
ID2 = np.eye(2)


def jacobi_eigh(matrix, tol: float = 1e-14, max_sweeps: int = 100):
    """Cyclic Jacobi rotations; returns (eigenvalues ascending, eigenvectors)."""
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.triu(a, 1) ** 2)))
        scale = max(1.0, math.sqrt(float(np.sum(a.diagonal() ** 2))))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    order = np.argsort(a.diagonal(), kind="stable")
    return a.diagonal()[order].copy(), v[:, order].copy()


def site_operator(op: np.ndarray, site: int, n: int) -> np.ndarray:
    out = np.ones((1, 1))
    for q in range(n):
        out = np.kron(out, op if q == site else ID2)
    return out


def kron_hamiltonian(splittings, couplings: dict, coupling_op: str) -> np.ndarray:
    """Direct tensor-product build; qubit 0 is the leading Kronecker factor."""
    n = len(splittings)
    pair_op = SX if coupling_op == "transverse-xx" else SZ
    h = np.zeros((2 ** n, 2 ** n))
    for i, li in enumerate(splittings):
        h += li * site_operator(SZ, i, n)
    for (i, j), val in couplings.items():
        h += val * site_operator(pair_op, i, n) @ site_operator(pair_op, j, n)
    return h


def register_energies_by_enumeration(splittings, couplings=None, zz_pairs=False):
    """Diagonal energies summed bit by bit over explicit bitstrings."""
    n = len(splittings)
    energies = []
    for idx in range(2 ** n):
        bits = [(idx >> (n - 1 - q)) & 1 for q in range(n)]
        e = sum(li * (1 - 2 * bits[i]) for i, li in enumerate(splittings))
        if zz_pairs and couplings:
            e += sum(val * (1 - 2 * bits[i]) * (1 - 2 * bits[j])
                     for (i, j), val in couplings.items())
        energies.append(e)
    return np.array(energies)


def penetrability_quad(e_mev: float, z_p: int, z_t: int, a_t: int,
                       r0_fm: float = 1.4) -> float:
    """Barrier transmission by numerical quadrature of the WKB action."""
    from scipy.integrate import quad

    hbarc = 197.3269804
    e2 = 1.4399764
    m_p = 938.27208816
    amu = 931.49410242
    radius = r0_fm * a_t ** (1.0 / 3.0)
    zz = z_p * z_t * e2
    if e_mev >= zz / radius:
        return 1.0
    mu = m_p * (a_t * amu) / (m_p + a_t * amu)
    r_turn = zz / e_mev

    def integrand(r):
        return math.sqrt(max(2.0 * mu * (zz / r - e_mev), 0.0)) / hbarc

    action, _ = quad(integrand, radius, r_turn, limit=400)
    return math.exp(-2.0 * action)


def legendre_explicit(k: int, x):
    x = np.asarray(x, dtype=float)
    if k == 0:
        return np.ones_like(x)
    if k == 1:
        return x
    if k == 2:
        return 1.5 * x ** 2 - 0.5
    if k == 3:
        return 2.5 * x ** 3 - 1.5 * x
    if k == 4:
        return (35.0 * x ** 4 - 30.0 * x ** 2 + 3.0) / 8.0
    raise ValueError(f"oracle only carries Legendre orders 0..4 (asked for {k})")


def legendre_normal_equations(thetas_deg, y, errors, order: int):
    """Weighted LS by explicit normal equations; returns (coef, cov, chi2)."""
    x = np.cos(np.radians(np.asarray(thetas_deg, dtype=float)))
    y = np.asarray(y, dtype=float)
    if errors is None:
        w = np.ones_like(x)
    else:
        w = 1.0 / np.asarray(errors, dtype=float) ** 2
    design = np.column_stack([legendre_explicit(k, x) for k in range(order + 1)])
    gram = design.T @ (w[:, None] * design)
    coef = np.linalg.solve(gram, design.T @ (w * y))
    cov = np.linalg.inv(gram)
    resid = y - design @ coef
    chi2 = float(w @ resid ** 2)
    dof = len(x) - (order + 1)
    if errors is None and dof > 0:
        cov = cov * chi2 / dof
    return coef, (cov + cov.T) / 2.0, chi2


def line_normal_equations(x, y, errors=None):
    """Weighted straight-line fit; returns (slope, intercept, slope_var)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.ones_like(x) if errors is None else 1.0 / np.asarray(errors) ** 2
    gram = np.array([[w.sum(), w @ x], [w @ x, w @ (x * x)]])
    sol = np.linalg.solve(gram, np.array([w @ y, w @ (x * y)]))
    cov = np.linalg.inv(gram)
    intercept, slope = sol
    var_slope = cov[1, 1]
    if errors is None and len(x) > 2:
        resid = y - intercept - slope * x
        var_slope *= float(w @ resid ** 2) / (len(x) - 2)
    return slope, intercept, var_slope


def poisson_level_sequences(n_sequences: int, length: int, seed: int) -> np.ndarray:
    """Level sequences with independent exponential gaps, one row each."""
    rng = np.random.default_rng(seed)
    return np.cumsum(rng.exponential(size=(n_sequences, length)), axis=1)


def goe_matrix(n: int, rng) -> np.ndarray:
    """Gaussian orthogonal ensemble draw: symmetric, off-diagonal variance 1/2."""
    a = rng.standard_normal((n, n))
    return (a + a.T) / 2.0
