"""
Two-mode Gaussian state algebra.

Quadratures are ordered (q1, p1, q2, p2) with [q, p] = 2i, so the vacuum
covariance matrix is the identity.
"""

from dataclasses import dataclass

import numpy as np

PHYSICALITY_TOL = 1e-9
SYMMETRY_TOL = 1e-9


class UnphysicalStateError(ValueError):
    """Covariance matrix violates the uncertainty principle."""


def omega(n_modes=2):
    """Symplectic form, one [[0, 1], [-1, 0]] block per mode."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


OMEGA = omega(2)


def rotation(phi):
    """Phase-space rotation R(phi)."""
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


def squeeze(xi):
    """Single-mode squeezer diag(exp(-xi), exp(xi))."""
    return np.diag([np.exp(-xi), np.exp(xi)])


def _check_symmetric(cov):
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (4, 4):
        raise ValueError(f"expected a 4x4 covariance matrix, got shape {cov.shape}")
    asym = np.max(np.abs(cov - cov.T))
    if asym > SYMMETRY_TOL * max(1.0, np.max(np.abs(cov))):
        raise ValueError(f"covariance matrix is not symmetric (max asymmetry {asym:.3g})")
    return 0.5 * (cov + cov.T)


def is_physical(cov):
    """True if cov + i*Omega is positive semidefinite (to 1e-9)."""
    cov = _check_symmetric(cov)
    return bool(np.linalg.eigvalsh(cov + 1j * OMEGA)[0] >= -PHYSICALITY_TOL)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First and second moments of a two-mode Gaussian state.

    The covariance is symmetrized on construction. Physicality is checked
    unless ``check=False``.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __init__(self, mean, cov, check=True):
        mean = np.array(mean, dtype=float).reshape(4)
        cov = _check_symmetric(cov)
        if check and not is_physical(cov):
            raise UnphysicalStateError("covariance matrix is not physical")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @classmethod
    def vacuum(cls):
        return cls(np.zeros(4), np.eye(4))

    def photon_numbers(self):
        """Mean photon number of each mode."""
        v, x = self.cov, self.mean
        return np.array([
            (v[2 * m, 2 * m] + v[2 * m + 1, 2 * m + 1] - 2) / 4
            + (x[2 * m] ** 2 + x[2 * m + 1] ** 2) / 4
            for m in range(2)
        ])


@dataclass(frozen=True, eq=False)
class WilliamsonDecomposition:
    """cov = s @ diag(nu[0], nu[0], nu[1], nu[1]) @ s.T with s symplectic."""

    s: np.ndarray
    nu: tuple

    @property
    def diagonal(self):
        return np.diag(np.repeat(self.nu, 2))

    def s_inv(self):
        """Exact inverse of a symplectic matrix, -Omega S^T Omega."""
        return -OMEGA @ self.s.T @ OMEGA


def symplectic_eigenvalues(cov):
    """Symplectic eigenvalues (nu_+, nu_-) in descending order.

    Computed as the moduli of the eigenvalues of i*Omega*cov, which come in
    +/- pairs.
    """
    cov = _check_symmetric(cov)
    ev = np.sort(np.abs(np.linalg.eigvals(1j * OMEGA @ cov)))[::-1]
    for a, b in (ev[0:2], ev[2:4]):
        if abs(a - b) > 1e-6 * max(1.0, a):
            raise np.linalg.LinAlgError(
                f"symplectic spectrum lost its pairing: {ev}")
    return float(0.5 * (ev[0] + ev[1])), float(0.5 * (ev[2] + ev[3]))


def _symmetric_sqrt(cov):
    w, u = np.linalg.eigh(cov)
    if w[0] <= 0:
        raise UnphysicalStateError("covariance matrix is not positive definite")
    return (u * np.sqrt(w)) @ u.T


def williamson(cov, degeneracy_tol=1e-10):
    """Williamson decomposition of a physical 4x4 covariance matrix.

    With R = cov^(1/2), the Hermitian matrix i R Omega R has eigenvalues
    +/-nu. Each +nu eigenvector e = (x + iy)/sqrt(2) yields the real pair
    (y, x) of columns of an orthogonal O bringing R Omega R to canonical
    form, and S = R O diag(nu)^(-1/2).

    Within each (near) degenerate eigenspace the basis is fixed by
    projecting i*e_q1, i*e_q2, e_p1, e_p2 onto it and orthonormalizing,
    always taking the candidate with the largest residual. This makes the
    output deterministic and gives S = 1 for the vacuum.
    """
    cov = _check_symmetric(cov)
    r = _symmetric_sqrt(cov)
    w, vecs = np.linalg.eigh(1j * r @ OMEGA @ r)
    # eigh sorts ascending; the last two columns carry +nu
    pos = w[2:][::-1]
    evecs = vecs[:, 2:][:, ::-1]

    clusters = [[0], [1]]
    if abs(pos[0] - pos[1]) < degeneracy_tol * max(1.0, pos[0]):
        clusters = [[0, 1]]

    candidates = [1j * np.eye(4)[0], 1j * np.eye(4)[2], np.eye(4)[1].astype(complex),
                  np.eye(4)[3].astype(complex)]
    cols, nus = [], []
    for cl in clusters:
        e = evecs[:, cl]
        proj = e @ e.conj().T
        chosen = []
        for _ in cl:
            best, best_norm = None, -1.0
            for c in candidates:
                v = proj @ c
                for b in chosen:
                    v = v - (b.conj() @ v) * b
                nrm = np.linalg.norm(v)
                if nrm > best_norm + 1e-12:
                    best, best_norm = v, nrm
            chosen.append(best / best_norm)
        cols.extend(chosen)
        nus.extend([float(np.mean(pos[cl]))] * len(cl))

    o = np.zeros((4, 4))
    for k, e in enumerate(cols):
        o[:, 2 * k] = np.sqrt(2) * e.imag
        o[:, 2 * k + 1] = np.sqrt(2) * e.real
    s = r @ o @ np.diag(np.repeat(np.array(nus) ** -0.5, 2))
    return WilliamsonDecomposition(s=s, nu=(nus[0], nus[1]))


def partial_transpose(cov):
    """Flip p2 -> -p2."""
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    return flip @ np.asarray(cov, dtype=float) @ flip


def ppt_min_symplectic_eigenvalue(cov):
    """Smallest symplectic eigenvalue of the partially transposed covariance.

    Values below 1 certify entanglement between the two modes.
    """
    cov = _check_symmetric(cov)
    ev = np.abs(np.linalg.eigvals(1j * OMEGA @ partial_transpose(cov)))
    return float(np.min(ev))


def random_symplectic(rng, scale=1.0):
    """Random 4x4 symplectic matrix from exp(Omega H) with H symmetric."""
    from scipy.linalg import expm
    h = rng.normal(scale=scale, size=(4, 4))
    return expm(OMEGA @ (h + h.T) / 2)


def random_physical_cov(rng, scale=1.0, max_thermal=5.0):
    """Random physical covariance S diag(nu) S^T."""
    s = random_symplectic(rng, scale)
    nu = 1.0 + rng.uniform(0, max_thermal, size=2)
    return s @ np.diag(np.repeat(nu, 2)) @ s.T


__all__ = [
    "GaussianState", "WilliamsonDecomposition", "UnphysicalStateError", "OMEGA",
    "omega", "rotation", "squeeze", "is_physical", "symplectic_eigenvalues",
    "williamson", "partial_transpose", "ppt_min_symplectic_eigenvalue",
    "random_symplectic", "random_physical_cov",
]
