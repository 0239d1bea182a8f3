"""
Quantum Fisher information for the separation of two Gaussian sources.

The image-plane state depends on d through its moments (via the
transmissions kappa_pm) and through the shape of the modes u_pm. With the
Williamson decomposition V = S (nu_+ 1 + nu_- 1) S^T,

    F_d = F_V + F_x
    F_V = 1/2 sum_{l, j, k} [ a_jk^(l)^2 / (nu_j nu_k - (-1)^l)
                              + 2 atilde_kj^(l)^2 / (nu_j - (-1)^l) ]
    F_x = dx^T V^-1 dx + x^T D^2 x

with a_jk^(l) = tr[A_jk^(l) S^-1 dV S^-T], atilde_jk^(l) =
tr[A_jk^(l) S^-1 (V - 1) D] and D = eta_+ 1 + eta_- 1. Since tr[A_kj M]
reads block (j, k) of M, atilde_kj couples Williamson mode j to the vacuum
mode into which u_k leaks as d changes, hence the single nu_j.

The derivative projection is a congruence, S^-1 dV S^-T. The similarity
S^-1 dV S agrees with it only for orthogonal S and is kept as a switch for
mutation testing against the fidelity oracle.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ImagingChannel, propagate, propagate_derivatives
from .psf import D_MIN_FACTOR, beta, d_delta, delta_k_squared, overlap_delta
from .symplectic import GaussianState, williamson

DENOM_TOL = 1e-14
NUMER2_TOL = 1e-22

# convention switches, frozen to the combination matching the fidelity oracle
CONGRUENCE = "congruence"
SIMILARITY = "similarity"
TILDE_KJ = "kj"      # atilde_kj^(l) over nu_j
TILDE_JK = "jk"      # atilde_jk^(l) over nu_j

_PAULI = (
    np.array([[0.0, 1.0], [-1.0, 0.0]]),   # i sigma_y
    np.array([[1.0, 0.0], [0.0, -1.0]]),   # sigma_z
    np.eye(2),
    np.array([[0.0, 1.0], [1.0, 0.0]]),    # sigma_x
)


class DivergentTermError(ArithmeticError):
    """A QFI addend has a vanishing denominator but a finite numerator."""


@dataclass(frozen=True)
class BasisSet:
    """The 16 matrices A[l, j, k]; zero outside block (j, k)."""

    matrices: np.ndarray  # shape (4, 2, 2, 4, 4)

    def __getitem__(self, idx):
        return self.matrices[idx]


def basis_set():
    mats = np.zeros((4, 2, 2, 4, 4))
    for l, p in enumerate(_PAULI):
        for j in range(2):
            for k in range(2):
                mats[l, j, k, 2 * j:2 * j + 2, 2 * k:2 * k + 2] = p / np.sqrt(2)
    return BasisSet(mats)


_BASIS = basis_set()


@dataclass(frozen=True)
class QfiBreakdown:
    """QFI with its covariance and mean-field parts.

    ``terms[0, l, j, k]`` are the dV addends and ``terms[1, l, j, k]`` the
    mode-shape addends of F_V, each already including its prefactor.
    """

    f_total: float
    f_cov: float
    f_mean: float
    terms: np.ndarray
    nu: tuple = (np.nan, np.nan)


def _project(m):
    return np.einsum("ljkab,ba->ljk", _BASIS.matrices, m)


def _addend(num, den, where):
    if abs(den) < DENOM_TOL:
        if num ** 2 < NUMER2_TOL:
            return 0.0
        raise DivergentTermError(
            f"divergent QFI term {where}: numerator {num:.3g}, denominator {den:.3g}")
    return num ** 2 / den


def qfi_from_moments(mean, cov, d_mean, d_cov, eta, transform=CONGRUENCE, tilde_index=TILDE_KJ):
    """Assemble the QFI from image-plane moments, their d-derivatives and eta_pm."""
    wd = williamson(cov)
    nu = np.array(wd.nu)
    s_inv = wd.s_inv()
    d_mat = np.diag(np.repeat(eta, 2))

    if transform == CONGRUENCE:
        m_dv = s_inv @ d_cov @ s_inv.T
    elif transform == SIMILARITY:
        m_dv = s_inv @ d_cov @ wd.s
    else:
        raise ValueError(f"unknown transform {transform!r}")
    m_shape = s_inv @ (cov - np.eye(4)) @ d_mat

    a = _project(m_dv)
    # a_t[l, j, k] holds the coefficient paired with nu_j
    a_t = _project(m_shape)
    if tilde_index == TILDE_KJ:
        a_t = a_t.transpose(0, 2, 1)
    elif tilde_index != TILDE_JK:
        raise ValueError(f"unknown tilde index convention {tilde_index!r}")

    terms = np.zeros((2, 4, 2, 2))
    for l in range(4):
        sgn = (-1) ** l
        for j in range(2):
            for k in range(2):
                terms[0, l, j, k] = 0.5 * _addend(a[l, j, k], nu[j] * nu[k] - sgn, (l, j, k))
                terms[1, l, j, k] = _addend(a_t[l, j, k], nu[j] - sgn, ("shape", l, j, k))
    f_cov = float(terms.sum())
    f_mean = float(d_mean @ np.linalg.solve(cov, d_mean) + mean @ d_mat @ d_mat @ mean)
    return QfiBreakdown(f_total=f_cov + f_mean, f_cov=f_cov, f_mean=f_mean, terms=terms,
                        nu=tuple(wd.nu))


def _source_state(source):
    return source if isinstance(source, GaussianState) else source.state()


def qfi(source, kappa, psf, d, transform=CONGRUENCE, tilde_index=TILDE_KJ):
    """QFI for separation d of a SourceSpec (or source GaussianState) imaged through kappa.

    Requires d >= 1e-3 w; use qfi_small_d_limit below that.
    """
    if d < D_MIN_FACTOR * psf.w * (1 - 1e-12):
        raise ValueError(f"d = {d} is below the supported minimum {D_MIN_FACTOR} w")
    state = _source_state(source)
    channel = ImagingChannel.from_psf(kappa, psf, d)
    image = propagate(state, channel)
    d_cov, d_mean = propagate_derivatives(state, channel)
    return qfi_from_moments(image.mean, image.cov, d_mean, d_cov, channel.geometry.eta,
                            transform=transform, tilde_index=tilde_index)


def qfi_coherent_closed_form(n0, kappa, phi, psf, d):
    """2 kappa n0 (dk2 - beta cos phi) for coherent sources."""
    return 2 * kappa * n0 * (delta_k_squared(psf) - beta(psf, d) * np.cos(phi))


def qfi_upper_bound(n0, kappa, psf, d):
    """Global bound 2 kappa n0 max(f_+, f_-) over all source states.

    f_pm = dk2 -/+ beta + kappa (d delta/dd)^2 / (1 - kappa (1 +/- delta)).
    """
    delta = overlap_delta(psf, d)
    if kappa * (1 + delta) >= 1:
        raise ZeroDivisionError("kappa (1 + delta) must be below 1 for the bound")
    dk2, b, dd = delta_k_squared(psf), beta(psf, d), d_delta(psf, d)
    f_plus = dk2 - b + kappa * dd ** 2 / (1 - kappa * (1 + delta))
    f_minus = dk2 + b + kappa * dd ** 2 / (1 - kappa * (1 - delta))
    return 2 * kappa * n0 * max(f_plus, f_minus)


def qfi_small_d_limit(n0, kappa, gamma, phi, psf):
    """Limit d -> 0 for the thermal families: 2 kappa n0 (1 - gamma cos phi) / w^2."""
    return 2 * kappa * n0 * (1 - gamma * np.cos(phi)) / psf.w ** 2
