"""
Source-state families and the degree of mutual coherence.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .symplectic import GaussianState, UnphysicalStateError, is_physical, rotation, squeeze

DARK_MODE_TOL = 1e-15


class Variant(enum.Enum):
    CORRELATED_THERMAL = "correlated-thermal"
    DISPLACED_THERMAL = "displaced-thermal"
    COHERENT = "coherent"
    SQUEEZED_PAIR = "squeezed"


@dataclass(frozen=True)
class SourceSpec:
    """A source family with its parameters.

    ``gamma`` and ``phi`` are the modulus and phase of the degree of mutual
    coherence (thermal families); ``theta`` is the angle between squeezing
    axes (squeezed pair). Coherent sources are displaced thermal with
    gamma = 1.
    """

    variant: Variant
    n0: float
    gamma: float = 0.0
    phi: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.variant is Variant.COHERENT:
            object.__setattr__(self, "gamma", 1.0)
        if not self.n0 >= 0:
            raise ValueError(f"n0 must be non-negative, got {self.n0}")
        if not 0 <= self.gamma <= 1:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")

    @classmethod
    def correlated_thermal(cls, n0, gamma, phi=0.0):
        return cls(Variant.CORRELATED_THERMAL, n0, gamma, phi)

    @classmethod
    def displaced_thermal(cls, n0, gamma, phi=0.0):
        return cls(Variant.DISPLACED_THERMAL, n0, gamma, phi)

    @classmethod
    def coherent(cls, n0, phi=0.0):
        return cls(Variant.COHERENT, n0, 1.0, phi)

    @classmethod
    def squeezed_pair(cls, n0, theta):
        return cls(Variant.SQUEEZED_PAIR, n0, theta=theta)

    def state(self):
        if self.variant is Variant.CORRELATED_THERMAL:
            return make_correlated_thermal(self.n0, self.gamma, self.phi)
        if self.variant in (Variant.DISPLACED_THERMAL, Variant.COHERENT):
            return make_displaced_thermal(self.n0, self.gamma, self.phi)
        return make_squeezed_pair(self.n0, self.theta)


def make_correlated_thermal(n0, gamma, phi):
    """Zero-mean thermal pair with <a1^dag a2> = n0 gamma exp(i phi), <a1 a2> = 0.

    The cross block (rows mode 1, columns mode 2) is
    2 n0 gamma [[cos phi, sin phi], [-sin phi, cos phi]].
    """
    if not 0 <= gamma <= 1 or n0 < 0:
        raise ValueError(f"invalid parameters n0={n0}, gamma={gamma}")
    c = 2 * n0 * gamma * rotation(phi).T
    diag = (2 * n0 + 1) * np.eye(2)
    cov = np.block([[diag, c], [c.T, diag]])
    if not is_physical(cov):
        raise UnphysicalStateError(f"correlated thermal state n0={n0}, gamma={gamma} is unphysical")
    return GaussianState(np.zeros(4), cov, check=False)


def make_displaced_thermal(n0, gamma, phi):
    """Equal thermal states displaced along directions separated by phi.

    A fraction gamma of the n0 photons per source is coherent; source 1 is
    displaced along q.
    """
    if not 0 <= gamma <= 1 or n0 < 0:
        raise ValueError(f"invalid parameters n0={n0}, gamma={gamma}")
    mean = 2 * np.sqrt(gamma * n0) * np.array([1.0, 0.0, np.cos(phi), np.sin(phi)])
    cov = (2 * n0 * (1 - gamma) + 1) * np.eye(4)
    return GaussianState(mean, cov)


def make_coherent(n0, phi):
    return make_displaced_thermal(n0, 1.0, phi)


def make_squeezed_pair(n0, theta):
    """Two squeezed vacua with squeezing axes rotated by theta; n0 = sinh^2 xi."""
    if n0 < 0:
        raise ValueError(f"n0 must be non-negative, got {n0}")
    xi = np.arcsinh(np.sqrt(n0))
    s2 = squeeze(xi) @ squeeze(xi)
    r = rotation(theta)
    cov = np.zeros((4, 4))
    cov[:2, :2] = s2
    cov[2:, 2:] = r @ s2 @ r.T
    return GaussianState(np.zeros(4), cov)


def to_symmetric_modes(state):
    """Re-express a source state in the modes (s1 +/- s2)/sqrt(2)."""
    one = np.eye(2) / np.sqrt(2)
    b = np.block([[one, one], [one, -one]])
    return GaussianState(b @ state.mean, b @ state.cov @ b.T)


def _correlator(state):
    """<a1^dag a2>, <a1^dag a1>, <a2^dag a2> from the moments."""
    v, x = state.cov, state.mean
    c12 = ((v[0, 2] + v[1, 3]) + 1j * (v[0, 3] - v[1, 2])) / 4 \
        + (x[0] - 1j * x[1]) * (x[2] + 1j * x[3]) / 4
    n1, n2 = state.photon_numbers()
    return c12, n1, n2


def degree_of_mutual_coherence(state):
    """<s1^dag s2> / sqrt(<s1^dag s1><s2^dag s2>)."""
    c12, n1, n2 = _correlator(state)
    if n1 <= DARK_MODE_TOL or n2 <= DARK_MODE_TOL:
        raise ValueError("degree of mutual coherence is undefined for a dark mode")
    return complex(c12 / np.sqrt(n1 * n2))
