"""
Diffraction-limited imaging channel.

Source quadratures (q1, p1, q2, p2) are mapped to the symmetric and
antisymmetric image modes (q+, p+, q-, p-), each passing through an
independent pure-loss channel with transmissivity kappa_pm = (1 +/- delta) kappa.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .psf import mode_geometry
from .symplectic import GaussianState, is_physical

FAR_FIELD_KAPPA = 0.2


@dataclass(frozen=True)
class PropagationMatrices:
    t: np.ndarray
    n: np.ndarray
    dt: np.ndarray
    dn: np.ndarray


@dataclass(frozen=True)
class ImagingChannel:
    kappa: float
    geometry: object

    def __post_init__(self):
        if not 0 < self.kappa < 1:
            raise ValueError(f"transmission must lie in (0, 1), got {self.kappa}")
        if self.kappa * (1 + self.geometry.delta) > 1:
            raise ValueError(
                f"kappa (1 + delta) = {self.kappa * (1 + self.geometry.delta):.6g} exceeds 1")
        if self.kappa > FAR_FIELD_KAPPA:
            warnings.warn(
                f"kappa = {self.kappa} is outside the far-field regime kappa << 1",
                stacklevel=3)

    @classmethod
    def from_psf(cls, kappa, psf, d):
        return cls(kappa=kappa, geometry=mode_geometry(psf, d))


def transmissions(channel):
    """(kappa_+, kappa_-)."""
    delta, kappa = channel.geometry.delta, channel.kappa
    return (1 + delta) * kappa, (1 - delta) * kappa


def build_matrices(channel):
    """T, N and their d-derivatives, using d kappa_pm / dd = +/- kappa d delta/dd."""
    kp, km = transmissions(channel)
    dkp = channel.kappa * channel.geometry.d_delta
    dkm = -dkp
    one = np.eye(2)

    tp, tm = np.sqrt(kp / 2), np.sqrt(km / 2)
    t = np.block([[tp * one, tp * one], [tm * one, -tm * one]])
    n = np.block([[(1 - kp) * one, 0 * one], [0 * one, (1 - km) * one]])

    # d sqrt(k/2) = dk / (2 sqrt(2k)); kappa_- > 0 whenever d > 0
    dtp = dkp / (2 * np.sqrt(2 * kp))
    dtm = dkm / (2 * np.sqrt(2 * km)) if km > 0 else 0.0
    dt = np.block([[dtp * one, dtp * one], [dtm * one, -dtm * one]])
    dn = np.block([[-dkp * one, 0 * one], [0 * one, -dkm * one]])
    return PropagationMatrices(t=t, n=n, dt=dt, dn=dn)


def propagate(source, channel):
    """Image-plane state in the orthonormal modes u_+, u_-."""
    m = build_matrices(channel)
    cov = m.t @ source.cov @ m.t.T + m.n
    # loss channels cannot produce unphysical output; failure means a bug
    assert is_physical(cov), "propagated covariance is unphysical"
    return GaussianState(m.t @ source.mean, cov, check=False)


def propagate_derivatives(source, channel):
    """Total d-derivatives (dV/dd, dx/dd) of the image-plane moments.

    The source moments are taken to be independent of d.
    """
    m = build_matrices(channel)
    tv = m.t @ source.cov
    dv = m.dt @ source.cov @ m.t.T + tv @ m.dt.T + m.dn
    dx = m.dt @ source.mean
    return 0.5 * (dv + dv.T), dx
