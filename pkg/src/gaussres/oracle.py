"""
Finite-difference QFI from the Bures fidelity of neighbouring Gaussian states.

Independent of the analytic QFI path: the image-plane states at d - eps/2 and
d + eps/2 are built in arbitrary precision, embedded in a common four-mode
basis that accounts for the change of shape of the image modes, and compared
with the closed-form Gaussian fidelity.

The d-dependence of the modes enters only through the overlaps
<u_pm(d_a) | u_pm(d_b)>, which are Gaussian integrals in closed form. The
part of u_pm(d_b) orthogonal to u_pm(d_a) defines an extra mode v_pm, which is
in the vacuum at d_a.
"""

from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .symplectic import GaussianState, is_physical

WORKING_DPS = 50


class OracleUncertainError(RuntimeError):
    """Richardson levels disagree beyond tolerance."""


@dataclass(frozen=True)
class OracleConfig:
    """Finite-difference settings. ``step`` is a length; None means 1e-4 w."""

    step: float = None
    richardson: bool = True
    tol: float = 1e-9
    agreement: float = 1e-3

    def resolve_step(self, w=1.0):
        eps = 1e-4 * w if self.step is None else self.step
        if not 0 < eps < 0.1 * w:
            raise ValueError(f"finite-difference step must lie in (0, 0.1 w), got {eps}")
        return eps


def _omega_mp(n_modes):
    om = mp.zeros(2 * n_modes)
    for k in range(n_modes):
        om[2 * k, 2 * k + 1] = 1
        om[2 * k + 1, 2 * k] = -1
    return om


def _as_mp_matrix(a):
    a = np.asarray(a)
    if a.ndim == 1:
        return mp.matrix([mp.mpf(float(v)) for v in a])
    return mp.matrix([[mp.mpf(float(v)) for v in row] for row in a])


def fidelity_mp(mean_a, cov_a, mean_b, cov_b):
    """Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 of n-mode Gaussians.

    Works on mpmath matrices in the vacuum = identity convention. Uses the
    auxiliary-matrix form of Banchi, Braunstein and Pirandola (2015), with the
    matrix square root folded into a product over eigenvalues of V_aux Omega.
    """
    dim = cov_a.rows
    om = _omega_mp(dim // 2)
    va = cov_a / 2
    vb = cov_b / 2
    du = (mean_b - mean_a) / mp.sqrt(2)
    vs = va + vb
    vs_inv = mp.inverse(vs)
    v_aux = om.T * vs_inv * (om / 4 + vb * om * va)
    lam = mp.eig(v_aux * om, left=False, right=False)
    prod = mp.mpc(1)
    for x in lam:
        prod *= 2 * (1 + mp.sqrt(1 + 1 / (4 * x * x)))
    f_tot = (mp.det(v_aux) * prod) ** mp.mpf(0.25)
    expo = (du.T * vs_inv * du)[0]
    root = f_tot / mp.det(vs) ** mp.mpf(0.25) * mp.exp(-expo / 4)
    return mp.re(root) ** 2


def gaussian_fidelity(a, b):
    """Fidelity of two physical two-mode states, in [0, 1].

    For coherent states (cov = identity) this is exp(-|mean_a - mean_b|^2/4).
    """
    for s in (a, b):
        if not is_physical(s.cov):
            raise ValueError("fidelity requires physical states")
    with mp.workdps(WORKING_DPS):
        f = fidelity_mp(_as_mp_matrix(a.mean), _as_mp_matrix(a.cov),
                        _as_mp_matrix(b.mean), _as_mp_matrix(b.cov))
        return float(f)


class FixedModeFamily:
    """Wraps d -> GaussianState for states living in d-independent modes."""

    w = 1.0

    def __init__(self, state_at):
        self.state_at = state_at

    def pair(self, d_a, d_b):
        out = []
        for d in (d_a, d_b):
            s = self.state_at(float(d))
            out += [_as_mp_matrix(s.mean), _as_mp_matrix(s.cov)]
        return tuple(out)


class ImagingFamily:
    """Image-plane states of a fixed source as a function of separation.

    Everything d-dependent is evaluated in mpmath: overlap, transmissions,
    the propagation map and the image-mode overlaps.
    """

    def __init__(self, source, kappa, psf):
        self.source = source
        self.kappa = mp.mpf(kappa)
        self.psf = psf
        self.w = psf.w
        self._src_mean = _as_mp_matrix(source.mean)
        self._src_cov = _as_mp_matrix(source.cov)

    def _delta(self, d):
        return mp.exp(-d ** 2 / (2 * mp.mpf(self.w) ** 2))

    def image_moments(self, d):
        d = mp.mpf(d)
        delta = self._delta(d)
        kp, km = self.kappa * (1 + delta), self.kappa * (1 - delta)
        tp, tm = mp.sqrt(kp / 2), mp.sqrt(km / 2)
        t = mp.matrix([[tp, 0, tp, 0], [0, tp, 0, tp], [tm, 0, -tm, 0], [0, tm, 0, -tm]])
        n = mp.diag([1 - kp, 1 - kp, 1 - km, 1 - km])
        return t * self._src_mean, t * self._src_cov * t.T + n

    def mode_overlaps(self, d_a, d_b):
        """(<u_+(d_a)|u_+(d_b)>, <u_-(d_a)|u_-(d_b)>)."""
        w = mp.mpf(self.w)
        e_minus = mp.exp(-(d_a - d_b) ** 2 / (8 * w ** 2))
        e_plus = mp.exp(-(d_a + d_b) ** 2 / (8 * w ** 2))
        da, db = self._delta(d_a), self._delta(d_b)
        c_plus = (e_minus + e_plus) / mp.sqrt((1 + da) * (1 + db))
        c_minus = (e_minus - e_plus) / mp.sqrt((1 - da) * (1 - db))
        return c_plus, c_minus

    def pair(self, d_a, d_b):
        d_a, d_b = mp.mpf(d_a), mp.mpf(d_b)
        xa, va = self.image_moments(d_a)
        xb, vb = self.image_moments(d_b)
        # mode order u_+, u_-, v_+, v_-; v_pm carry vacuum at d_a
        cov_a, mean_a = _embed(va, xa)
        cov_b, mean_b = _embed(vb, xb)
        rot = mp.eye(8)
        for mode, c in zip((0, 1), self.mode_overlaps(d_a, d_b)):
            s = mp.sqrt(max(1 - c ** 2, mp.mpf(0)))
            for quad in (0, 1):
                u, v = 2 * mode + quad, 4 + 2 * mode + quad
                rot[u, u], rot[u, v] = c, -s
                rot[v, u], rot[v, v] = s, c
        return mean_a, cov_a, rot * mean_b, rot * cov_b * rot.T


def _embed(cov, mean):
    big = mp.eye(8)
    vec = mp.matrix(8, 1)
    for i in range(4):
        vec[i] = mean[i]
        for j in range(4):
            big[i, j] = cov[i, j]
    return big, vec


def _fd_qfi(family, d, eps):
    with mp.workdps(WORKING_DPS):
        d = mp.mpf(d)
        half = mp.mpf(eps) / 2
        xa, va, xb, vb = family.pair(d - half, d + half)
        f = fidelity_mp(xa, va, xb, vb)
        return 8 * (1 - mp.sqrt(f)) / mp.mpf(eps) ** 2


def qfi_finite_difference(family, d, cfg=None):
    """QFI as 8 (1 - sqrt(F(rho_{d-eps/2}, rho_{d+eps/2}))) / eps^2.

    ``family`` is an ImagingFamily, any object with a ``pair`` method, or a
    plain callable d -> GaussianState (fixed modes). With Richardson
    extrapolation enabled the result combines eps and eps/2; a relative
    disagreement between the two levels above ``cfg.agreement`` raises
    OracleUncertainError.
    """
    cfg = cfg or OracleConfig()
    if not hasattr(family, "pair"):
        family = FixedModeFamily(family)
    eps = cfg.resolve_step(getattr(family, "w", 1.0))
    with mp.workdps(WORKING_DPS):
        f1 = _fd_qfi(family, d, eps)
        if not cfg.richardson:
            return float(f1)
        f2 = _fd_qfi(family, d, eps / 2)
        scale = max(abs(f2), mp.mpf(cfg.tol))
        if abs(f1 - f2) > cfg.agreement * scale:
            raise OracleUncertainError(
                f"finite-difference QFI not converged at d={d}: {float(f1)} vs {float(f2)}")
        return float((4 * f2 - f1) / 3)


def oracle_qfi(source, kappa, psf, d, cfg=None):
    """Finite-difference QFI for a SourceSpec or GaussianState behind the channel."""
    state = source if isinstance(source, GaussianState) else source.state()
    return qfi_finite_difference(ImagingFamily(state, kappa, psf), d, cfg)
