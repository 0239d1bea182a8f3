"""
Self-check suites: each check reports a measured error against a tolerance.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .channel import ImagingChannel, propagate, propagate_derivatives
from .oracle import gaussian_fidelity, oracle_qfi
from .psf import GaussianPsf, eta_squared, mode_geometry, quadrature_oracle
from .qfi import (
    CONGRUENCE,
    TILDE_KJ,
    qfi,
    qfi_coherent_closed_form,
    qfi_small_d_limit,
    qfi_upper_bound,
)
from .sources import SourceSpec
from .symplectic import GaussianState, omega, random_physical_cov, williamson

SUITES = ("geometry", "symplectic", "oracle", "limits")


@dataclass(frozen=True)
class Check:
    name: str
    error: float
    tol: float

    @property
    def passed(self):
        return bool(np.isfinite(self.error) and self.error <= self.tol)


def _rel(a, b, floor=0.0):
    return abs(a - b) / max(abs(b), floor)


def geometry_checks(fast=True):
    psf = GaussianPsf(1.0)
    out = []
    for d in (0.1, 0.7, 1.0, 2.5):
        g = mode_geometry(psf, d)
        out.append(Check(f"delta vs quadrature d={d}", _rel(g.delta, quadrature_oracle(psf, d, "delta")), 1e-6))
        out.append(Check(f"beta vs quadrature d={d}",
                         _rel(g.beta, quadrature_oracle(psf, d, "beta"), floor=g.dk2), 1e-6))
    out.append(Check("dk2 vs quadrature", _rel(1.0, quadrature_oracle(psf, 1.0, "dk2")), 1e-6))
    for d in ((0.5,) if fast else (0.05, 0.5, 1.5)):
        ep, em = eta_squared(psf, d)
        qp, qm = quadrature_oracle(psf, d, "eta")
        out.append(Check(f"eta_+^2 vs quadrature d={d}", _rel(ep, qp), 1e-6))
        out.append(Check(f"eta_-^2 vs quadrature d={d}", _rel(em, qm), 1e-6))
    # series and closed form must join smoothly at the switch point
    below = eta_squared(psf, 0.3 * (1 - 1e-12))[1]
    above = eta_squared(psf, 0.3)[1]
    out.append(Check("eta_-^2 continuity at series switch", _rel(below, above), 1e-9))

    source = SourceSpec.squeezed_pair(2.0, 0.6).state()
    h = 1e-5
    for d in (0.3, 1.2):
        dv, dx = propagate_derivatives(source, ImagingChannel.from_psf(0.05, psf, d))
        hi = propagate(source, ImagingChannel.from_psf(0.05, psf, d + h))
        lo = propagate(source, ImagingChannel.from_psf(0.05, psf, d - h))
        fd = (hi.cov - lo.cov) / (2 * h)
        out.append(Check(f"dV/dd vs finite difference d={d}",
                         np.linalg.norm(dv - fd) / np.linalg.norm(fd), 1e-6))
    return out


def symplectic_checks(n=200, seed=7):
    rng = np.random.default_rng(seed)
    om = omega(2)
    recon, sympl = 0.0, 0.0
    for _ in range(n):
        cov = random_physical_cov(rng)
        wd = williamson(cov)
        recon = max(recon, np.linalg.norm(wd.s @ wd.diagonal @ wd.s.T - cov) / np.linalg.norm(cov))
        sympl = max(sympl, np.linalg.norm(wd.s @ om @ wd.s.T - om))
    vac = williamson(np.eye(4))
    return [
        Check(f"Williamson reconstruction ({n} random states)", recon, 1e-10),
        Check(f"S symplectic ({n} random states)", sympl, 1e-10),
        Check("vacuum symplectic eigenvalues", float(np.max(np.abs(np.array(vac.nu) - 1))), 1e-12),
        Check("self fidelity of vacuum", abs(gaussian_fidelity(GaussianState.vacuum(), GaussianState.vacuum()) - 1), 1e-12),
    ]


def _oracle_sources(n0):
    return [
        SourceSpec.correlated_thermal(n0, 0.7, np.pi),
        SourceSpec.correlated_thermal(n0, 0.7, 0.0),
        SourceSpec.displaced_thermal(n0, 0.7, np.pi / np.e),
        SourceSpec.coherent(n0, 0.0),
        SourceSpec.squeezed_pair(n0, 0.0),
        SourceSpec.squeezed_pair(n0, np.pi / 2),
    ]


def oracle_checks(transform=CONGRUENCE, tilde_index=TILDE_KJ):
    psf = GaussianPsf(1.0)
    out = []
    for kappa in (0.01, 0.1):
        for n0 in (1.0, 100.0):
            for d in (0.5, 2.0):
                for src in _oracle_sources(n0):
                    with warnings.catch_warnings():
                        warnings.simplefilter("ignore")
                        eng = qfi(src, kappa, psf, d, transform=transform, tilde_index=tilde_index).f_total
                    ref = oracle_qfi(src, kappa, psf, d)
                    # relative 1e-4, or 1e-8 absolute for tiny values
                    err = abs(eng - ref) / max(abs(ref), 1e-4)
                    tag = f"{src.variant.value} n0={n0:g} gamma={src.gamma:g} phi={src.phi:.4g} theta={src.theta:.4g}"
                    out.append(Check(f"engine vs oracle {tag} kappa={kappa} d={d}", err, 1e-4))
    return out


def limits_checks():
    psf = GaussianPsf(1.0)
    out = []
    for fam in (SourceSpec.correlated_thermal, SourceSpec.displaced_thermal):
        for gamma in (0.0, 0.7, 1.0):
            for phi in (0.0, np.pi / np.e, np.pi):
                kappa, n0 = 0.01, 100.0
                f = qfi(fam(n0, gamma, phi), kappa, psf, 1e-3).f_total
                lim = qfi_small_d_limit(n0, kappa, gamma, phi, psf)
                # the gamma = 1, phi = 0 limit is zero: measure against 2 kappa n0 / w^2
                err = abs(f - lim) / max(lim, 2 * kappa * n0 / psf.w ** 2 * (lim == 0))
                name = fam(n0, gamma, phi).variant.value
                out.append(Check(f"small-d limit {name} gamma={gamma} phi={phi:.4g}", err, 1e-3))
    for src in _oracle_sources(100.0):
        f = qfi(src, 0.01, psf, 8.0).f_total
        out.append(Check(f"large-d limit {src.variant.value} theta={src.theta:.4g} phi={src.phi:.4g}",
                         _rel(f, 2 * 0.01 * 100.0), 5e-3))
    worst = 0.0
    for d in np.linspace(0.05, 5.0, 25):
        for phi in (0.0, np.pi / np.e, np.pi):
            f = qfi(SourceSpec.coherent(100.0, phi), 0.1, psf, d).f_total
            worst = max(worst, _rel(f, qfi_coherent_closed_form(100.0, 0.1, phi, psf, d)))
    out.append(Check("coherent closed form", worst, 1e-8))
    excess = 0.0
    for src in _oracle_sources(100.0):
        for d in np.linspace(0.05, 5.0, 25):
            excess = max(excess, qfi(src, 0.1, psf, d).f_total / qfi_upper_bound(100.0, 0.1, psf, d) - 1)
    out.append(Check("bound dominance (excess ratio)", max(excess, 0.0), 1e-9))
    return out


def run_validation(suite="all", transform=CONGRUENCE, tilde_index=TILDE_KJ):
    """Run one suite (or all) and return the list of Check results."""
    if suite not in SUITES + ("all",):
        raise ValueError(f"unknown suite {suite!r}")
    chosen = SUITES if suite == "all" else (suite,)
    checks = []
    for name in chosen:
        if name == "geometry":
            checks += geometry_checks()
        elif name == "symplectic":
            checks += symplectic_checks()
        elif name == "oracle":
            checks += oracle_checks(transform, tilde_index)
        else:
            checks += limits_checks()
    return checks


def format_report(checks):
    lines = []
    for c in checks:
        flag = "PASS" if c.passed else "FAIL"
        lines.append(f"{flag}  {c.name}: error {c.error:.3e} (tol {c.tol:.1e})")
    n_fail = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - n_fail}/{len(checks)} checks passed")
    return "\n".join(lines)
