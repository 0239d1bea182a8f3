"""
Acceptance criteria, each checked at its stated tolerance.

Every test records one PASS/FAIL line; the lines are printed together in the
pytest terminal summary and when this file is run as a script.
"""

import warnings

import numpy as np
import pytest

from gaussres.channel import ImagingChannel, propagate, propagate_derivatives
from gaussres.oracle import oracle_qfi
from gaussres.psf import GaussianPsf, mode_geometry, quadrature_oracle
from gaussres.qfi import qfi, qfi_coherent_closed_form, qfi_small_d_limit, qfi_upper_bound
from gaussres.sources import SourceSpec
from gaussres.symplectic import ppt_min_symplectic_eigenvalue, random_physical_cov, williamson

PSF = GaussianPsf(1.0)
W = PSF.w
PHIS = (0.0, np.pi / np.e, np.pi)
KAPPAS = (0.01, 0.1)
N0S = (1.0, 100.0)


def _record(lines, number, title, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title} ({detail})"
    lines.append(line)
    print(line)
    return ok


def _qfi(src, kappa, d):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return qfi(src, kappa, PSF, d)


def _all_families(n0):
    return [
        SourceSpec.correlated_thermal(n0, 0.7, np.pi),
        SourceSpec.correlated_thermal(n0, 0.7, 0.0),
        SourceSpec.displaced_thermal(n0, 0.7, np.pi / np.e),
        SourceSpec.coherent(n0, 0.0),
        SourceSpec.coherent(n0, np.pi),
        SourceSpec.squeezed_pair(n0, 0.0),
        SourceSpec.squeezed_pair(n0, np.pi / 2),
    ]


def test_coherent_closed_form_identity(acceptance_report):
    worst = 0.0
    for phi in PHIS:
        for d in np.linspace(0.05, 5.0, 50) * W:
            for kappa in KAPPAS:
                for n0 in N0S:
                    f = _qfi(SourceSpec.coherent(n0, phi), kappa, d).f_total
                    ref = qfi_coherent_closed_form(n0, kappa, phi, PSF, d)
                    worst = max(worst, abs(f - ref) / abs(ref))
    ok = _record(acceptance_report, 1, "coherent QFI equals closed form", worst <= 1e-8,
                 f"max rel err {worst:.2e}, tol 1e-8")
    assert ok


def test_small_separation_limit(acceptance_report):
    worst = 0.0
    for fam in (SourceSpec.correlated_thermal, SourceSpec.displaced_thermal):
        for gamma in (0.0, 0.7, 1.0):
            for phi in PHIS:
                for kappa in KAPPAS:
                    for n0 in N0S:
                        f = _qfi(fam(n0, gamma, phi), kappa, 1e-3 * W).f_total
                        lim = qfi_small_d_limit(n0, kappa, gamma, phi, PSF)
                        # a zero limit (gamma = 1, phi = 0) is measured on the 2 kappa n0 / w^2 scale
                        scale = lim if lim > 0 else 2 * kappa * n0 / W ** 2
                        worst = max(worst, abs(f - lim) / scale)
    ok = _record(acceptance_report, 2, "small-d limit 2 kappa n0 (1 - gamma cos phi)", worst <= 1e-3,
                 f"max rel err {worst:.2e}, tol 1e-3")
    assert ok


def test_large_separation_limit(acceptance_report):
    worst = 0.0
    for kappa in KAPPAS:
        for n0 in N0S:
            for src in _all_families(n0):
                f = _qfi(src, kappa, 8 * W).f_total
                worst = max(worst, abs(f / (2 * kappa * n0 / W ** 2) - 1))
    ok = _record(acceptance_report, 3, "large-d limit 2 kappa n0 at d = 8w", worst <= 5e-3,
                 f"max rel err {worst:.2e}, tol 5e-3")
    assert ok


def test_oracle_equivalence(acceptance_report):
    # the oracle first has to reproduce the coherent closed form
    gate = 0.0
    for phi in PHIS:
        for d in (0.2, 0.5, 1.0, 2.0, 5.0):
            ref = qfi_coherent_closed_form(1.0, 0.01, phi, PSF, d)
            gate = max(gate, abs(oracle_qfi(SourceSpec.coherent(1.0, phi), 0.01, PSF, d) / ref - 1))
    worst, n_points = 0.0, 0
    for kappa in KAPPAS:
        for n0 in (0.1, 1.0, 100.0):
            sources = [
                SourceSpec.correlated_thermal(n0, 0.7, np.pi),
                SourceSpec.displaced_thermal(n0, 0.7, np.pi / np.e),
                SourceSpec.coherent(n0, 0.0),
                SourceSpec.squeezed_pair(n0, 0.0),
                SourceSpec.squeezed_pair(n0, np.pi / 2),
            ]
            for src in sources:
                for d in (0.2, 0.5, 1.0, 2.0, 5.0):
                    eng = _qfi(src, kappa, d * W).f_total
                    ref = oracle_qfi(src, kappa, PSF, d * W)
                    # 1e-4 relative, or 1e-8 / w^2 absolute when larger
                    worst = max(worst, abs(eng - ref) / max(abs(ref), 1e-4 / W ** 2))
                    n_points += 1
    ok = gate <= 1e-5 and worst <= 1e-4 and n_points >= 50
    _record(acceptance_report, 4, "engine matches fidelity oracle", ok,
            f"{n_points} points, max rel err {worst:.2e}, tol 1e-4; oracle gate {gate:.2e}, tol 1e-5")
    assert ok


def test_bound_dominance_and_saturation(acceptance_report):
    excess = -np.inf
    for kappa in (1e-3, 0.01, 0.1):
        for n0 in (0.1, 1.0, 100.0):
            for src in _all_families(n0) + [SourceSpec.displaced_thermal(n0, 0.7, 0.0)]:
                for d in np.linspace(0.01, 6.0, 40) * W:
                    r = _qfi(src, kappa, d).f_total / qfi_upper_bound(n0, kappa, PSF, d)
                    excess = max(excess, r - 1)
    sat = np.inf
    for d in np.linspace(1e-3, 6.0, 300) * W:
        best = max(qfi_coherent_closed_form(1.0, 1e-3, phi, PSF, d) for phi in (0.0, np.pi))
        sat = min(sat, best / qfi_upper_bound(1.0, 1e-3, PSF, d))
    ok = excess <= 1e-9 and sat >= 0.999
    _record(acceptance_report, 5, "bound dominates and is saturated at kappa = 1e-3", ok,
            f"max F/bound - 1 = {excess:.2e}, tol 1e-9; min saturation {sat:.5f}, need 0.999")
    assert ok


def test_partial_coherence_structure(acceptance_report):
    kappa, n0 = 0.01, 1e4  # kappa n0 = 100
    d = 0.3 * W
    base = _qfi(SourceSpec.correlated_thermal(n0, 0.0), kappa, d).f_total
    order = {}
    for name, fam in (("correlated", SourceSpec.correlated_thermal), ("displaced", SourceSpec.displaced_thermal)):
        low = _qfi(fam(n0, 0.7, 0.0), kappa, d).f_total
        high = _qfi(fam(n0, 0.7, np.pi), kappa, d).f_total
        order[name] = (low < base < high, low, high)
    margin = np.inf
    for kn in (1.0, 100.0):
        n = kn / kappa
        for phi in PHIS:
            for dd in np.linspace(1e-3, 6.0, 120) * W:
                fd = _qfi(SourceSpec.displaced_thermal(n, 0.7, phi), kappa, dd).f_total
                fc = _qfi(SourceSpec.correlated_thermal(n, 0.7, phi), kappa, dd).f_total
                margin = min(margin, (fd - fc) / fc)
    ok = order["correlated"][0] and order["displaced"][0] and margin >= -1e-12
    detail = (f"at d=0.3w gamma=0 level {base:.4f}; correlated phi=0/pi {order['correlated'][1]:.4f}/"
              f"{order['correlated'][2]:.4f}; displaced phi=0/pi {order['displaced'][1]:.4f}/"
              f"{order['displaced'][2]:.4f}; min (displaced - correlated)/correlated {margin:.2e}")
    _record(acceptance_report, 6, "partial-coherence ordering", ok, detail)
    assert ok


def test_squeezing_structure(acceptance_report):
    grid = np.linspace(0.05, 4.0, 80) * W
    # per-photon QFI for theta = pi/2 should not depend on n0
    spread = 0.0
    for kappa in KAPPAS:
        for d in grid[::4]:
            a = _qfi(SourceSpec.squeezed_pair(1.0, np.pi / 2), kappa, d).f_total / 1.0
            b = _qfi(SourceSpec.squeezed_pair(100.0, np.pi / 2), kappa, d).f_total / 100.0
            spread = max(spread, abs(a / b - 1))
    # dip of the theta = 0 curves, in order of increasing kappa n0
    dips = []
    for kappa, n0 in sorted(((k, n) for k in KAPPAS for n in N0S), key=lambda p: p[0] * p[1]):
        vals = np.array([_qfi(SourceSpec.squeezed_pair(n0, 0.0), kappa, d).f_total for d in grid])
        vals /= 2 * kappa * n0 / W ** 2
        dips.append((vals.min(), grid[vals.argmin()]))
    deepening = all(x[0] > y[0] for x, y in zip(dips, dips[1:]))
    near_w = all(0.5 * W <= pos <= 1.5 * W for _, pos in dips)
    ppt = -np.inf
    for kappa in KAPPAS:
        for n0 in N0S:
            for d in np.concatenate([[1e-3, 1e-2], grid, [8.0]]) * W:
                ch = ImagingChannel.from_psf(kappa, PSF, d)
                cov = propagate(SourceSpec.squeezed_pair(n0, np.pi / 2).state(), ch).cov
                ppt = max(ppt, ppt_min_symplectic_eigenvalue(cov))
    ok = spread <= 1e-8 and deepening and near_w and ppt < 1
    detail = (f"theta=pi/2 per-photon spread {spread:.2e}, tol 1e-8; theta=0 dip minima "
              f"{', '.join(f'{m:.3f}@{p:.2f}w' for m, p in dips)}; smallest 1 - PPT eigenvalue {1 - ppt:.2e}")
    _record(acceptance_report, 7, "squeezed-source structure", ok, detail)
    assert ok


def test_shot_noise_and_degradation(acceptance_report):
    spread = 0.0
    for kappa in KAPPAS:
        for phi in PHIS:
            for d in np.linspace(0.05, 5.0, 25) * W:
                a = _qfi(SourceSpec.coherent(1.0, phi), kappa, d).f_total
                b = _qfi(SourceSpec.coherent(100.0, phi), kappa, d).f_total / 100.0
                spread = max(spread, abs(a / b - 1))
    hi = _qfi(SourceSpec.correlated_thermal(100.0, 1.0, 0.0), 0.01, 0.7 * W).f_total / 100.0
    lo = _qfi(SourceSpec.correlated_thermal(1.0, 1.0, 0.0), 0.01, 0.7 * W).f_total / 1.0
    ok = spread <= 1e-8 and hi < lo
    _record(acceptance_report, 8, "coherent shot-noise scaling and thermal degradation", ok,
            f"coherent per-photon spread {spread:.2e}, tol 1e-8; F/n0 at n0=100 {hi:.6f} vs n0=1 {lo:.6f}")
    assert ok


def test_numerical_hygiene(acceptance_report):
    rng = np.random.default_rng(2024)
    recon = 0.0
    for _ in range(1000):
        cov = random_physical_cov(rng)
        wd = williamson(cov)
        recon = max(recon, np.linalg.norm(wd.s @ wd.diagonal @ wd.s.T - cov) / np.linalg.norm(cov))
    geo = 0.0
    for d in (0.05, 0.3, 0.7, 1.0, 2.0, 4.0):
        g = mode_geometry(PSF, d)
        geo = max(geo,
                  abs(quadrature_oracle(PSF, d, "delta") / g.delta - 1),
                  abs(quadrature_oracle(PSF, d, "dk2") / g.dk2 - 1),
                  abs(quadrature_oracle(PSF, d, "beta") - g.beta) / max(abs(g.beta), g.dk2 * 1e-3))
    for d in (0.05, 0.7, 2.0):  # slow: mode functions are differenced on a grid
        g = mode_geometry(PSF, d)
        qp, qm = quadrature_oracle(PSF, d, "eta")
        geo = max(geo, abs(qp / g.eta_plus2 - 1), abs(qm / g.eta_minus2 - 1))
    deriv = 0.0
    h = 1e-5
    for src in (SourceSpec.displaced_thermal(5.0, 0.6, 1.0), SourceSpec.squeezed_pair(3.0, 0.7)):
        st = src.state()
        for d in (0.05, 0.5, 1.5, 3.0):
            dv, dx = propagate_derivatives(st, ImagingChannel.from_psf(0.05, PSF, d))
            hi = propagate(st, ImagingChannel.from_psf(0.05, PSF, d + h))
            lo = propagate(st, ImagingChannel.from_psf(0.05, PSF, d - h))
            fv = (hi.cov - lo.cov) / (2 * h)
            deriv = max(deriv, np.linalg.norm(dv - fv) / np.linalg.norm(fv))
            if np.any(st.mean):
                fx = (hi.mean - lo.mean) / (2 * h)
                deriv = max(deriv, np.linalg.norm(dx - fx) / np.linalg.norm(fx))
    ok = recon <= 1e-10 and geo <= 1e-6 and deriv <= 1e-6
    _record(acceptance_report, 9, "numerical hygiene", ok,
            f"Williamson {recon:.2e}, tol 1e-10; geometry {geo:.2e}, tol 1e-6; derivatives {deriv:.2e}, tol 1e-6")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
