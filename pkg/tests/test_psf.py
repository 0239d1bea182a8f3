import numpy as np
import pytest

from gaussres.psf import (
    GaussianPsf,
    beta,
    d_delta,
    delta_k_squared,
    eta_squared,
    mode_geometry,
    overlap_delta,
    quadrature_oracle,
)

PSF = GaussianPsf(1.0)


def test_overlap_values():
    assert overlap_delta(PSF, 0.0) == 1.0
    assert overlap_delta(PSF, 1.0) == pytest.approx(np.exp(-0.5))
    assert overlap_delta(PSF, 8.0) < 1e-13


def test_beta_changes_sign_at_w():
    assert beta(PSF, 0.0) == pytest.approx(delta_k_squared(PSF))
    assert beta(PSF, 1.0) == 0.0
    assert beta(PSF, 1.5) < 0


def test_d_delta_matches_finite_difference():
    h = 1e-6
    for d in (0.2, 1.0, 2.3):
        fd = (overlap_delta(PSF, d + h) - overlap_delta(PSF, d - h)) / (2 * h)
        assert d_delta(PSF, d) == pytest.approx(fd, rel=1e-8)


def test_scaling_with_width():
    psf = GaussianPsf(2.5)
    g1, g2 = mode_geometry(PSF, 0.4), mode_geometry(psf, 1.0)
    assert g2.delta == pytest.approx(g1.delta)
    assert g2.beta == pytest.approx(g1.beta / 2.5 ** 2)
    assert g2.eta_minus2 == pytest.approx(g1.eta_minus2 / 2.5 ** 2)


@pytest.mark.parametrize("d", [0.05, 0.5, 1.0, 3.0])
def test_closed_forms_against_quadrature(d):
    g = mode_geometry(PSF, d)
    assert quadrature_oracle(PSF, d, "delta") == pytest.approx(g.delta, rel=1e-6)
    assert quadrature_oracle(PSF, d, "beta") == pytest.approx(g.beta, rel=1e-6, abs=1e-12)
    assert quadrature_oracle(PSF, d, "dk2") == pytest.approx(g.dk2, rel=1e-6)


def test_eta_against_quadrature_frozen():
    # quadrature result at d = 0.5 w, computed once and frozen
    qp, qm = 0.03116881012523011, 0.01041124434540588
    ep, em = eta_squared(PSF, 0.5)
    assert ep == pytest.approx(qp, rel=1e-9)
    assert em == pytest.approx(qm, rel=1e-9)


def test_eta_small_and_large_separation():
    _, em = eta_squared(PSF, 1e-3)
    assert em == pytest.approx(1e-6 / 24, rel=1e-6)
    ep, em = eta_squared(PSF, 20.0)
    assert ep == pytest.approx(0.25) and em == pytest.approx(0.25)


def test_eta_series_joins_closed_form():
    x = np.linspace(0.25, 0.35, 41)
    vals = np.array([eta_squared(PSF, v)[1] for v in x])
    # smooth: second differences stay tiny across the switch
    assert np.max(np.abs(np.diff(vals, 2))) < 1e-6


def test_rejects_non_positive_separation():
    with pytest.raises(ValueError):
        mode_geometry(PSF, 0.0)
    with pytest.raises(ValueError):
        overlap_delta(PSF, -1.0)
    with pytest.raises(ValueError):
        GaussianPsf(0.0)
