"""
Separation-dependent scalars of a Gaussian point-spread function.

The PSF is u0(r) = sqrt(2/(pi w^2)) exp(-|r|^2/w^2) and the two images sit at
+/- r0 = (+/- d/2, 0). Closed forms are evaluated in units of w and rescaled;
``quadrature_oracle`` evaluates the defining integrals directly.
"""

from dataclasses import dataclass

import numpy as np

D_MIN_FACTOR = 1e-3


class QuadratureError(RuntimeError):
    """Quadrature oracle failed to converge."""


@dataclass(frozen=True)
class GaussianPsf:
    w: float = 1.0

    def __post_init__(self):
        if not self.w > 0:
            raise ValueError(f"PSF width must be positive, got {self.w}")

    def u0(self, x, y):
        return np.sqrt(2 / (np.pi * self.w ** 2)) * np.exp(-(x ** 2 + y ** 2) / self.w ** 2)

    def du0_dx(self, x, y):
        return -2 * x / self.w ** 2 * self.u0(x, y)


@dataclass(frozen=True)
class ModeGeometry:
    """All d-dependent PSF scalars consumed by the channel and the QFI."""

    d: float
    delta: float
    d_delta: float
    dk2: float
    beta: float
    eta_plus2: float
    eta_minus2: float

    @property
    def eta(self):
        """Positive roots (eta_+, eta_-)."""
        return np.sqrt(self.eta_plus2), np.sqrt(self.eta_minus2)


def _check_d(d, strict=False):
    if strict and not d > 0:
        raise ValueError(f"separation must be positive, got {d}")
    if d < 0:
        raise ValueError(f"separation must be non-negative, got {d}")


def overlap_delta(psf, d):
    _check_d(d)
    x = d / psf.w
    return float(np.exp(-x ** 2 / 2))


def d_delta(psf, d):
    """Derivative of the overlap with respect to d."""
    _check_d(d)
    x = d / psf.w
    return float(-x * np.exp(-x ** 2 / 2) / psf.w)


def delta_k_squared(psf):
    return 1.0 / psf.w ** 2


def beta(psf, d):
    _check_d(d)
    x = d / psf.w
    return float((1 - x ** 2) * np.exp(-x ** 2 / 2) / psf.w ** 2)


def eta_squared(psf, d):
    """Squared norms (eta_+^2, eta_-^2) of d-derivatives of the image modes.

    Differentiating u_pm = [u0(r - r0) +/- u0(r + r0)] / sqrt(2(1 +/- delta))
    including its normalization gives

        eta_pm^2 = (dk2 -/+ beta) / (4(1 +/- delta))
                   - (d delta/dd)^2 / (4(1 +/- delta)^2).

    For eta_- both terms diverge like 1/d^2 as d -> 0 and cancel, leaving
    eta_-^2 ~ d^2/(24 w^4); below d = 0.3 w a series in d/w is used.
    """
    _check_d(d, strict=True)
    x = d / psf.w
    e = np.exp(-x ** 2 / 2)
    dk2 = 1.0
    b = (1 - x ** 2) * e
    dd = -x * e
    plus = (dk2 - b) / (4 * (1 + e)) - dd ** 2 / (4 * (1 + e) ** 2)
    if x < 0.3:
        minus = _eta_minus2_series(x)
    else:
        one_minus = -np.expm1(-x ** 2 / 2)
        minus = (dk2 + b) / (4 * one_minus) - dd ** 2 / (4 * one_minus ** 2)
    return float(plus / psf.w ** 2), float(minus / psf.w ** 2)


def _eta_minus2_series(x):
    # Taylor expansion of the closed form in x = d/w, truncated after x^14
    x2 = x * x
    return x2 / 24 - x2 ** 3 / 2880 + x2 ** 5 / 322560 - x2 ** 7 / 38707200


def mode_geometry(psf, d):
    _check_d(d, strict=True)
    ep, em = eta_squared(psf, d)
    return ModeGeometry(
        d=float(d),
        delta=overlap_delta(psf, d),
        d_delta=d_delta(psf, d),
        dk2=delta_k_squared(psf),
        beta=beta(psf, d),
        eta_plus2=ep,
        eta_minus2=em,
    )


# --- quadrature oracle -----------------------------------------------------

def _tensor_quad(f, half_width, n, dtype=float):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    x = nodes.astype(dtype) * half_width
    wts = weights.astype(dtype) * half_width
    xx, yy = np.meshgrid(x, x, indexing="ij")
    vals = f(xx, yy)
    ww = np.outer(wts, wts)
    return np.sum(vals * ww), np.sum(np.abs(vals) * ww)


def integrate_2d(f, half_width, n_start=32, n_max=1024, rtol=1e-9, dtype=float):
    """Adaptive Gauss-Legendre tensor quadrature of f over [-L, L]^2.

    The node count is doubled until successive results agree to ``rtol``
    relative to the integral of |f|. Raises QuadratureError at ``n_max``.
    ``dtype=np.longdouble`` evaluates f on an extended-precision grid.
    """
    n = n_start
    prev, _ = _tensor_quad(f, half_width, n, dtype)
    while n < n_max:
        n *= 2
        cur, scale = _tensor_quad(f, half_width, n, dtype)
        if abs(cur - prev) <= rtol * max(abs(cur), scale):
            return cur if dtype is not float else float(cur)
        prev = cur
    raise QuadratureError(f"no convergence with {n_max} nodes per axis")


def _mode_derivative(psf, d, sign, h):
    """Richardson-extrapolated central difference of u_pm with respect to d."""
    def central(step):
        up = _image_mode_grid(psf, d + step, sign)
        um = _image_mode_grid(psf, d - step, sign)
        return lambda x, y: (up(x, y) - um(x, y)) / (2 * step)

    g1, g2 = central(h), central(h / 2)
    return lambda x, y: (4 * g2(x, y) - g1(x, y)) / 3


def _image_mode_grid(psf, d, sign):
    # normalized numerically: going through 1 - delta would cancel badly for
    # the antisymmetric mode at small d
    a = d / 2

    def numerator(x, y):
        return psf.u0(x - a, y) + sign * psf.u0(x + a, y)

    norm2 = integrate_2d(lambda x, y: numerator(x, y) ** 2, a + 8 * psf.w,
                         rtol=1e-14, n_max=512, dtype=np.longdouble)
    norm = np.sqrt(np.longdouble(norm2))
    return lambda x, y: numerator(x, y) / norm


def quadrature_oracle(psf, d, which):
    """Evaluate a defining PSF integral numerically.

    ``which`` is one of ``"delta"``, ``"dk2"``, ``"beta"`` or ``"eta"``; the
    last returns the pair (eta_+^2, eta_-^2), with d-derivatives of the mode
    functions taken by central differences (step 1e-5 w, Richardson
    extrapolated).
    """
    _check_d(d, strict=(which == "eta"))
    a = d / 2
    L = a + 8 * psf.w
    if which == "delta":
        return integrate_2d(lambda x, y: psf.u0(x - a, y) * psf.u0(x + a, y), L)
    if which == "dk2":
        return integrate_2d(lambda x, y: psf.du0_dx(x, y) ** 2, L)
    if which == "beta":
        return integrate_2d(lambda x, y: psf.du0_dx(x - a, y) * psf.du0_dx(x + a, y), L)
    if which == "eta":
        # mode functions are differenced on a long-double grid so that the
        # step-1e-5 difference quotient stays far below the 1e-9 target
        h = np.longdouble(1e-5) * psf.w
        out = []
        for sign in (1, -1):
            g = _mode_derivative(psf, np.longdouble(d), sign, h)
            out.append(float(integrate_2d(lambda x, y: g(x, y) ** 2, L + float(h),
                                          dtype=np.longdouble)))
        return tuple(out)
    raise ValueError(f"unknown oracle quantity {which!r}")
