"""Closed-form constants and singular-integral coefficients for the
symmetric alpha-stable generator acting on power functions.

The generator of the standard symmetric alpha-stable process acts on
``w_p(x) = |x|^{p-1}`` (``w_1(x) = ln|x|``) as

    (generator w_p)(x) = A(alpha) * gamma(alpha, p) * |x|^{p-alpha-1},

valid for 0 < p < alpha + 1.  ``A(alpha)`` is a ratio of Gamma functions and
``gamma(alpha, p)`` a one-dimensional integral with integrable endpoint
singularities.  The sign of ``gamma`` classifies ``w_p`` as sub-/super-/
harmonic, and the critical driving strength of the alpha-Loewner evolution is

    theta0(alpha) = 2 / (A(alpha) * |gamma(alpha, 1)|),  1 < alpha < 2.

Two independent integral representations of ``gamma`` are implemented
(:func:`gamma_coeff` and :func:`gamma_coeff_alt`); their agreement is the
primary correctness check for this module.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gamma as _gamma_fn

from .errors import ConfigError, NumericalError

DEFAULT_TOL = 1e-10

__all__ = [
    "DEFAULT_TOL",
    "CoeffQuery",
    "HarmonicClass",
    "frac_constant",
    "gamma_coeff",
    "gamma_coeff_alt",
    "frac_laplacian_power",
    "classify_power",
    "phi",
    "theta0",
]


class HarmonicClass(enum.Enum):
    SUBHARMONIC = "subharmonic"
    HARMONIC = "harmonic"
    SUPERHARMONIC = "superharmonic"


@dataclass(frozen=True)
class CoeffQuery:
    """A validated (alpha, p) pair with quadrature tolerance."""

    alpha: float
    p: float
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        _check_alpha(self.alpha)
        _check_p(self.alpha, self.p)
        if self.tol <= 0:
            raise ConfigError("quadrature tolerance must be positive")


def _check_alpha(alpha: float) -> None:
    if not 0 < alpha < 2:
        raise ConfigError(f"alpha must lie in (0,2), got {alpha}")


def _check_p(alpha: float, p: float) -> None:
    if not 0 < p < alpha + 1:
        raise ConfigError(f"p must lie in (0, alpha+1)=(0,{alpha + 1}), got {p}")


def frac_constant(alpha: float) -> float:
    """Normalizing constant of the stable generator's singular kernel.

    A(alpha) = alpha * 2^(alpha-1) * pi^(-1/2) * Gamma((1+alpha)/2) / Gamma(1-alpha/2)

    Positive on (0,2); the Gamma pole at alpha=2 bounds the domain.
    """
    _check_alpha(alpha)
    return (
        alpha
        * 2.0 ** (alpha - 1.0)
        / np.sqrt(np.pi)
        * _gamma_fn((1.0 + alpha) / 2.0)
        / _gamma_fn(1.0 - alpha / 2.0)
    )


def _endpoint_quads(pieces, tol: float, what: str) -> float:
    """Sum adaptive quadratures of stretched endpoint pieces, each given as
    (fn, hi); raise with diagnostics when the error budget is exceeded."""
    total = 0.0
    err_total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for fn, hi in pieces:
            val, err = integrate.quad(fn, 0.0, hi, epsabs=tol / (2 * len(pieces)),
                                      epsrel=1e-13, limit=400)
            total += val
            err_total += err
    if not np.isfinite(total) or err_total > tol:
        raise NumericalError(
            f"quadrature for {what} did not converge: value={total}, abserr={err_total}, requested {tol}"
        )
    return total


def _gamma_primary_integral(alpha: float, p: float, tol: float) -> float:
    """int_0^1 (v^(p-2) + v^(-alpha)) ((1-v)^q - (1+v)^q) dv with q = alpha-p.

    Both endpoints are flattened by power substitutions v = w^(1/m) (resp.
    1-v = w^(1/r)); exponents are combined analytically so the cancellation
    at v -> 0 (bracket ~ -2q v) never meets an overflowing power.
    """
    q = alpha - p
    m = min(p, 2.0 - alpha, 1.0)
    r = min(1.0 + q, 1.0)

    def bracket_over_v(v):
        # ((1-v)^q - (1+v)^q)/v, stable at small v via its Taylor expansion
        if v < 1e-4:
            return -2.0 * q - q * (q - 1.0) * (q - 2.0) / 3.0 * v * v
        return ((1.0 - v) ** q - (1.0 + v) ** q) / v

    def left(w):
        v = w ** (1.0 / m)
        return (w ** (p / m - 1.0) + w ** ((2.0 - alpha) / m - 1.0)) * bracket_over_v(v) / m

    def right(w):
        s = w ** (1.0 / r)
        v = 1.0 - s
        amp = v ** (p - 2.0) + v ** (-alpha)
        return amp / r * (w ** ((q + 1.0) / r - 1.0) - (2.0 - s) ** q * w ** (1.0 / r - 1.0))

    return _endpoint_quads([(left, 0.5 ** m), (right, 0.5 ** r)], tol,
                           f"gamma({alpha},{p})")


def gamma_coeff(alpha: float, p: float, tol: float = DEFAULT_TOL) -> float:
    """Coefficient integral, primary representation.

    For p != 1:

        gamma(alpha,p) = (p-1)/alpha * int_0^inf v^(p-2) (|v-1|^(alpha-p) - (v+1)^(alpha-p)) dv

    and for p = 1 the same with v^(-1) in place of (p-1) v^(p-2).  The half
    line is folded onto (0,1) by v -> 1/v, giving one integrand family with
    integrable singularities at both endpoints (guaranteed by
    0 < p < alpha+1 and alpha < 2), handled by explicit power substitutions.
    """
    _check_alpha(alpha)
    _check_p(alpha, p)
    if tol <= 0:
        raise ConfigError("tol must be positive")
    pref = 1.0 / alpha if p == 1.0 else (p - 1.0) / alpha
    scale = max(abs(pref), 1e-3)
    return pref * _gamma_primary_integral(alpha, p, tol / scale)


def gamma_coeff_alt(alpha: float, p: float, tol: float = DEFAULT_TOL) -> float:
    """Coefficient integral, alternative representation on (0,1).

    For p != 1:

        gamma(alpha,p) = int_0^1 (u^(p-1)-1)(1-u^(alpha-p)) [(1-u)^(-1-alpha) + (1+u)^(-1-alpha)] du

    and for p = 1 the first two factors are replaced by (1-u^(alpha-1)) ln u.
    Near u = 1 the doubly-vanishing product is evaluated through expm1
    against the (1-u)^(-1-alpha) blow-up; near u = 0 the product is expanded
    into explicit powers of u.
    """
    _check_alpha(alpha)
    _check_p(alpha, p)
    if tol <= 0:
        raise ConfigError("tol must be positive")
    r = min(2.0 - alpha, 1.0)
    hi_r = 0.5 ** r

    if p == 1.0:
        m = min(alpha, 1.0)

        def left(w):
            v = w ** (1.0 / m)
            lnv = np.log(w) / m
            k = (1.0 - v) ** (-1.0 - alpha) + (1.0 + v) ** (-1.0 - alpha)
            return lnv * k / m * (w ** (1.0 / m - 1.0) - w ** (alpha / m - 1.0))

        def right(w):
            s = w ** (1.0 / r)
            lnu = np.log1p(-s)
            p_over_s2 = (-np.expm1((alpha - 1.0) * lnu) / s) * (lnu / s)
            tail = (2.0 - s) ** (-1.0 - alpha)
            return (p_over_s2 * w ** ((2.0 - alpha) / r - 1.0)
                    + (-np.expm1((alpha - 1.0) * lnu)) * lnu * tail * w ** (1.0 / r - 1.0)) / r

        return _endpoint_quads([(left, 0.5 ** m), (right, hi_r)], tol,
                               f"gamma_alt({alpha},1)")

    m = min(p, alpha, 1.0, 1.0 + alpha - p)

    def left(w):
        v = w ** (1.0 / m)
        k = (1.0 - v) ** (-1.0 - alpha) + (1.0 + v) ** (-1.0 - alpha)
        # (u^(p-1) - 1)(1 - u^(alpha-p)) expanded into powers of u = w^(1/m)
        powers = (w ** (p / m - 1.0) - w ** (alpha / m - 1.0)
                  - w ** (1.0 / m - 1.0) + w ** ((1.0 + alpha - p) / m - 1.0))
        return k * powers / m

    def right(w):
        s = w ** (1.0 / r)
        lnu = np.log1p(-s)
        f1 = np.expm1((p - 1.0) * lnu)
        f2 = -np.expm1((alpha - p) * lnu)
        tail = (2.0 - s) ** (-1.0 - alpha)
        return ((f1 / s) * (f2 / s) * w ** ((2.0 - alpha) / r - 1.0)
                + f1 * f2 * tail * w ** (1.0 / r - 1.0)) / r

    return _endpoint_quads([(left, 0.5 ** m), (right, hi_r)], tol,
                           f"gamma_alt({alpha},{p})")


def frac_laplacian_power(alpha: float, p: float, x: float, tol: float = DEFAULT_TOL) -> float:
    """Generator of the standard stable process applied to w_p at x != 0."""
    if x == 0:
        raise ConfigError("x must be nonzero; w_p is singular at the origin")
    _check_alpha(alpha)
    _check_p(alpha, p)
    return frac_constant(alpha) * gamma_coeff(alpha, p, tol) * abs(x) ** (p - alpha - 1.0)


def classify_power(alpha: float, p: float, tol: float = DEFAULT_TOL) -> HarmonicClass:
    """Sign classification of w_p, with a 10*tol dead band declared harmonic.

    The exact zero occurs only at p = alpha; the dead band keeps quadrature
    roundoff from being reported as a strict sign.
    """
    g = gamma_coeff(alpha, p, tol)
    if abs(g) < 10.0 * tol:
        return HarmonicClass.HARMONIC
    return HarmonicClass.SUBHARMONIC if g > 0 else HarmonicClass.SUPERHARMONIC


def phi(alpha: float, p: float, tol: float = DEFAULT_TOL) -> float:
    """Critical-strength curve phi(p) = 2(1-p) / (A(alpha) gamma(alpha,p)).

    Defined for 1 < alpha < 2 and p in (0, alpha); strictly increasing with
    phi(1) = theta0(alpha).  Near p = 1 both numerator and gamma vanish
    linearly; within 1e-7 of p = 1 the continuous limit value is used.
    """
    if not 1 < alpha < 2:
        raise ConfigError(f"phi requires alpha in (1,2), got {alpha}")
    if not 0 < p < alpha:
        if p == alpha:
            raise ConfigError("phi is undefined at p = alpha (gamma vanishes)")
        raise ConfigError(f"phi requires p in (0, alpha)=(0,{alpha}), got {p}")
    if abs(p - 1.0) < 1e-7:
        return theta0(alpha, tol)
    g = gamma_coeff(alpha, p, tol)
    if abs(g) <= 1e3 * tol:
        raise NumericalError(
            f"gamma({alpha},{p})={g} too close to zero to evaluate phi stably"
        )
    return 2.0 * (1.0 - p) / (frac_constant(alpha) * g)


def theta0(alpha: float, tol: float = DEFAULT_TOL) -> float:
    """Critical driving strength 2 / (A(alpha) |gamma(alpha,1)|), 1 < alpha < 2.

    Error budget: the quadrature contributes |dtheta0/dgamma| * tol
    = theta0/|gamma| * tol in absolute terms; with tol = 1e-10 and
    |gamma(alpha,1)| > 0.4 on (1,2) the relative error stays below 1e-9.
    """
    if not 1 < alpha < 2:
        raise ConfigError(f"theta0 requires alpha in (1,2), got {alpha}")
    g = gamma_coeff(alpha, 1.0, tol)
    return 2.0 / (frac_constant(alpha) * abs(g))
