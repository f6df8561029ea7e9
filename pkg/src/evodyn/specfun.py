r"""Complex gamma function and modified Bessel function of the first kind.

The Bessel function is evaluated from its power series

.. math::
    I_\nu(z) = \sum_{k\ge 0} \frac{(z/2)^{\nu+2k}}{k!\,\Gamma(\nu+k+1)}

with the principal branch of :math:`(z/2)^\nu`.  The operating range of this
package is :math:`|z| \lesssim 20`, :math:`|\nu| \lesssim 15`, where the
series in double precision is adequate; there is no asymptotic branch.

Values are plain Python ``complex`` numbers; non-finite inputs are rejected.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import ConvergenceError, DomainError

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_P = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class SeriesControls:
    term_tol: float = 1e-17
    max_terms: int = 500

    def __post_init__(self):
        if not 0.0 < self.term_tol <= 1e-6:
            raise DomainError(f"term_tol must lie in (0, 1e-6], got {self.term_tol!r}")
        if self.max_terms < 50:
            raise DomainError(f"max_terms must be >= 50, got {self.max_terms!r}")


DEFAULT_SERIES = SeriesControls()


def _cx(value, name="argument") -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return z


def _nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _log_gamma_right(z: complex) -> complex:
    # valid for Re z >= 0.5
    z = z - 1.0
    x = _LANCZOS_P[0]
    for i in range(1, len(_LANCZOS_P)):
        x += _LANCZOS_P[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def gamma_cx(z) -> complex:
    """Gamma function of a complex argument; reflection is used for Re z < 1/2."""
    z = _cx(z)
    if _nonpositive_integer(z):
        raise DomainError(f"gamma has a pole at {z!r}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * cmath.exp(_log_gamma_right(1.0 - z)))
    return cmath.exp(_log_gamma_right(z))


def rgamma_cx(z) -> complex:
    """1 / Gamma(z), zero at the poles."""
    z = _cx(z)
    if _nonpositive_integer(z):
        return 0j
    if z.real < 0.5:
        return cmath.sin(math.pi * z) * cmath.exp(_log_gamma_right(1.0 - z)) / math.pi
    return cmath.exp(-_log_gamma_right(z))


def _converged(next_abs, term_abs, sum_abs, ratio_abs, tol):
    # two consecutive small terms and a shrinking tail
    return next_abs <= tol * sum_abs and term_abs <= tol * sum_abs and ratio_abs < 1.0


def bessel_i_series(nu, z, controls: SeriesControls = DEFAULT_SERIES):
    """Return (I_nu(z), I_nu'(z), I_nu''(z)) from the term-wise differentiated series."""
    nu = _cx(nu, "nu")
    z = _cx(z, "z")
    if z == 0:
        if nu == 0:
            return 1 + 0j, 0j, 0.5 + 0j
        if nu.real > 0 or _nonpositive_integer(nu):
            # derivatives at the origin are not needed anywhere in the package
            return 0j, complex("nan"), complex("nan")
        raise DomainError(f"I_nu(0) is undefined for nu = {nu!r}")

    half = 0.5 * z
    quarter_sq = half * half
    # negative integer order: leading terms vanish with 1/Gamma
    k = int(-nu.real) if _nonpositive_integer(nu) else 0
    term = cmath.exp((nu + 2 * k) * cmath.log(half)) * rgamma_cx(nu + k + 1) / math.factorial(k)

    w = dw = d2w = 0j
    for _ in range(controls.max_terms):
        p = nu + 2 * k
        w += term
        dw += p / z * term
        d2w += p * (p - 1.0) / (z * z) * term
        k += 1
        nxt = term * quarter_sq / (k * (nu + k))
        term_abs = abs(term)
        if term_abs == 0 or _converged(abs(nxt), term_abs, abs(w), abs(nxt) / term_abs,
                                       controls.term_tol):
            return w, dw, d2w
        term = nxt
    raise ConvergenceError(
        f"I_nu(z) series did not converge in {controls.max_terms} terms for nu={nu!r}, z={z!r}",
        nu=nu,
        z=z,
    )


def bessel_i_cx(nu, z, controls: SeriesControls = DEFAULT_SERIES) -> complex:
    """Modified Bessel function of the first kind, complex order and argument."""
    return bessel_i_series(nu, z, controls)[0]


def bessel_i_reduced(nu, y, controls: SeriesControls = DEFAULT_SERIES):
    r"""Entire part of :math:`I_\nu` in the variable :math:`y = (z/2)^2`.

    Returns ``(S, D1, D2)`` with

    .. math::
        S(y) = \sum_k \frac{y^k}{k!\,(\nu+1)_k}, \quad
        D_1 = \sum_k k\,s_k y^k, \quad D_2 = \sum_k k^2 s_k y^k

    so that :math:`\Gamma(\nu+1) I_\nu(z) = (z/2)^\nu S((z/2)^2)`.  ``D1`` and
    ``D2`` are the first two derivatives of ``S`` with respect to ``ln y``.
    Vectorised over ``y``; there is no branch cut.
    """
    nu = _cx(nu, "nu")
    if _nonpositive_integer(nu + 1):
        raise DomainError(f"(nu + 1)_k vanishes for nu = {nu!r}")
    y = np.asarray(y, dtype=complex)
    if not np.all(np.isfinite(y)):
        raise DomainError("y must be finite")
    s = np.ones_like(y)
    d1 = np.zeros_like(y)
    d2 = np.zeros_like(y)
    term = np.ones_like(y)
    small_before = np.zeros(y.shape, dtype=bool)
    for k in range(1, controls.max_terms + 1):
        term = term * y / (k * (nu + k))
        s += term
        d1 += k * term
        d2 += k * k * term
        small = np.abs(term) <= controls.term_tol * np.abs(s)
        shrinking = np.abs(y) < (k + 1) * abs(nu + k + 1)
        if np.all((small & small_before & shrinking) | (term == 0)):
            return s, d1, d2
        small_before = small
    bad = np.flatnonzero(~(small & small_before))
    z_bad = 2 * np.sqrt(y.flat[bad[0]]) if bad.size else None
    raise ConvergenceError(
        f"reduced I_nu series did not converge in {controls.max_terms} terms for nu={nu!r}",
        nu=nu,
        z=z_bad,
    )
