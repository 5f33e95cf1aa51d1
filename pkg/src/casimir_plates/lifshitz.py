r"""Finite-temperature force between perfect mirrors from Matsubara Green's functions.

Notation (SI units throughout the public API):

* Matsubara frequencies :math:`\zeta_s = 2\pi k_B s T/\hbar`, ``s >= 1``;
  :math:`k_0 = \zeta/c` is the corresponding imaginary-axis wavenumber.
* :math:`w = \sqrt{k_0^2 + q^2}` and :math:`\Delta = 1 - e^{2wa}` (< 0).
* The reduced temperature :math:`t = \kappa a T` with
  :math:`\kappa = k_B/(\hbar c)`.

The finite-temperature pressure divided by the zero-temperature Casimir
pressure is

.. math::
    R(t) = 3840\, t^4 \sum_{s\ge1} s^3 \int_1^\infty
           \frac{p^2\,dp}{e^{4\pi s t p} - 1},

which only depends on ``t``; ``R(0) = 1``.  Forces are returned as positive
magnitudes of the attraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta as zeta_fn

from .constants import constants_codata
from .numerics import (
    DEFAULT_TOLERANCE,
    SeriesError,
    SeriesResult,
    Tolerance,
    integrate_interval,
    integrate_semi_infinite,
    sum_series,
)

__all__ = [
    "GreenComponents",
    "ForceResult",
    "reduced_temperature",
    "matsubara_zeta",
    "green_components",
    "green_E_parts",
    "green_H_parts",
    "green_H_zz_terms",
    "stress_bracket",
    "force_qspace",
    "force_pspace",
    "zero_T_force",
    "ratio_R",
    "ratio_R_oracle",
    "ratio_from_SI",
    "hargreaves_R",
    "SMALL_T_SLOPE",
    "SMALL_T_SWITCH",
]

FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class GreenComponents:
    """Independent Green's function components at ``(zeta, q, a, x, x')``.

    ``D_xy = D_yx = 1j * D_xy_im`` is purely imaginary.  Fields may be numpy
    arrays when the inputs were.
    """

    D_xx: float
    D_yy: float
    D_zz: float
    D_xy_im: float
    w: float
    delta: float
    k0: float
    q: float


@dataclass(frozen=True)
class ForceResult:
    pressure: float  # Pa, magnitude of the attraction
    series: SeriesResult  # s-sum bookkeeping, values in Pa
    route: str  # "q-space" | "p-space"


def _check_temperature(T: float) -> None:
    if not T >= 0:
        raise ValueError("temperature must be >= 0 K")


def _check_t(t: float) -> None:
    if not t >= 0:
        raise ValueError("reduced temperature t must be >= 0")


def reduced_temperature(a: float, T: float) -> float:
    """Dimensionless ``t = kappa a T`` for gap ``a`` (m) and temperature ``T`` (K)."""
    if not a > 0:
        raise ValueError("gap a must be positive")
    _check_temperature(T)
    return constants_codata().kappa * a * T


def matsubara_zeta(s: int, T: float) -> float:
    """Matsubara pseudo-frequency ``2 pi k_B s T / hbar`` in rad/s."""
    if int(s) != s or s < 1:
        raise ValueError("Matsubara index must be an integer >= 1")
    _check_temperature(T)
    const = constants_codata()
    return 2.0 * math.pi * const.k_B * s * T / const.hbar


def green_components(zeta, q, a, x, x_prime) -> GreenComponents:
    r"""Closed-form Green's components of the perfect-mirror gap.

    With the free-space part subtracted,

    .. math::
        D_{xx} = -\frac{4\pi q^2}{w k_0^2 \Delta}\cosh w(x-x'),\quad
        D_{yy} = \frac{4\pi w}{k_0^2 \Delta}\cosh w(x-x'),\quad
        D_{zz} = \frac{4\pi}{w \Delta}\cosh w(x-x'),

    and :math:`D_{xy} = -4\pi i q \sinh w(x-x') / (k_0^2\Delta)`.
    ``x`` is the coordinate normal to the plates.
    """
    zeta = np.asarray(zeta, dtype=float)
    if np.any(zeta == 0):
        raise ValueError("zeta == 0 is singular in the closed-form components")
    if not np.all(np.asarray(a) > 0):
        raise ValueError("gap a must be positive")
    k0 = zeta / constants_codata().c
    q = np.asarray(q, dtype=float)
    w = np.hypot(k0, q)
    with np.errstate(over="ignore"):
        delta = -np.expm1(2.0 * w * a)
    d = np.asarray(x, dtype=float) - np.asarray(x_prime, dtype=float)
    ch = np.cosh(w * d)
    sh = np.sinh(w * d)
    k0sq = k0 * k0
    return GreenComponents(
        D_xx=-FOUR_PI * q * q / (w * k0sq * delta) * ch,
        D_yy=FOUR_PI * w / (k0sq * delta) * ch,
        D_zz=FOUR_PI / (w * delta) * ch,
        D_xy_im=-FOUR_PI * q / (k0sq * delta) * sh,
        w=w,
        delta=delta,
        k0=k0,
        q=q,
    )


def green_E_parts(gc: GreenComponents, zeta=None):
    """Electric parts ``D^E = -k0^2 D`` of the diagonal components (xx, yy, zz).

    ``zeta`` is accepted for symmetry with the physical formula; ``gc``
    already carries ``k0 = zeta / c`` and a mismatch is rejected.
    """
    if zeta is not None:
        k0 = np.asarray(zeta, dtype=float) / constants_codata().c
        if not np.allclose(k0, gc.k0, rtol=1e-14, atol=0.0):
            raise ValueError("zeta does not match the Green's components")
    k0sq = gc.k0 * gc.k0
    return -k0sq * gc.D_xx, -k0sq * gc.D_yy, -k0sq * gc.D_zz


def green_H_zz_terms(zeta, q, a, x, x_prime):
    r"""The four terms of :math:`D^H_{zz}` taken separately.

    Returns :math:`(q^2 D_{xx},\; \partial\partial' D_{yy},\;
    -iq\,\partial' D_{xy},\; iq\,\partial D_{yx})`, all real.  Their sum
    cancels down to :math:`-4\pi k_0^2 \cosh w(x-x')/(w\Delta)`; summing
    them in floating point loses ~``(q/k0)^4`` in relative accuracy, which
    is why :func:`green_H_parts` uses the cancelled form.
    """
    gc = green_components(zeta, q, a, x, x_prime)
    w, delta, k0sq = gc.w, gc.delta, gc.k0 * gc.k0
    ch = np.cosh(w * (np.asarray(x, dtype=float) - np.asarray(x_prime, dtype=float)))
    cross = FOUR_PI * gc.q * gc.q * w / (k0sq * delta) * ch
    return gc.q * gc.q * gc.D_xx, -w * w * gc.D_yy, cross, cross


def green_H_parts(zeta, q, a, x, x_prime):
    """Magnetic parts ``(D^H_xx, D^H_yy, D^H_zz)``.

    ``D^H_xx = q^2 D_zz``, ``D^H_yy = d/dx d/dx' D_zz`` and ``D^H_zz`` as
    in :func:`green_H_zz_terms`, with the derivatives of ``cosh`` and
    ``sinh w(x - x')`` taken analytically.
    """
    gc = green_components(zeta, q, a, x, x_prime)
    w, delta = gc.w, gc.delta
    ch = np.cosh(w * (np.asarray(x, dtype=float) - np.asarray(x_prime, dtype=float)))
    h_xx = gc.q * gc.q * gc.D_zz
    h_yy = -w * w * gc.D_zz
    h_zz = -FOUR_PI * gc.k0 * gc.k0 / (w * delta) * ch
    return h_xx, h_yy, h_zz


def stress_bracket(zeta, q, a):
    """Stress-tensor brace at ``x = x' = a``.

    ``D^E_yy + D^E_zz - D^E_xx + D^H_yy + D^H_zz - D^H_xx``, which reduces
    to ``-16 pi w / Delta`` (positive).
    """
    gc = green_components(zeta, q, a, a, a)
    e_xx, e_yy, e_zz = green_E_parts(gc)
    h_xx, h_yy, h_zz = green_H_parts(zeta, q, a, a, a)
    return (e_yy + e_zz - e_xx) + (h_yy + h_zz - h_xx)


def force_qspace(a: float, T: float, tol: Tolerance = DEFAULT_TOLERANCE) -> ForceResult:
    r"""Pressure from the stress brace integrated over transverse momentum.

    .. math::
        F = \frac{k_B T}{4\pi} \sum_{s\ge1} \frac{1}{(2\pi)^2}
            \int d^2q\, \mathrm{bracket}(\zeta_s, q, a)
          = -\frac{2 k_B T}{\pi} \sum_{s\ge1} \int_0^\infty \frac{w}{\Delta}\, q\,dq.

    The q integral is done in ``u = q a``.
    """
    if not a > 0:
        raise ValueError("gap a must be positive")
    if not T > 0:
        raise ValueError("temperature must be > 0 K")
    const = constants_codata()
    prefactor = const.k_B * T / (8.0 * math.pi**2 * a**2)

    def term(s: int) -> float:
        zeta = matsubara_zeta(s, T)

        def integrand(u: np.ndarray) -> np.ndarray:
            return stress_bracket(zeta, u / a, a) * u

        return prefactor * integrate_semi_infinite(integrand, 0.0, tol).value

    series = sum_series(term, tol)
    return ForceResult(series.value, series, "q-space")


def force_pspace(a: float, T: float, tol: Tolerance = DEFAULT_TOLERANCE) -> ForceResult:
    r"""Pressure in the ``p`` representation (``q^2 = k_0^2 (p^2 - 1)``).

    .. math::
        F = \frac{2 k_B T}{\pi} \sum_{s\ge1} \Big(\frac{\zeta_s}{c}\Big)^3
            \int_1^\infty \frac{p^2\,dp}{e^{2\zeta_s p a/c} - 1}.
    """
    if not a > 0:
        raise ValueError("gap a must be positive")
    if not T > 0:
        raise ValueError("temperature must be > 0 K")
    const = constants_codata()
    t = reduced_temperature(a, T)
    k1 = 2.0 * math.pi * const.kappa * T  # zeta_1 / c
    prefactor = 2.0 * const.k_B * T / math.pi * k1**3

    def term(s: int) -> float:
        beta = 4.0 * math.pi * s * t  # 2 zeta_s a / c
        res = integrate_semi_infinite(
            lambda p: p * p / np.expm1(beta * p), 1.0, tol, scale=min(1.0, 1.0 / beta)
        )
        return prefactor * s**3 * res.value

    series = sum_series(term, tol)
    return ForceResult(series.value, series, "p-space")


def _planck_x3(x: np.ndarray) -> np.ndarray:
    return x**3 / np.expm1(x)


def zero_T_force(a: float, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    r"""Zero-temperature limit ``hbar c/(16 pi^2 a^4) * int_0^inf X^3/(e^X - 1) dX``."""
    if not a > 0:
        raise ValueError("gap a must be positive")
    integral = integrate_semi_infinite(_planck_x3, 0.0, tol).value
    return constants_codata().hbar_c / (16.0 * math.pi**2 * a**4) * integral


def _planck_x2(y: np.ndarray) -> np.ndarray:
    return y * y / np.expm1(y)


# Below this t the closed small-t form is exact to double precision
# (neglected terms ~ exp(-pi/t)) and the panel sum would need > 3000 panels.
SMALL_T_SWITCH = 1e-3


def ratio_R(t: float, tol: Tolerance = DEFAULT_TOLERANCE, method: str = "auto") -> float:
    r"""Thermal ratio ``R(t)``.

    With ``y = 4 pi s t p`` every term becomes :math:`(4\pi t)^{-3}\int_{4\pi
    s t}^\infty y^2/(e^y-1)\,dy`, and exchanging the order of the s sum and
    the y integral gives

    .. math::
        R(t) = \frac{60 t}{\pi^3} \sum_{j\ge1} j
               \int_{jc}^{(j+1)c} \frac{y^2\,dy}{e^y - 1},\qquad c = 4\pi t,

    a sum of positive panel integrals (``method="quadrature"``).

    Euler-Maclaurin applied to :math:`\sum_s G(sc)`, :math:`G(x) =
    \int_x^\infty y^2/(e^y-1)dy`, terminates because all odd derivatives of
    G at 0 beyond the third vanish, leaving

    .. math:: R(t) = 1 - \frac{60\zeta(3)}{\pi^3} t + \frac{16}{3} t^4

    up to Poisson-summation terms of order :math:`e^{-\pi/t}`
    (``method="closed"``).  ``"auto"`` uses it for ``t < SMALL_T_SWITCH``.
    """
    _check_t(t)
    if method not in ("auto", "quadrature", "closed"):
        raise ValueError(f"unknown method {method!r}")
    if t == 0:
        return 1.0
    if method == "closed" or (method == "auto" and t < SMALL_T_SWITCH):
        return 1.0 - SMALL_T_SLOPE * t + 16.0 / 3.0 * t**4
    c = 4.0 * math.pi * t

    def term(j: int) -> float:
        return j * integrate_interval(_planck_x2, j * c, (j + 1) * c, tol).value

    return 60.0 * t / math.pi**3 * sum_series(term, tol).value


def ratio_R_oracle(t: float, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    r"""Thermal ratio ``R(t)`` without quadrature.

    Expanding :math:`1/(e^X-1) = \sum_m e^{-mX}` and integrating in ``p``:

    .. math::
        R = 3840 t^4 \sum_{s\ge1} s^3 \sum_{m\ge1} e^{-m\alpha}
            \Big(\frac{1}{m\alpha} + \frac{2}{(m\alpha)^2}
            + \frac{2}{(m\alpha)^3}\Big),\qquad \alpha = 4\pi s t.

    Only practical for ``t > 1e-6``.
    """
    if not t > 1e-6:
        raise SeriesError(
            f"double sum too slow for t = {t!r} <= 1e-6", SeriesResult(math.nan, math.inf, 1)
        )
    inner_tol = Tolerance(rel=tol.rel, abs=0.0, max_evals=tol.max_evals)

    def outer(s: int) -> float:
        alpha = 4.0 * math.pi * s * t

        def inner(m: int) -> float:
            x = m * alpha
            return math.exp(-x) * (1.0 / x + 2.0 / x**2 + 2.0 / x**3)

        return s**3 * sum_series(inner, inner_tol).value

    return 3840.0 * t**4 * sum_series(outer, tol).value


def ratio_from_SI(a: float, T: float, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """``R`` for gap ``a`` (m) and temperature ``T`` (K); only ``a*T`` matters."""
    return ratio_R(reduced_temperature(a, T), tol)


def hargreaves_R(t: float) -> float:
    """Quartic small-``t`` approximation ``1 - (16/3) t^4`` (not clipped)."""
    _check_t(t)
    return 1.0 - 16.0 / 3.0 * t**4


# lim_{t->0} (1 - R(t)) / t
SMALL_T_SLOPE = 60.0 * float(zeta_fn(3.0)) / math.pi**3
