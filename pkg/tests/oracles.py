"""Independent reference implementations used only by the tests.

None of these share code with the package beyond the physical constants.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np
from scipy.integrate import quad_vec

from casimir_plates.constants import constants_codata

MODE_MULTIPLICITY = 4


def mode_sum_oracle(a: float, lam: float, n_max: int | None = None) -> float:
    """Brute-force regulated plate stress: explicit n_z sum of a numerical
    transverse-momentum integral.

    Every mode contributes ``-hbar c k_z^2 e^{-lam k} / (4 L^2 a k)``; the
    (n_x, n_y) sum over the positive quadrant becomes ``(L/pi)^2`` times a
    quarter of the k_par plane, i.e. ``(L/pi)^2 (pi/2) int k_par dk_par``.
    The k_par integral is done with ``quad_vec`` in ``v = k_par / k_z``.
    """
    hbar_c = constants_codata().hbar_c
    u = math.pi * lam / a
    if n_max is None:
        n_max = int(math.ceil(45.0 / u)) + 10
    kz = math.pi * np.arange(1, n_max + 1) / a
    b = lam * kz

    def f(v):
        r = math.sqrt(1.0 + v * v)
        return v / r * np.exp(-b * (r - 1.0))

    inner, _ = quad_vec(f, 0.0, math.inf, epsrel=1e-13, epsabs=0.0, norm="max")
    # int_0^inf k_par e^{-lam k}/k dk_par = k_z e^{-lam k_z} * inner
    per_nz = kz**2 * kz * np.exp(-b) * inner
    total = math.fsum(per_nz)
    return -MODE_MULTIPLICITY * hbar_c / (4.0 * a) * (1.0 / math.pi**2) * (math.pi / 2.0) * total


def regulated_pressure_mp(a: float, lam: float, dps: int = 50) -> mp.mpf:
    """Closed-form regulated stress evaluated in extended precision."""
    with mp.workdps(dps):
        hbar_c = mp.mpf(constants_codata().hbar) * mp.mpf(constants_codata().c)
        a, lam = mp.mpf(a), mp.mpf(lam)
        x = mp.exp(-mp.pi * lam / a)
        return -MODE_MULTIPLICITY * hbar_c * mp.pi / (8 * a**3 * lam) * x * (1 + x) / (1 - x) ** 3


def finite_part_mp(a: float, lam: float, dps: int = 50) -> float:
    """``regulated + hbar c/(pi^2 lam^4)`` with the cancellation done at ``dps`` digits."""
    with mp.workdps(dps):
        hbar_c = mp.mpf(constants_codata().hbar) * mp.mpf(constants_codata().c)
        return float(regulated_pressure_mp(a, lam, dps) + hbar_c / (mp.pi**2 * mp.mpf(lam) ** 4))


def ratio_R_polylog(t: float, dps: int = 30) -> float:
    """R(t) with the inner exponential sum in closed form.

    ``sum_m e^{-m alpha}(1/(m alpha) + 2/(m alpha)^2 + 2/(m alpha)^3)`` is
    ``Li1(z)/alpha + 2 Li2(z)/alpha^2 + 2 Li3(z)/alpha^3`` with ``z = e^{-alpha}``.
    The s sum is taken directly until the terms drop below ``10^-dps``.
    """
    with mp.workdps(dps):
        t = mp.mpf(t)
        total = mp.mpf(0)
        s = 0
        while True:
            s += 1
            alpha = 4 * mp.pi * s * t
            z = mp.exp(-alpha)
            term = s**3 * (
                mp.polylog(1, z) / alpha + 2 * mp.polylog(2, z) / alpha**2
                + 2 * mp.polylog(3, z) / alpha**3
            )
            total += term
            if term < mp.mpf(10) ** (-dps) * total and alpha > 1:
                break
        return float(3840 * t**4 * total)
