r"""Zero-point standing waves between perfect mirrors at ``z = 0`` and ``z = a``.

A cavity mode with integer indices :math:`(n_x, n_y, n_z)` has wavevector
:math:`k = (\pi n_x/L, \pi n_y/L, \pi n_z/a)` and electric field

.. math::
    E = (A_x \cos k_x x \sin k_y y \sin k_z z,\;
         A_y \sin k_x x \cos k_y y \sin k_z z,\;
         A_z \sin k_x x \sin k_y y \cos k_z z).

Each mode pushes on a plate with stress
:math:`\sigma_{zz} = -\epsilon_0 A^2 k_z^2 / (8 k^2)`, its amplitude fixed by
the zero-point energy :math:`A^2 = 2\hbar\omega/(\epsilon_0 L^2 a)`.  Summing
the stresses with the convergence factor :math:`e^{-\lambda k}` in the
:math:`L \to \infty` continuum gives a pressure whose small-:math:`\lambda`
expansion is

.. math::
    -\frac{\hbar c}{\pi^2 \lambda^4} + \frac{\pi^2 \hbar c}{240 a^4}
    + O(\lambda^2).

Sign conventions: :func:`casimir_pressure` returns the positive magnitude of
the attraction; :func:`regulated_pressure` returns the signed plate stress
(negative means the plates are pulled together).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import zeta

from .constants import constants_codata

__all__ = [
    "MODE_MULTIPLICITY",
    "CUTOFF_GUARD",
    "CavityGeometry",
    "ModeSpec",
    "CutoffParam",
    "CutoffRangeError",
    "TransversalityError",
    "AsymptoticSplit",
    "mode_E",
    "mode_B",
    "divergence_E",
    "transverse_basis",
    "amplitude_norm_sq",
    "sigma_zz_closed",
    "sigma_zz_assembled",
    "regulated_pressure",
    "regulated_finite_part",
    "asymptotic_pressure",
    "casimir_pressure",
]

# The literal mode sum with the amplitude normalisation above comes out at a
# quarter of both terms of the expansion; this factor restores them.
MODE_MULTIPLICITY = 4

# Below this lambda/a the closed form x(1+x)/(1-x)^3 has no correct digits left
# in the finite part of the pressure.
CUTOFF_GUARD = 1e-12


class CutoffRangeError(ValueError):
    pass


class TransversalityError(ValueError):
    pass


@dataclass(frozen=True)
class CavityGeometry:
    """Plate separation ``a`` and transverse plate size ``L`` (metres)."""

    a: float
    L: float

    def __post_init__(self) -> None:
        if not (self.a > 0 and self.L > 0):
            raise ValueError("a and L must be positive")


@dataclass(frozen=True)
class CutoffParam:
    """Length ``lam`` of the exponential convergence factor exp(-lam * k)."""

    lam: float

    def __post_init__(self) -> None:
        if not self.lam > 0:
            raise ValueError("cutoff length must be positive")


@dataclass(frozen=True)
class ModeSpec:
    """One cavity mode.

    Build with :meth:`from_indices`; ``k`` and ``omega`` are then consistent
    with the geometry by construction.  ``A`` need not be transverse, so that
    longitudinal test fields can be represented; operations that require
    ``A . k = 0`` check it themselves.
    """

    n: tuple[int, int, int]
    k: tuple[float, float, float]
    A: tuple[float, float, float]
    omega: float

    @classmethod
    def from_indices(
        cls, n: tuple[int, int, int], geometry: CavityGeometry, A
    ) -> "ModeSpec":
        n = tuple(int(v) for v in n)
        if len(n) != 3 or min(n) < 1:
            raise ValueError("mode indices must be three integers >= 1")
        k = (
            math.pi * n[0] / geometry.L,
            math.pi * n[1] / geometry.L,
            math.pi * n[2] / geometry.a,
        )
        A = tuple(float(v) for v in A)
        if len(A) != 3:
            raise ValueError("amplitude must have three components")
        omega = constants_codata().c * math.sqrt(k[0] ** 2 + k[1] ** 2 + k[2] ** 2)
        return cls(n, k, A, omega)

    @property
    def k_norm(self) -> float:
        return math.sqrt(sum(v * v for v in self.k))

    @property
    def A_sq(self) -> float:
        return sum(v * v for v in self.A)

    def transversality_defect(self) -> float:
        """|A . k| / (|A| |k|); zero for a physical (divergence-free) mode."""
        dot = sum(x * y for x, y in zip(self.A, self.k))
        norm = math.sqrt(self.A_sq) * self.k_norm
        return abs(dot) / norm if norm else 0.0

    def is_transverse(self, rtol: float = 1e-12) -> bool:
        return self.transversality_defect() <= rtol


def _trig(r, mode: ModeSpec):
    r = np.asarray(r, dtype=float)
    kx, ky, kz = mode.k
    x, y, z = r[..., 0], r[..., 1], r[..., 2]
    return (
        (np.sin(kx * x), np.cos(kx * x)),
        (np.sin(ky * y), np.cos(ky * y)),
        (np.sin(kz * z), np.cos(kz * z)),
    )


def mode_E(r, mode: ModeSpec) -> np.ndarray:
    """Electric field of ``mode`` at position(s) ``r`` (shape ``(..., 3)``)."""
    (sx, cx), (sy, cy), (sz, cz) = _trig(r, mode)
    Ax, Ay, Az = mode.A
    return np.stack([Ax * cx * sy * sz, Ay * sx * cy * sz, Az * sx * sy * cz], axis=-1)


def _curl_coefficients(mode: ModeSpec) -> np.ndarray:
    # curl E = (c_x s c c, c_y c s c, c_z c c s) with c = k x A
    return np.cross(np.asarray(mode.k), np.asarray(mode.A))


def mode_B(r, mode: ModeSpec) -> np.ndarray:
    """Magnetic field profile ``-(curl E) / omega`` of ``mode`` at ``r``.

    With harmonic time dependence the physical field is this profile times
    ``sin(omega t)`` when E carries ``cos(omega t)``; the imaginary unit of
    ``B = -(1/(i omega)) curl E`` is the quarter-period phase shift and does
    not enter any squared quantity.
    """
    if not mode.omega > 0:
        raise ValueError("degenerate mode with omega == 0")
    (sx, cx), (sy, cy), (sz, cz) = _trig(r, mode)
    bx, by, bz = -_curl_coefficients(mode) / mode.omega
    return np.stack([bx * sx * cy * cz, by * cx * sy * cz, bz * cx * cy * sz], axis=-1)


def divergence_E(r, mode: ModeSpec) -> np.ndarray:
    """Analytic ``div E = -(A . k) sin(k_x x) sin(k_y y) sin(k_z z)``."""
    (sx, _), (sy, _), (sz, _) = _trig(r, mode)
    dot = sum(x * y for x, y in zip(mode.A, mode.k))
    return -dot * sx * sy * sz


def transverse_basis(k) -> tuple[np.ndarray, np.ndarray]:
    """Unit TE and TM polarisation vectors orthogonal to ``k``.

    TE lies in the plate plane; TM completes the right-handed triad with
    ``k``.  For a purely normal ``k`` the two are ``e_y`` and ``e_x``.
    """
    k = np.asarray(k, dtype=float)
    k_par = math.hypot(k[0], k[1])
    if k_par == 0.0:
        return np.array([0.0, 1.0, 0.0]), np.array([1.0, 0.0, 0.0])
    te = np.array([-k[1], k[0], 0.0]) / k_par
    tm = np.cross(te, k) / np.linalg.norm(k)
    return te, tm


def amplitude_norm_sq(geometry: CavityGeometry, k) -> float:
    """Zero-point amplitude squared ``2 hbar omega / (eps0 L^2 a)`` in V^2/m^2."""
    const = constants_codata()
    omega = const.c * float(np.linalg.norm(np.asarray(k, dtype=float)))
    return 2.0 * const.hbar * omega / (const.eps0 * geometry.L**2 * geometry.a)


def sigma_zz_closed(A_sq: float, k) -> float:
    """Plate stress ``-eps0 A^2 k_z^2 / (8 k^2)`` of one mode (Pa)."""
    k = np.asarray(k, dtype=float)
    k2 = float(k @ k)
    if not k2 > 0:
        raise ValueError("|k| must be positive")
    return -constants_codata().eps0 * A_sq * k[2] ** 2 / (8.0 * k2)


# Trigonometric factor of each field component along (x, y, z): True = sin.
_E_PATTERN = ((False, True, True), (True, False, True), (True, True, False))
_B_PATTERN = ((True, False, False), (False, True, False), (False, False, True))


def _plate_average(amplitudes, patterns) -> np.ndarray:
    # <.>_xy of sin^2 or cos^2 is 1/2; on the plate z = 0 sin -> 0, cos -> 1
    # (z = a gives the same, since k_z a = pi n_z).
    out = []
    for amp, (px, py, pz) in zip(amplitudes, patterns):
        out.append(0.0 if pz else 0.25 * amp * amp)
    return np.array(out)


def sigma_zz_assembled(mode: ModeSpec) -> float:
    r"""Plate stress assembled from the field components of ``mode``.

    Evaluates :math:`\epsilon_0 E_z^2 - \tfrac12(\epsilon_0 E^2 + B^2/\mu_0)`
    on the plate, averaging the transverse sin^2 and cos^2 factors to 1/2,
    with the E and B amplitudes taken from :func:`mode_E` and
    :func:`mode_B`.  Agrees with :func:`sigma_zz_closed` for every transverse
    polarisation.
    """
    if not mode.is_transverse(1e-9):
        raise TransversalityError(
            f"mode amplitude is not transverse (|A.k|/|A||k| = "
            f"{mode.transversality_defect():.3e})"
        )
    const = constants_codata()
    e_sq = _plate_average(mode.A, _E_PATTERN)
    b_amp = -_curl_coefficients(mode) / mode.omega
    b_sq = _plate_average(b_amp, _B_PATTERN)
    return float(const.eps0 * e_sq[2] - 0.5 * (const.eps0 * e_sq.sum() + b_sq.sum() / const.mu0))


def _check(a: float, cutoff: CutoffParam) -> float:
    if not a > 0:
        raise ValueError("gap a must be positive")
    ratio = cutoff.lam / a
    if ratio < CUTOFF_GUARD:
        raise CutoffRangeError(
            f"lambda/a = {ratio:.3e} is below {CUTOFF_GUARD:g}; the closed form has "
            "lost all precision there, use asymptotic_pressure instead"
        )
    return ratio


def _prefactor(a: float, lam: float) -> float:
    return -MODE_MULTIPLICITY * constants_codata().hbar_c * math.pi / (8.0 * a**3 * lam)


def regulated_pressure(a: float, cutoff: CutoffParam) -> float:
    r"""Cutoff-regularised mode-sum plate stress (Pa, negative = attraction).

    Closed form of the continuum transverse integral and the ``n_z`` sum:

    .. math::
        -g\,\frac{\pi\hbar c}{8 a^3 \lambda}\,\frac{x(1+x)}{(1-x)^3},
        \qquad x = e^{-\pi\lambda/a},

    with ``g = MODE_MULTIPLICITY``.
    """
    ratio = _check(a, cutoff)
    u = math.pi * ratio
    x = math.exp(-u)
    one_minus_x = -math.expm1(-u)
    return _prefactor(a, cutoff.lam) * x * (1.0 + x) / one_minus_x**3


def _n2_sum_minus_pole(u: float) -> float:
    # sum n^2 e^{-n u} - 2/u^3 = sum_{k odd} B_{k+3} u^k / ((k+3) k!), |u| < 2 pi
    if u >= 1.0:
        x = math.exp(-u)
        return x * (1.0 + x) / (-math.expm1(-u)) ** 3 - 2.0 / u**3
    b = _BERNOULLI
    total = 0.0
    for k in range(1, len(b) - 3, 2):
        term = b[k + 3] * u**k / ((k + 3) * math.factorial(k))
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total


def _bernoulli_numbers(n_max: int) -> list[float]:
    # B_2n = (-1)^(n+1) 2 (2n)! zeta(2n) / (2 pi)^(2n); scipy.special.bernoulli
    # is only good to ~2e-12 at B_4, which would show up directly in the
    # finite part.
    out = [1.0, -0.5] + [0.0] * (n_max - 1)
    for m in range(2, n_max + 1, 2):
        sign = 1.0 if (m // 2) % 2 else -1.0
        out[m] = sign * 2.0 * math.factorial(m) * float(zeta(m)) / (2.0 * math.pi) ** m
    return out


_BERNOULLI = _bernoulli_numbers(40)


def regulated_finite_part(a: float, cutoff: CutoffParam) -> float:
    """``regulated_pressure + hbar c / (pi^2 lambda^4)`` without cancellation.

    The difference of the two large terms is formed analytically (Bernoulli
    series of the mode sum), so the result keeps full precision as
    ``lambda / a -> 0``; it tends to ``casimir_pressure(a)``.
    """
    ratio = _check(a, cutoff)
    return _prefactor(a, cutoff.lam) * _n2_sum_minus_pole(math.pi * ratio)


class AsymptoticSplit(NamedTuple):
    divergent_term: float
    finite_term: float


def asymptotic_pressure(a: float, cutoff: CutoffParam) -> AsymptoticSplit:
    """Small-cutoff split ``(-hbar c/(pi^2 lam^4), pi^2 hbar c/(240 a^4))``.

    The divergent term does not depend on ``a``; the finite term does not
    depend on ``lam``.
    """
    if not a > 0:
        raise ValueError("gap a must be positive")
    hbar_c = constants_codata().hbar_c
    return AsymptoticSplit(-hbar_c / (math.pi**2 * cutoff.lam**4), casimir_pressure(a))


def casimir_pressure(a: float) -> float:
    """Zero-temperature Casimir pressure magnitude ``pi^2 hbar c / (240 a^4)``."""
    if not a > 0:
        raise ValueError("gap a must be positive")
    return math.pi**2 * constants_codata().hbar_c / (240.0 * a**4)
