"""Randomised self-checks of the closed forms, used by the CLI check commands.

Sampling ranges are fixed so that failures are reproducible from the seed:

* Green's functions: ``zeta a / c`` in [1e-2, 1e2], ``q a`` in [1e-4, 1e2] and
  ``a`` in [1e-7, 1e-5] m, all log-uniform; field points ``x, x'`` uniform
  in the gap with ``|x - x'| >= a / 20``.
* Cavity modes: ``a`` log-uniform in [1e-7, 1e-5] m, ``L / a`` log-uniform in
  [1, 100], indices uniform in 1..20, polarisation a random TE/TM mixture
  scaled to the zero-point amplitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import lifshitz as lf
from . import standing_wave as sw
from .constants import constants_codata

__all__ = [
    "CheckResult",
    "CheckReport",
    "second_difference",
    "green_check",
    "modes_check",
]


@dataclass
class CheckResult:
    name: str
    threshold: float
    worst: float = 0.0
    worst_sample: dict = field(default_factory=dict)
    failures: int = 0

    def record(self, err: float, sample: dict) -> None:
        if not math.isfinite(err):
            err = math.inf
        if err > self.threshold:
            self.failures += 1
        if err > self.worst or not self.worst_sample:
            self.worst = max(err, self.worst)
            self.worst_sample = sample

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class CheckReport:
    samples: int
    seed: int
    results: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def second_difference(f, x: float, h: float) -> float:
    """Richardson-extrapolated central second difference (error O(h^4))."""
    def d2(step: float) -> float:
        return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step)

    return (4.0 * d2(0.5 * h) - d2(h)) / 3.0


def _log_uniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    return float(10.0 ** rng.uniform(math.log10(lo), math.log10(hi)))


def green_check(
    samples: int, seed: int, rel: float = 1e-10, fd_rel: float = 1e-6
) -> CheckReport:
    """Bracket identity and homogeneous x-equation of every Green's component.

    The bracket is compared at ``rel``; the finite-difference Helmholtz check
    is limited by differencing error (~1e-9) and uses ``fd_rel``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    c = constants_codata().c
    bracket = CheckResult("bracket == -16 pi w / Delta", rel)
    helmholtz = CheckResult("(d^2/dx^2 - w^2) D == 0", fd_rel)
    for i in range(samples):
        a = _log_uniform(rng, 1e-7, 1e-5)
        zeta = _log_uniform(rng, 1e-2, 1e2) * c / a
        q = _log_uniform(rng, 1e-4, 1e2) / a
        while True:
            u, up = rng.uniform(0.0, 1.0, size=2)
            if abs(u - up) >= 0.05:
                break
        sample = {"index": i, "zeta": zeta, "q": q, "a": a, "x": u * a, "x_prime": up * a}

        w = math.hypot(zeta / c, q)
        expected = -16.0 * math.pi * w / -math.expm1(2.0 * w * a)
        got = float(lf.stress_bracket(zeta, q, a))
        bracket.record(abs(got - expected) / abs(expected), sample)

        h = 1e-2 / w
        worst = 0.0
        for name in ("D_xx", "D_yy", "D_zz", "D_xy_im"):
            def comp(x, _name=name):
                return float(getattr(lf.green_components(zeta, q, a, x, up * a), _name))
            val = comp(u * a)
            fd = second_difference(comp, u * a, h)
            worst = max(worst, abs(fd - w * w * val) / abs(w * w * val))
        helmholtz.record(worst, sample)
    return CheckReport(samples, seed, [bracket, helmholtz])


def _random_mode(rng: np.random.Generator) -> tuple[sw.ModeSpec, sw.CavityGeometry]:
    a = _log_uniform(rng, 1e-7, 1e-5)
    geom = sw.CavityGeometry(a, a * _log_uniform(rng, 1.0, 100.0))
    n = tuple(int(v) for v in rng.integers(1, 21, size=3))
    probe = sw.ModeSpec.from_indices(n, geom, (0.0, 0.0, 0.0))
    te, tm = sw.transverse_basis(probe.k)
    mix = rng.normal(size=2)
    pol = mix[0] * te + mix[1] * tm
    pol /= np.linalg.norm(pol)
    amp = math.sqrt(sw.amplitude_norm_sq(geom, probe.k))
    return sw.ModeSpec.from_indices(n, geom, amp * pol), geom


def _fd_jacobian(mode: sw.ModeSpec, r: np.ndarray, h: float) -> np.ndarray:
    # jac[i, j] = dE_i / dr_j by central differences
    jac = np.empty((3, 3))
    for j in range(3):
        step = np.zeros(3)
        step[j] = h
        jac[:, j] = (sw.mode_E(r + step, mode) - sw.mode_E(r - step, mode)) / (2.0 * h)
    return jac


def modes_check(samples: int, seed: int, inject_longitudinal: bool = False) -> CheckReport:
    """Boundary values, divergence, curl and plate stress of random modes.

    ``inject_longitudinal`` tilts every amplitude towards ``k`` so that the
    divergence and stress checks must fail.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    boundary = CheckResult("tangential E on walls", 1e-12)
    divergence = CheckResult("div E == 0 (finite differences)", 1e-6)
    div_analytic = CheckResult("div E analytic == finite differences", 1e-6)
    curl = CheckResult("curl E == -omega B (finite differences)", 1e-6)
    stress = CheckResult("sigma_zz assembled == closed", 1e-12)
    for i in range(samples):
        mode, geom = _random_mode(rng)
        if inject_longitudinal:
            khat = np.asarray(mode.k) / mode.k_norm
            A = np.asarray(mode.A) + 0.5 * math.sqrt(mode.A_sq) * khat
            mode = sw.ModeSpec.from_indices(mode.n, geom, A)
        a, L = geom.a, geom.L
        amp = math.sqrt(mode.A_sq)
        scale = amp * mode.k_norm
        sample = {"index": i, "n": list(mode.n), "a": a, "L": L, "A": list(mode.A)}

        # tangential components on the six walls
        pts = rng.uniform(0.0, 1.0, size=(3,)) * np.array([L, L, a])
        worst = 0.0
        for axis, wall in ((0, 0.0), (0, L), (1, 0.0), (1, L), (2, 0.0), (2, a)):
            r = pts.copy()
            r[axis] = wall
            e = sw.mode_E(r, mode)
            tangential = [e[j] for j in range(3) if j != axis]
            worst = max(worst, max(abs(v) for v in tangential) / amp)
        boundary.record(worst, sample)

        r = rng.uniform(0.05, 0.95, size=3) * np.array([L, L, a])
        h = 1e-6 * a
        jac = _fd_jacobian(mode, r, h)
        div_fd = float(np.trace(jac))
        divergence.record(abs(div_fd) / scale, sample)
        div_an = float(sw.divergence_E(r, mode))
        div_analytic.record(abs(div_fd - div_an) / scale, sample)
        curl_fd = np.array(
            [jac[2, 1] - jac[1, 2], jac[0, 2] - jac[2, 0], jac[1, 0] - jac[0, 1]]
        )
        curl_an = -mode.omega * sw.mode_B(r, mode)
        curl.record(float(np.linalg.norm(curl_fd - curl_an) / np.linalg.norm(curl_an)), sample)

        try:
            assembled = sw.sigma_zz_assembled(mode)
            closed = sw.sigma_zz_closed(mode.A_sq, mode.k)
            stress.record(abs(assembled - closed) / abs(closed), sample)
        except sw.TransversalityError:
            stress.record(math.inf, sample)
    return CheckReport(samples, seed, [boundary, divergence, div_analytic, curl, stress])
