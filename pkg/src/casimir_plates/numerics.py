r"""Adaptive quadrature and series summation kernels.

Integrands are called with 1-D numpy arrays of abscissae and must return an
array of the same shape.  Series terms are called with a positive ``int``.

The semi-infinite integrator works in two phases.  Panels of geometrically
growing width are laid down from the lower limit until the integrand has
peaked and the latest panel is negligible; the remaining tail
:math:`[M, \infty)` is mapped onto :math:`(0, 1]` by

.. math::
    x = M - \ln(u) / \alpha,

with :math:`\alpha` half the local logarithmic decay rate at :math:`M`, so
an exponentially decaying integrand becomes a smooth function of ``u``
vanishing at ``u = 0``.  All panels, including the mapped tail, are then
refined together by a globally adaptive Gauss-Kronrod (7, 15) scheme.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "QuadratureResult",
    "SeriesResult",
    "ConvergenceError",
    "QuadratureError",
    "SeriesError",
    "integrate_interval",
    "integrate_semi_infinite",
    "sum_series",
]

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Tolerance:
    """Accuracy request shared by every kernel.

    Convergence means ``error <= max(abs, rel * |value|)``.  ``max_evals``
    caps integrand evaluations (quadrature) or terms (series).
    """

    rel: float = 1e-10
    abs: float = 0.0
    max_evals: int = 10**6

    def __post_init__(self) -> None:
        if not self.rel > 0:
            raise ValueError("rel must be > 0")
        if not self.abs >= 0:
            raise ValueError("abs must be >= 0")
        if int(self.max_evals) != self.max_evals or self.max_evals < 1:
            raise ValueError("max_evals must be an integer >= 1")

    def target(self, value: float) -> float:
        return max(self.abs, self.rel * abs(value))


DEFAULT_TOLERANCE = Tolerance()


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class SeriesResult:
    value: float
    error_estimate: float
    terms_used: int


class ConvergenceError(RuntimeError):
    """Raised when a kernel exhausts its budget; carries the partial result."""

    def __init__(self, message: str, partial):
        super().__init__(message)
        self.partial = partial


class QuadratureError(ConvergenceError):
    pass


class SeriesError(ConvergenceError):
    pass


# Gauss-Kronrod (7, 15) abscissae and weights on [-1, 1] (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes (x_1, x_3, x_5, x_7 = 0).
_GWEIGHTS = np.zeros(15)
_GWEIGHTS[[1, 3, 5]] = _WG[:3]
_GWEIGHTS[[13, 11, 9]] = _WG[:3]
_GWEIGHTS[7] = _WG[3]
_EPS = np.finfo(float).eps


def _gk15(g: Integrand, a: float, b: float) -> tuple[float, float]:
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fv = np.asarray(g(center + half * _NODES), dtype=float)
    if fv.shape != (15,):
        fv = np.broadcast_to(fv, (15,))
    if not np.all(np.isfinite(fv)):
        raise FloatingPointError(f"non-finite integrand value on [{a}, {b}]")
    kronrod = float(_KWEIGHTS @ fv)
    gauss = float(_GWEIGHTS @ fv)
    # QUADPACK error heuristic
    mean = 0.5 * kronrod
    resasc = abs(half) * float(_KWEIGHTS @ np.abs(fv - mean))
    resabs = abs(half) * float(_KWEIGHTS @ np.abs(fv))
    err = abs((kronrod - gauss) * half)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    if resabs > np.finfo(float).tiny / (50.0 * _EPS):
        err = max(err, 50.0 * _EPS * resabs)
    return kronrod * half, err


def _refine(
    segments: list[tuple[Integrand, float, float, float, float]],
    tol: Tolerance,
    evaluations: int,
) -> QuadratureResult:
    """Globally adaptive bisection over ``(g, a, b, value, error)`` segments."""
    heap = [(-err, i, g, a, b, val) for i, (g, a, b, val, err) in enumerate(segments)]
    heapq.heapify(heap)
    counter = len(heap)
    total = math.fsum(item[5] for item in heap)
    error = math.fsum(-item[0] for item in heap)
    while error > tol.target(total):
        if evaluations + 30 > tol.max_evals:
            partial = QuadratureResult(total, error, evaluations)
            raise QuadratureError(
                f"quadrature did not converge within {tol.max_evals} evaluations "
                f"(value={total!r}, error estimate={error!r})",
                partial,
            )
        neg_err, _, g, a, b, val = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        if not (a < mid < b):
            # interval exhausted at machine resolution; keep it as is
            heapq.heappush(heap, (0.0, counter, g, a, b, val))
            counter += 1
            error += neg_err
            continue
        v1, e1 = _gk15(g, a, mid)
        v2, e2 = _gk15(g, mid, b)
        evaluations += 30
        heapq.heappush(heap, (-e1, counter, g, a, mid, v1))
        heapq.heappush(heap, (-e2, counter + 1, g, mid, b, v2))
        counter += 2
        total += v1 + v2 - val
        error += e1 + e2 + neg_err
        if error < 0.0 or len(heap) % 64 == 0:
            total = math.fsum(item[5] for item in heap)
            error = math.fsum(-item[0] for item in heap)
    total = math.fsum(item[5] for item in heap)
    error = math.fsum(-item[0] for item in heap)
    return QuadratureResult(total, error, evaluations)


def integrate_interval(
    f: Integrand, a: float, b: float, tol: Tolerance = DEFAULT_TOLERANCE
) -> QuadratureResult:
    """Adaptive Gauss-Kronrod quadrature of ``f`` over the finite ``[a, b]``."""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("limits must be finite; use integrate_semi_infinite")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    if b < a:
        res = integrate_interval(f, b, a, tol)
        return QuadratureResult(-res.value, res.error_estimate, res.evaluations)
    val, err = _gk15(f, a, b)
    return _refine([(f, a, b, val, err)], tol, 15)


def integrate_semi_infinite(
    f: Integrand,
    lower: float,
    tol: Tolerance = DEFAULT_TOLERANCE,
    *,
    scale: float = 1.0,
) -> QuadratureResult:
    """Integrate ``f`` over ``[lower, inf)``.

    Parameters
    ----------
    f : callable
        Vectorised integrand, continuous on ``[lower, inf)`` and decaying at
        least exponentially.  It is never evaluated at ``lower`` itself.
    lower : float
        Finite lower limit.
    tol : Tolerance
    scale : float
        Width of the first marching panel; a rough length over which ``f``
        changes appreciably.

    Returns
    -------
    QuadratureResult

    Raises
    ------
    QuadratureError
        If the budget is exhausted or the integrand is not decaying where
        the tail map is attached.
    """
    if not math.isfinite(lower):
        raise ValueError("lower limit must be finite")
    if not scale > 0:
        raise ValueError("scale must be positive")

    segments = []
    evaluations = 0
    x0, h = float(lower), float(scale)
    running = 0.0
    prev_height = None
    for _ in range(200):
        x1 = x0 + h
        val, err = _gk15(f, x0, x1)
        evaluations += 15
        segments.append((f, x0, x1, val, err))
        running += val
        height = abs(val) / h
        decaying = prev_height is not None and height < prev_height
        if decaying and abs(val) <= 1e-3 * abs(running):
            break
        if running == 0.0 and val == 0.0 and prev_height == 0.0:
            break
        prev_height = height
        x0, h = x1, 2.0 * h
    else:
        partial = QuadratureResult(running, math.inf, evaluations)
        raise QuadratureError("integrand does not decay on the marching grid", partial)

    cut = x1
    probe = np.array([cut - 0.25 * h, cut])
    f_probe = np.abs(np.asarray(f(probe), dtype=float))
    evaluations += 2
    if f_probe[1] > 0.0:
        if not f_probe[0] > f_probe[1]:
            partial = QuadratureResult(running, math.inf, evaluations)
            raise QuadratureError(
                f"integrand is not decaying at x={cut!r}; tail map not applicable",
                partial,
            )
        alpha = 0.5 * math.log(f_probe[0] / f_probe[1]) / (0.25 * h)

        def tail(u: np.ndarray, _cut=cut, _alpha=alpha) -> np.ndarray:
            return f(_cut - np.log(u) / _alpha) / (_alpha * u)

        val, err = _gk15(tail, 0.0, 1.0)
        evaluations += 15
        segments.append((tail, 0.0, 1.0, val, err))

    return _refine(segments, tol, evaluations)


def sum_series(
    term: Callable[[int], float],
    tol: Tolerance = DEFAULT_TOLERANCE,
    *,
    algebraic: bool = False,
) -> SeriesResult:
    r"""Sum ``term(1) + term(2) + ...``.

    By default the terms are summed directly and summation stops once the
    geometric tail bound :math:`t_s r/(1-r)`, with :math:`r = t_s/t_{s-1}`
    taken from the last two terms, drops below the tolerance.  This is the
    right mode for every exponentially decaying series; terms may rise
    before they fall.

    ``algebraic=True`` is for tails decaying like a power of ``s`` (e.g.
    :math:`1/s^2`), where no geometric bound exists: partial sums on the
    doubling grid ``N = 8, 16, 32, ...`` are Richardson-extrapolated in
    ``1/N`` and the error estimate is the change between successive diagonal
    entries.

    Raises
    ------
    SeriesError
        The term budget ``tol.max_evals`` is exhausted, or (geometric mode)
        the terms start growing again after having decreased.
    """
    if algebraic:
        return _sum_richardson(term, tol)

    values: list[float] = []
    running = 0.0
    prev = None
    falling = 0
    for s in range(1, int(tol.max_evals) + 1):
        ts = float(term(s))
        if not math.isfinite(ts):
            raise SeriesError(f"non-finite term at s={s}", _partial(values))
        values.append(ts)
        running += ts
        if prev is not None:
            if ts == 0.0 and falling:
                return SeriesResult(math.fsum(values), 0.0, s)
            if prev != 0.0:
                r = abs(ts) / abs(prev)
                if r < 1.0:
                    falling += 1
                    bound = abs(ts) * r / (1.0 - r)
                    if bound <= tol.target(running):
                        return SeriesResult(math.fsum(values), bound, s)
                elif falling >= 5 and r > 1.0:
                    raise SeriesError(
                        f"terms increase again at s={s} after decreasing",
                        _partial(values),
                    )
                else:
                    falling = 0
        prev = ts
    raise SeriesError(
        f"series did not converge within {tol.max_evals} terms", _partial(values)
    )


def _partial(values: list[float]) -> SeriesResult:
    return SeriesResult(math.fsum(values), math.inf, max(len(values), 1))


def _sum_richardson(term: Callable[[int], float], tol: Tolerance) -> SeriesResult:
    n = 8
    values = [float(term(s)) for s in range(1, n + 1)]
    table: list[list[float]] = [[math.fsum(values)]]
    best, error = table[0][0], math.inf
    while True:
        if 2 * n > tol.max_evals:
            raise SeriesError(
                f"series did not converge within {tol.max_evals} terms",
                SeriesResult(best, error, n),
            )
        values.extend(float(term(s)) for s in range(n + 1, 2 * n + 1))
        n *= 2
        row = [math.fsum(values)]
        for k, prev in enumerate(table[-1], start=1):
            row.append(row[-1] + (row[-1] - prev) / (2.0**k - 1.0))
        table.append(row)
        error = abs(row[-1] - table[-2][-1])
        best = row[-1]
        if error <= tol.target(best):
            return SeriesResult(best, error, n)
