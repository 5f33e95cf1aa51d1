"""Physical constants (CODATA 2018, SI units).

All numerical modules take their constants from :func:`constants_codata`;
nothing else in the package hard-codes a physical value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

__all__ = ["CONSTANTS_VERSION", "PhysicalConstants", "constants_codata"]

CONSTANTS_VERSION = "CODATA-2018"


@dataclass(frozen=True)
class PhysicalConstants:
    """Immutable record of the constants used throughout the package.

    ``kappa`` is derived as ``k_B / (hbar * c)`` and cannot be passed in.
    """

    hbar: float  # J s
    c: float  # m / s
    k_B: float  # J / K
    eps0: float  # F / m
    mu0: float  # H / m
    kappa: float = field(init=False)  # 1 / (m K)

    def __post_init__(self) -> None:
        for name in ("hbar", "c", "k_B", "eps0", "mu0"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        object.__setattr__(self, "kappa", self.k_B / (self.hbar * self.c))

    @property
    def hbar_c(self) -> float:
        return self.hbar * self.c


@lru_cache(maxsize=None)
def constants_codata() -> PhysicalConstants:
    """Return the CODATA 2018 constant set.

    c and k_B are exact SI values, hbar is h / (2 pi) rounded to CODATA's
    printed digits.  eps0 is derived as 1 / (mu0 c^2) from the recommended
    mu0; it matches the recommended 8.8541878128e-12 F/m within its
    uncertainty, while the two printed values on their own violate
    eps0 mu0 c^2 = 1 by ~4e-14.
    """
    c = 299792458.0
    mu0 = 1.25663706212e-6
    return PhysicalConstants(
        hbar=1.054571817e-34,
        c=c,
        k_B=1.380649e-23,
        eps0=1.0 / (mu0 * c * c),
        mu0=mu0,
    )
