"""Displaced squeezed states ``|Psi(alpha, zeta)> = D(alpha) S(zeta) |0>``.

``zeta = r e^{i theta}`` and the squeezing operator is
``S(zeta) = exp((zeta* a^2 - zeta a^dag^2) / 2)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError

MAX_SQUEEZING = 20.0
_SIGMA_FLOOR = 1e-300
DB_PER_NEPER = 20.0 / math.log(10.0)


def wrap_angle(theta: float) -> float:
    """Map an angle into ``(-pi, pi]``."""
    wrapped = math.remainder(float(theta), 2.0 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


@dataclass(frozen=True)
class GaussianStateParams:
    """Displacement ``alpha`` plus squeezing magnitude ``r`` and phase ``theta``.

    ``theta`` is stored in ``(-pi, pi]``. ``r == 0`` is the coherent state ``|alpha>``.
    """

    alpha: complex
    r: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        alpha = complex(self.alpha)
        if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
            raise DomainError(f"displacement alpha={alpha!r} must be finite")
        r = float(self.r)
        if not 0.0 <= r <= MAX_SQUEEZING:
            raise DomainError(f"squeezing r={r!r} is outside [0, {MAX_SQUEEZING}]")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    @property
    def zeta(self) -> complex:
        return self.r * cmath.exp(1j * self.theta)

    @property
    def photons(self) -> float:
        """Displacement photon number ``|alpha|^2`` (excludes ``sinh^2 r``)."""
        return abs(self.alpha) ** 2

    def conjugate(self) -> "GaussianStateParams":
        return GaussianStateParams(self.alpha.conjugate(), self.r, -self.theta)

    def coherent_part(self) -> "GaussianStateParams":
        return GaussianStateParams(self.alpha, 0.0, 0.0)


def _overlap(a1, r1, t1, a2, r2, t2):
    """Broadcasting kernel of ``<Psi(a1, r1 e^{i t1}) | Psi(a2, r2 e^{i t2})>``."""
    ch1, sh1 = np.cosh(r1), np.sinh(r1)
    ch2, sh2 = np.cosh(r2), np.sinh(r2)
    sigma21 = ch2 * ch1 - np.exp(1j * (t2 - t1)) * sh2 * sh1
    d = a2 - a1
    kappa21 = d * ch2 + np.conj(d) * np.exp(1j * t2) * sh2
    kappa12 = -d * ch1 - np.conj(d) * np.exp(1j * t1) * sh1
    phase = 0.5 * (a2 * np.conj(a1) - np.conj(a2) * a1)
    return np.exp(kappa21 * np.conj(kappa12) / (2.0 * sigma21) + phase) / np.sqrt(sigma21), sigma21


def overlap_squeezed(s1: GaussianStateParams, s2: GaussianStateParams) -> complex:
    """Analytic inner product ``<s1|s2>`` of two displaced squeezed states.

    Uses the principal branch of ``sqrt(sigma_21)``; ``Re sigma_21 > 0`` always
    holds (``cosh r1 cosh r2 > sinh r1 sinh r2``), so the branch is never
    ambiguous.
    """
    value, sigma = _overlap(s1.alpha, s1.r, s1.theta, s2.alpha, s2.r, s2.theta)
    if abs(sigma) < _SIGMA_FLOOR:
        raise ConsistencyError(f"|sigma_21|={abs(sigma)!r} underflows")
    return complex(value)


def conjugate_pair(n: float, phi: float, r: float = 0.0, theta: float = 0.0):
    """``(Psi(alpha, zeta), Psi(alpha*, zeta*))`` with ``alpha = sqrt(n) e^{i phi/2}``."""
    n = float(n)
    if n < 0.0:
        raise DomainError(f"photon number n={n!r} must be non-negative")
    first = GaussianStateParams(math.sqrt(n) * cmath.exp(0.5j * phi), r, theta)
    return first, first.conjugate()


def squeezing_db(r: float) -> float:
    """Quadrature noise reduction ``10 log10(e^{2r})`` in decibels."""
    if r < 0.0:
        raise DomainError(f"squeezing r={r!r} must be non-negative")
    return DB_PER_NEPER * r


def db_to_r(db: float) -> float:
    if db < 0.0:
        raise DomainError(f"squeezing {db!r} dB must be non-negative")
    return db / DB_PER_NEPER
