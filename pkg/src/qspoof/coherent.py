"""Conjugate coherent-state encoding ``|a> = |sqrt(n) e^{i phi/2}>``, ``|b> = |a*>``."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError
from .helstrom import (
    TwoStateDetectionReport,
    check_prior,
    helstrom_gamma,
    optimal_overlap,
    success_probability,
)


def _check_photons(n: float) -> float:
    n = float(n)
    if not (n >= 0.0 and math.isfinite(n)):
        raise DomainError(f"photon number n={n!r} must be finite and non-negative")
    return n


@dataclass(frozen=True)
class CoherentPairParams:
    n: float
    phi: float

    def __post_init__(self):
        _check_photons(self.n)
        if not 0.0 <= self.phi <= math.pi:
            raise DomainError(f"phase phi={self.phi!r} is outside [0, pi]")

    @property
    def alpha(self) -> complex:
        return math.sqrt(self.n) * cmath.exp(0.5j * self.phi)

    @property
    def beta(self) -> complex:
        return self.alpha.conjugate()


def overlap_coherent(n: float, phi: float) -> float:
    """``|<a|a*>|^2 = exp(-4 n sin^2(phi/2))``."""
    params = CoherentPairParams(n, phi)
    return math.exp(-4.0 * params.n * math.sin(0.5 * params.phi) ** 2)


def critical_photon_number(p: float) -> float:
    """Smallest ``n`` at which the optimal overlap is reachable (``phi = pi`` there)."""
    p = check_prior(p)
    if not 0.0 < p < 2.0 / 3.0:
        raise DomainError(f"p={p!r}: a critical photon number exists only for 0 < p < 2/3")
    return -math.log(optimal_overlap(p)) / 4.0


def phi_opt(n: float, p: float) -> float:
    """Phase that places the conjugate pair at the optimal overlap.

    Returns ``pi`` (overlap as small as possible) when ``n`` is below the
    critical photon number, and also for ``p >= 2/3`` where no overlap
    target exists and every phase attains ``ps = p``.
    """
    n = _check_photons(n)
    p = check_prior(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"p={p!r} must lie in (0, 1)")
    if n == 0.0 or p >= 2.0 / 3.0:
        return math.pi
    arg = -math.log(optimal_overlap(p)) / (4.0 * n)
    if arg >= 1.0:
        return math.pi
    return 2.0 * math.asin(math.sqrt(arg))


def coherent_success_at(n: float, phi: float, p: float) -> TwoStateDetectionReport:
    return success_probability(p, helstrom_gamma(overlap_coherent(n, phi)))


def coherent_success(n: float, p: float) -> TwoStateDetectionReport:
    """Detection report for the conjugate pair at the optimal phase."""
    return coherent_success_at(n, phi_opt(n, p), p)
