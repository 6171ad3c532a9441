"""Two-hypothesis spoofing detection for an arbitrary pair of pure states.

The transmitter picks one of two pure states with equal probability. A
spoofer measures the pulse, discriminates the two states with probability
``gamma`` and re-emits its guess. The receiver then has to tell a true
reflection ``rho_1 = |a><a|`` from a spoof
``rho_2 = gamma |a><a| + (1 - gamma) |b><b|``, where ``p`` is the prior
probability of a spoof.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ConsistencyError, DomainError

RADICAND_TOL = 1e-14


class Regime(str, enum.Enum):
    QUANTUM = "quantum"
    CLASSICAL = "classical"


@dataclass(frozen=True)
class TwoStateDetectionReport:
    """Outcome of the optimal receiver measurement.

    ``eta_plus`` and ``eta_minus`` are ``1/2 - p +/- chi``. They are the
    eigenvalues of ``(1 - p) rho_1 - p rho_2``, so they sum to ``1 - 2p``;
    only their magnitudes enter ``ps``.
    """

    p: float
    gamma: float
    chi: float
    eta_plus: float
    eta_minus: float
    regime: Regime
    ps: float
    gain: float

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "gamma": self.gamma,
            "chi": self.chi,
            "eta_plus": self.eta_plus,
            "eta_minus": self.eta_minus,
            "regime": self.regime.value,
            "ps": self.ps,
            "gain": self.gain,
        }


def check_prior(p: float, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"{name}={p!r} is not a probability in [0, 1]")
    return p


def check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not 0.5 <= gamma <= 1.0:
        raise DomainError(f"gamma={gamma!r} is outside [1/2, 1]")
    return gamma


def helstrom_gamma(t2: float) -> float:
    """Optimal probability of discriminating two pure states with ``|<a|b>|^2 = t2``."""
    t2 = float(t2)
    if not 0.0 <= t2 <= 1.0:
        raise DomainError(f"squared overlap t2={t2!r} is outside [0, 1]")
    return 0.5 + 0.5 * math.sqrt(1.0 - t2)


def chi(p: float, gamma: float) -> float:
    p = check_prior(p)
    gamma = check_gamma(gamma)
    radicand = (0.5 - p) ** 2 - p * (1.0 - gamma) * (p * gamma - 1.0 + p) * (2.0 * gamma - 1.0) ** 2
    if radicand < 0.0:
        if radicand < -RADICAND_TOL:
            raise ConsistencyError(f"negative radicand {radicand!r} for p={p!r}, gamma={gamma!r}")
        radicand = 0.0
    return math.sqrt(radicand)


def classical_limit(p: float) -> float:
    """Success probability when the two states are perfectly distinguishable."""
    p = check_prior(p)
    return max(p, 1.0 - p)


def success_probability(p: float, gamma: float) -> TwoStateDetectionReport:
    """Optimal receiver success probability against a spoofer with accuracy ``gamma``.

    Below the threshold ``p < 1/(1 + gamma)`` the two eigenvalues have
    opposite signs and the receiver beats the classical limit; above it the
    difference operator is semidefinite and the best strategy is to always
    guess "spoof", giving ``ps = p``.
    """
    p = check_prior(p)
    gamma = check_gamma(gamma)
    x = chi(p, gamma)
    eta_plus = 0.5 - p + x
    eta_minus = 0.5 - p - x
    if p < 1.0 / (1.0 + gamma):
        regime = Regime.QUANTUM
        ps = 0.5 + x
    else:
        regime = Regime.CLASSICAL
        ps = p
    return TwoStateDetectionReport(
        p=p,
        gamma=gamma,
        chi=x,
        eta_plus=eta_plus,
        eta_minus=eta_minus,
        regime=regime,
        ps=ps,
        gain=max(ps - max(p, 1.0 - p), 0.0),
    )


def _optimum_discriminant(p: float) -> float:
    disc = 33.0 * p * p - 34.0 * p + 9.0
    # minimum of the quadratic is 8/33 at p = 17/33
    assert disc > 0.0, disc
    return disc


def gamma_opt(p: float) -> float:
    """Spoofer accuracy that maximizes the receiver's success probability.

    Evaluates ``(p + 3 - sqrt(33p^2 - 34p + 9)) / (8p)`` in the rationalized
    form ``(5 - 4p) / (p + 3 + sqrt(...))``, which is free of cancellation
    and continuous at ``p = 0`` (limit 5/6). For ``p >= 2/3`` the stationary
    point drops below 1/2 and the result is clamped to 1/2: there every
    ``gamma`` gives ``ps = p`` and 1/2 is also a root of the stationarity
    cubic.
    """
    p = check_prior(p)
    g = (5.0 - 4.0 * p) / (p + 3.0 + math.sqrt(_optimum_discriminant(p)))
    return min(max(g, 0.5), 1.0)


def optimal_overlap(p: float) -> float:
    """Squared overlap ``|tau_opt|^2`` a state pair needs to saturate the bound.

    Computed as ``1 - (2 gamma_opt - 1)^2 = 4 gamma_opt (1 - gamma_opt)``,
    which equals the closed form
    ``(26p - 13p^2 - 9 + 3(1 - p) sqrt(33p^2 - 34p + 9)) / (8p^2)`` on
    ``(0, 2/3]`` without its loss of precision at small ``p``.
    """
    p = check_prior(p)
    if p == 0.0:
        raise DomainError("optimal overlap is singular at p=0; use gamma_opt(0) instead")
    g = gamma_opt(p)
    return min(4.0 * g * (1.0 - g), 1.0)


def optimal_overlap_closed_form(p: float) -> float:
    """Literal closed form of the optimal squared overlap (valid on ``(0, 2/3]``)."""
    p = check_prior(p)
    if p == 0.0:
        raise DomainError("optimal overlap is singular at p=0")
    root = math.sqrt(_optimum_discriminant(p))
    return (26.0 * p - 13.0 * p * p - 9.0 + 3.0 * (1.0 - p) * root) / (8.0 * p * p)


def stationarity_cubic(p: float, gamma: float) -> float:
    """Residual of ``16p g^3 - 12(p + 1) g^2 + (16 - 6p) g + 4p - 5``."""
    return 16.0 * p * gamma**3 - 12.0 * (p + 1.0) * gamma**2 + (16.0 - 6.0 * p) * gamma + 4.0 * p - 5.0


def quantum_gain(p: float, gamma: float) -> float:
    """Excess of ``ps`` over the classical limit ``max(p, 1 - p)``."""
    return success_probability(p, gamma).gain


def bound_summary(p: float) -> dict:
    """The universal bound at prior ``p`` as a flat mapping."""
    p = check_prior(p)
    g = gamma_opt(p)
    report = success_probability(p, g)
    return {
        "p": p,
        "gamma_opt": g,
        "tau2_opt": optimal_overlap(p) if p > 0.0 else 1.0 - (2.0 * g - 1.0) ** 2,
        "ps_opt": report.ps,
        "ps_classical": classical_limit(p),
        "gain": report.gain,
    }
