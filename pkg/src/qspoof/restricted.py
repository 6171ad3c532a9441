"""Spoofer restricted to coherent states facing a squeezed-state transmitter.

The transmitter uses the conjugate squeezed pair ``|phi> = Psi(alpha, zeta)``,
``|xi> = Psi(alpha*, zeta*)``. The spoofer still discriminates that pair with
the Helstrom accuracy ``gamma`` but can only answer with ``|alpha>`` or
``|alpha*>``. The difference operator
``p (gamma |a><a| + (1-gamma) |a*><a*|) - (1-p) |phi><phi|`` has rank at most
three and its nonzero eigenvalues solve a real cubic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError
from .gaussian import GaussianStateParams, _overlap, conjugate_pair, overlap_squeezed
from .helstrom import check_prior, helstrom_gamma

DISCRIMINANT_TOL = 1e-10


@dataclass(frozen=True)
class CubicCoefficients:
    """``a3 eta^3 + a2 eta^2 + a1 eta + a0 = 0``."""

    a3: float
    a2: float
    a1: float
    a0: float

    def __call__(self, eta):
        return ((self.a3 * eta + self.a2) * eta + self.a1) * eta + self.a0


@dataclass(frozen=True)
class RestrictedScenario:
    p: float
    pair: tuple[GaussianStateParams, GaussianStateParams]
    spoof_pair: tuple[GaussianStateParams, GaussianStateParams]
    gamma: float
    ov_ab: complex
    ov_av: complex
    ov_bv: complex

    @property
    def transmit_overlap(self) -> complex:
        return overlap_squeezed(*self.pair)


def restricted_scenario(p: float, n: float, phi: float, r: float, theta: float) -> RestrictedScenario:
    p = check_prior(p)
    pair = conjugate_pair(n, phi, r, theta)
    a, b = pair[0].coherent_part(), pair[1].coherent_part()
    t2 = min(abs(overlap_squeezed(*pair)) ** 2, 1.0)
    return RestrictedScenario(
        p=p,
        pair=pair,
        spoof_pair=(a, b),
        gamma=helstrom_gamma(t2),
        ov_ab=overlap_squeezed(a, b),
        ov_av=overlap_squeezed(a, pair[0]),
        ov_bv=overlap_squeezed(b, pair[0]),
    )


def _coefficients(p, gamma, ov_ab, ov_av, ov_bv):
    """``(a1, a0)`` of the characteristic cubic; ``a3 = -1`` and ``a2 = 2p - 1``.

    ``a1`` is evaluated as minus the sum of the principal 2x2 minors of
    ``diag(w) G`` (``w`` the hypothesis weights, ``G`` the Gram matrix of
    ``|a>, |a*>, |phi>``). Expanded, this is the textbook polynomial in ``p``
    and ``gamma``; the factored form keeps exact zeros when overlaps are 1.
    """
    t_ab = np.abs(ov_ab) ** 2
    t_av = np.abs(ov_av) ** 2
    t_bv = np.abs(ov_bv) ** 2
    w1 = p * gamma
    w2 = p * (1.0 - gamma)
    w3 = -(1.0 - p)
    a1 = -(w1 * w2 * (1.0 - t_ab) + w1 * w3 * (1.0 - t_av) + w2 * w3 * (1.0 - t_bv))
    # det G via the Schur complement of <a|a>; the textbook expansion
    # 1 - t_ab - t_av - t_bv + 2 Re<a|b><b|phi><phi|a> cancels to rounding
    # noise when |phi> is close to the span of the coherent pair
    det_g = (1.0 - t_ab) * (1.0 - t_av) - np.abs(ov_bv - np.conj(ov_ab) * ov_av) ** 2
    a0 = w1 * w2 * w3 * det_g
    return a1, a0


def _expanded_coefficients(p, gamma, t_ab, t_av, t_bv, triple_re):
    """The four coefficients written out term by term (reference form)."""
    q = 1.0 - p
    a1 = (
        p * (-p * gamma + p * gamma**2 - p + 1.0)
        + p * p * gamma * (1.0 - gamma) * t_ab
        - p * (1.0 - gamma) * q * t_bv
        - p * gamma * q * t_av
    )
    a0 = p * p * gamma * (1.0 - gamma) * q * (t_ab + t_bv + t_av - 1.0 - 2.0 * triple_re)
    return -1.0, 2.0 * p - 1.0, a1, a0


def cubic_coefficients(s: RestrictedScenario) -> CubicCoefficients:
    a1, a0 = _coefficients(s.p, s.gamma, s.ov_ab, s.ov_av, s.ov_bv)
    return CubicCoefficients(-1.0, 2.0 * s.p - 1.0, float(a1), float(a0))


def _trig_roots(a3, a2, a1, a0):
    """Three real roots (descending) of a batch of cubics with a real spectrum.

    Returns ``(roots, excess)``. ``excess`` is the positive part of the Cardano
    discriminant ``qq^2/4 + pp^3/27`` in units of ``scale^6``; a value beyond
    rounding means the cubic has a complex pair of roots. ``scale`` never drops
    below 1: the spectra solved here live on the unit scale, and a cluster of
    roots near zero must not be judged against its own vanishing size.
    """
    b = a2 / a3
    c = a1 / a3
    d = a0 / a3
    shift = b / 3.0
    pp = c - b * b / 3.0
    qq = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    scale = np.maximum.reduce([np.abs(b), np.sqrt(np.abs(c)), np.cbrt(np.abs(d)), np.ones_like(b)])
    m = np.sqrt(np.maximum(-pp / 3.0, 0.0))
    degenerate = m <= 1e-12 * scale
    safe_m = np.where(degenerate, 1.0, m)
    arg = np.where(degenerate, 0.0, -qq / (2.0 * safe_m**3))
    excess = np.maximum(qq * qq / 4.0 + pp**3 / 27.0, 0.0) / scale**6
    angle = np.arccos(np.clip(arg, -1.0, 1.0)) / 3.0
    k = np.arange(3).reshape((3,) + (1,) * np.ndim(b))
    t = 2.0 * m * np.cos(angle - 2.0 * np.pi * k / 3.0)
    # triple root: t^3 + qq = 0
    t = np.where(degenerate, np.cbrt(-qq), t)
    roots = t - shift
    # Only the root farthest from the centroid is well conditioned in the
    # trigonometric form; the remaining pair comes from Vieta's relations.
    far = np.argmax(np.abs(t), axis=0)
    r0 = np.take_along_axis(roots, far[None, ...], axis=0)[0]
    s = -b - r0
    use_d = np.abs(r0) > 1e-3 * scale
    prod = np.where(use_d, -d / np.where(use_d, r0, 1.0), c - r0 * s)
    disc = np.maximum(s * s - 4.0 * prod, 0.0)
    q = 0.5 * (s + np.copysign(np.sqrt(disc), s))
    r1 = q
    r2 = np.where(q != 0.0, prod / np.where(q == 0.0, 1.0, q), 0.0)
    roots = np.stack([r0, r1, r2])
    return -np.sort(-roots, axis=0), excess


def solve_cubic_real(c: CubicCoefficients) -> tuple[float, float, float]:
    """Real roots of a cubic known to have a real spectrum, largest first."""
    if c.a3 == 0.0:
        raise DomainError("leading coefficient a3 must be nonzero")
    roots, excess = _trig_roots(*(np.asarray(v, dtype=float) for v in (c.a3, c.a2, c.a1, c.a0)))
    if float(excess) > DISCRIMINANT_TOL:
        raise ConsistencyError(f"cubic {c} has complex roots (discriminant excess {float(excess):.3e})")
    return tuple(float(x) for x in roots)


def restricted_success(s: RestrictedScenario) -> float:
    """Success probability ``(1 + sum |eta_i|) / 2`` over the three cubic roots."""
    roots = solve_cubic_real(cubic_coefficients(s))
    ps = 0.5 * (1.0 + sum(abs(x) for x in roots))
    return min(ps, 1.0)


def restricted_success_grid(p, n, r, phi, theta):
    """Vectorized restricted success probability over broadcast ``(phi, theta)`` arrays.

    Returns ``(ps_bar, gamma)`` with the same broadcast shape. Used by the
    angle optimizer; scalar callers should prefer :func:`restricted_success`.
    """
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    phi, theta = np.broadcast_arrays(phi, theta)
    alpha = math.sqrt(n) * np.exp(0.5j * phi)
    ca = np.conj(alpha)
    zero = np.zeros_like(phi)
    ov_pair, _ = _overlap(alpha, r, theta, ca, r, -theta)
    t2 = np.minimum(np.abs(ov_pair) ** 2, 1.0)
    gamma = 0.5 + 0.5 * np.sqrt(1.0 - t2)
    ov_ab, _ = _overlap(alpha, zero, zero, ca, zero, zero)
    ov_av, _ = _overlap(alpha, zero, zero, alpha, r, theta)
    ov_bv, _ = _overlap(ca, zero, zero, alpha, r, theta)
    a1, a0 = _coefficients(p, gamma, ov_ab, ov_av, ov_bv)
    a3 = np.full_like(phi, -1.0)
    a2 = np.full_like(phi, 2.0 * p - 1.0)
    roots, _ = _trig_roots(a3, a2, a1, a0)
    ps = np.minimum(0.5 * (1.0 + np.abs(roots).sum(axis=0)), 1.0)
    return ps, gamma


def transmit_overlap_grid(n, r, phi, theta):
    """``|<phi|xi>|^2`` of the conjugate squeezed pair over broadcast angle arrays."""
    phi, theta = np.broadcast_arrays(np.asarray(phi, dtype=float), np.asarray(theta, dtype=float))
    alpha = math.sqrt(n) * np.exp(0.5j * phi)
    ov, _ = _overlap(alpha, r, theta, np.conj(alpha), r, -theta)
    return np.abs(ov) ** 2


def restricted_success_at(p: float, n: float, phi: float, r: float, theta: float) -> float:
    return restricted_success(restricted_scenario(p, n, phi, r, theta))
