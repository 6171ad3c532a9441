"""Brute-force ground truth in a truncated photon-number basis.

Nothing here uses the analytic overlap or cubic formulas: states are built by
exponentiating ladder-operator generators and the success probability is the
trace norm of a dense difference operator.

Operators are plain ``complex128`` arrays of shape ``(dim, dim)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import DomainError, TruncationError
from .gaussian import GaussianStateParams
from .helstrom import check_prior

TRUNC_TOL = 1e-8
HERMITIAN_TOL = 1e-12
MAX_DIM = 256
MAX_EXPONENT_NORM = 1e4


@dataclass(frozen=True)
class FockState:
    """Photon-number amplitudes ``amplitudes[k] = <k|psi>`` for ``k < dim``."""

    amplitudes: np.ndarray

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm_deficit(self) -> float:
        return float(1.0 - np.vdot(self.amplitudes, self.amplitudes).real)


def annihilation(dim: int) -> np.ndarray:
    if dim < 2:
        raise DomainError(f"dim={dim!r} must be at least 2")
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def matrix_exponential(m: np.ndarray) -> np.ndarray:
    """Padé scaling-and-squaring (``scipy.linalg.expm``) with a norm guard."""
    m = np.asarray(m)
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    norm = np.linalg.norm(m, 1) if m.size else 0.0
    if norm > MAX_EXPONENT_NORM:
        raise DomainError(f"matrix 1-norm {norm:.3e} exceeds the exponentiation budget {MAX_EXPONENT_NORM:.0e}")
    return scipy.linalg.expm(m)


def suggest_dim(*states: GaussianStateParams, trunc_tol: float = TRUNC_TOL) -> int:
    """Heuristic truncation size; the norm-deficit check stays authoritative.

    Combines the displacement window ``(|alpha| cosh r + 4)^2 + 20`` with the
    length of the geometric ``tanh^2 r`` tail of the squeezed vacuum.
    """
    dim = 2
    for s in states:
        window = (abs(s.alpha) * math.cosh(s.r) + 4.0) ** 2 + 20.0
        tail = 0.0
        if s.r > 0.0:
            t2 = math.tanh(s.r) ** 2
            # the tail beyond 2m photons is roughly t2^m / ((1 - t2) cosh r)
            tail = 2.0 * math.log(trunc_tol * (1.0 - t2) * math.cosh(s.r)) / math.log(t2)
            tail += 4.0 * abs(s.alpha) * math.exp(s.r) + 20.0
        dim = max(dim, math.ceil(max(window, tail)))
    return min(dim, MAX_DIM)


def prepare_state(s: GaussianStateParams, dim: int, trunc_tol: float = TRUNC_TOL) -> FockState:
    """``D(alpha) S(zeta) |0>`` truncated to the first ``dim`` number states.

    Exponentials of anti-Hermitian generators are unitary in any truncated
    space, so the norm inside the same space cannot reveal truncation. The
    generators are therefore exponentiated in a padded space of size
    ``dim + max(dim // 2, 32)`` and the result is cut back to ``dim``; the weight lost in the
    cut is the truncation diagnostic. The vector is not renormalized.
    """
    if dim < 2:
        raise DomainError(f"dim={dim!r} must be at least 2")
    work = dim + max(dim // 2, 32)
    a = annihilation(work)
    ad = a.conj().T
    vac = np.zeros(work, dtype=complex)
    vac[0] = 1.0
    psi = vac
    if s.r > 0.0:
        zeta = s.zeta
        psi = matrix_exponential(0.5 * (np.conj(zeta) * (a @ a) - zeta * (ad @ ad))) @ psi
    if s.alpha != 0.0:
        psi = matrix_exponential(s.alpha * ad - np.conj(s.alpha) * a) @ psi
    state = FockState(psi[:dim].copy())
    deficit = state.norm_deficit
    if deficit >= trunc_tol:
        suggestion = max(suggest_dim(s, trunc_tol=trunc_tol), 2 * dim)
        raise TruncationError(
            f"dim={dim} loses {deficit:.3e} of the norm (budget {trunc_tol:.0e}); retry with dim>={suggestion}",
            deficit=deficit,
            suggested_dim=suggestion,
        )
    return state


def overlap_numeric(s1: GaussianStateParams, s2: GaussianStateParams, dim: int, trunc_tol: float = TRUNC_TOL) -> complex:
    v1 = prepare_state(s1, dim, trunc_tol).amplitudes
    v2 = prepare_state(s2, dim, trunc_tol).amplitudes
    return complex(np.vdot(v1, v2))


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, largest first (LAPACK ``heevd``)."""
    m = np.asarray(m)
    asym = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if asym >= HERMITIAN_TOL:
        raise DomainError(f"matrix is not Hermitian (max |M - M^dag| = {asym:.3e})")
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))[::-1]


def projector(state: FockState) -> np.ndarray:
    v = state.amplitudes
    return np.outer(v, v.conj())


def difference_operator(
    p: float,
    h1_state: GaussianStateParams,
    h2_mixture: Sequence[tuple[float, GaussianStateParams]],
    dim: int,
    trunc_tol: float = TRUNC_TOL,
) -> np.ndarray:
    """Dense ``p rho_2 - (1 - p) rho_1`` with ``rho_1`` pure and ``rho_2`` a mixture."""
    p = check_prior(p)
    weights = [float(w) for w, _ in h2_mixture]
    if any(w < 0.0 for w in weights) or abs(sum(weights) - 1.0) > 1e-12:
        raise DomainError(f"mixture weights {weights!r} must be non-negative and sum to 1")
    op = -(1.0 - p) * projector(prepare_state(h1_state, dim, trunc_tol))
    for w, s in h2_mixture:
        if w > 0.0:
            op = op + p * w * projector(prepare_state(s, dim, trunc_tol))
    return op


def success_probability_numeric(
    p: float,
    h1_state: GaussianStateParams,
    h2_mixture: Sequence[tuple[float, GaussianStateParams]],
    dim: int,
    trunc_tol: float = TRUNC_TOL,
) -> float:
    """``1/2 + 1/2 ||p rho_2 - (1 - p) rho_1||_1`` by full diagonalization."""
    eig = hermitian_eigenvalues(difference_operator(p, h1_state, h2_mixture, dim, trunc_tol))
    return 0.5 + 0.5 * float(np.sum(np.abs(eig)))


def spoof_mixture(gamma: float, first: GaussianStateParams, second: GaussianStateParams):
    """The spoofer's output ``gamma |first><first| + (1 - gamma) |second><second|``."""
    return [(gamma, first), (1.0 - gamma, second)]
