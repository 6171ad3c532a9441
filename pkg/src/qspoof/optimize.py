"""Angle optimization and parameter sweeps for the squeezed-state scenarios.

The free parameters are the displacement phase ``phi`` in ``(0, pi]`` and the
squeezing phase ``theta`` in ``(-pi, pi]``. Every optimization is a coarse
grid scan followed by a local polish; ties on the grid go to the smallest
``phi`` and then the smallest ``theta``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import brentq, minimize, minimize_scalar

from .coherent import coherent_success_at, overlap_coherent, phi_opt
from .errors import DomainError
from .gaussian import wrap_angle
from .helstrom import (
    Regime,
    check_prior,
    classical_limit,
    gamma_opt,
    helstrom_gamma,
    optimal_overlap,
    success_probability,
)
from .restricted import restricted_success_at, restricted_success_grid, transmit_overlap_grid


FINE_PHI_LEVELS = 24


@dataclass(frozen=True)
class OptimizationConfig:
    grid_phi: int = 121
    grid_theta: int = 121
    refine_tol: float = 1e-9
    constraint_tol: float = 1e-8
    max_refine_iters: int = 200

    def __post_init__(self):
        if self.grid_phi < 3 or self.grid_theta < 3:
            raise DomainError("grid resolutions must be at least 3")
        if self.refine_tol <= 0 or self.constraint_tol <= 0:
            raise DomainError("tolerances must be positive")
        if self.max_refine_iters < 1:
            raise DomainError("max_refine_iters must be positive")

    def phi_grid(self) -> np.ndarray:
        return np.linspace(0.0, math.pi, self.grid_phi + 1)[1:]

    def theta_grid(self) -> np.ndarray:
        return np.linspace(-math.pi, math.pi, self.grid_theta + 1)[1:]


@dataclass(frozen=True)
class OptimumReport:
    """Result of an angle optimization.

    ``history`` holds the best objective after the grid scan and after each
    refinement step. For constrained runs ``constraint_residual`` is
    ``|<phi|xi>|^2 - |tau_opt|^2`` at the returned angles and
    ``ps_unrestricted`` the success probability against a spoofer that can
    squeeze.
    """

    phi_star: float
    theta_star: float
    objective: float
    feasible: bool
    evaluations: int
    gamma: float = float("nan")
    constraint_residual: float | None = None
    ps_unrestricted: float | None = None
    history: tuple[float, ...] = ()

    def as_dict(self) -> dict:
        return {
            "phi_star": self.phi_star,
            "theta_star": self.theta_star,
            "objective": self.objective,
            "feasible": self.feasible,
            "evaluations": self.evaluations,
            "gamma": self.gamma,
            "constraint_residual": self.constraint_residual,
            "ps_unrestricted": self.ps_unrestricted,
        }


@dataclass(frozen=True)
class SweepTable:
    """Ordered flat records keyed by one or more sweep variables."""

    key: tuple[str, ...]
    records: tuple[dict, ...] = field(default_factory=tuple)

    def __post_init__(self):
        keys = [tuple(rec[k] for k in self.key) for rec in self.records]
        if keys != sorted(keys):
            raise ValueError(f"records are not sorted by {self.key}")
        if len(set(keys)) != len(keys):
            raise ValueError(f"duplicate sweep keys in {self.key}")

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def column(self, name: str) -> list:
        return [rec[name] for rec in self.records]


def _check_inputs(n: float, r: float, p: float):
    if not n >= 0.0:
        raise DomainError(f"photon number n={n!r} must be non-negative")
    if not r >= 0.0:
        raise DomainError(f"squeezing r={r!r} must be non-negative")
    p = check_prior(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"p={p!r} must lie in (0, 1)")
    return float(n), float(r), p


def maximize_restricted(n: float, r: float, p: float, config: OptimizationConfig | None = None) -> OptimumReport:
    """Maximize the coherent-only-spoofer success probability over ``(phi, theta)``."""
    config = config or OptimizationConfig()
    n, r, p = _check_inputs(n, r, p)
    phis, thetas = config.phi_grid(), config.theta_grid()
    values, _ = restricted_success_grid(p, n, r, phis[:, None], thetas[None, :])
    # np.argmax returns the first maximum in row-major order: smallest phi, then theta
    i, j = np.unravel_index(np.argmax(values), values.shape)
    best_phi, best_theta, best = float(phis[i]), float(thetas[j]), float(values[i, j])
    evaluations = values.size
    step_phi, step_theta = phis[1] - phis[0], thetas[1] - thetas[0]
    # large n pushes the optimum to phi ~ 1/sqrt(n), below the first grid
    # point, where the rest of the grid may sit on a flat classical plateau;
    # a geometric sub-grid toward phi = 0 covers that scale
    fine = phis[0] * 0.5 ** np.arange(1, FINE_PHI_LEVELS + 1)
    fine_values, _ = restricted_success_grid(p, n, r, fine[:, None], thetas[None, :])
    evaluations += fine_values.size
    k, j = np.unravel_index(np.argmax(fine_values), fine_values.shape)
    if fine_values[k, j] > best + config.refine_tol:
        best_phi, best_theta, best = float(fine[k]), float(thetas[j]), float(fine_values[k, j])
        step_phi = best_phi
    history = [best]

    def objective(x):
        return -restricted_success_at(p, n, x[0], r, x[1])

    def track(xk):
        history.append(max(history[-1], -objective(xk)))

    simplex = np.array(
        [[best_phi, best_theta], [best_phi - 0.5 * step_phi, best_theta], [best_phi, best_theta + 0.5 * step_theta]]
    )
    result = minimize(
        objective,
        x0=simplex[0],
        method="Nelder-Mead",
        bounds=[(0.0, math.pi), (None, None)],
        callback=track,
        options={
            "initial_simplex": simplex,
            "xatol": 1e-9,
            "fatol": config.refine_tol * 1e-2,
            "maxiter": config.max_refine_iters,
        },
    )
    evaluations += result.nfev
    # gains inside refine_tol are rounding noise on flat objectives; keep the tie-break point
    if -result.fun > best + config.refine_tol:
        best_phi, best_theta, best = float(result.x[0]), wrap_angle(result.x[1]), float(-result.fun)
    history.append(best)
    gamma = restricted_gamma(n, r, best_phi, best_theta)
    return OptimumReport(
        phi_star=best_phi,
        theta_star=best_theta,
        objective=best,
        feasible=True,
        evaluations=evaluations,
        gamma=gamma,
        history=tuple(history),
    )


def restricted_gamma(n: float, r: float, phi: float, theta: float) -> float:
    return helstrom_gamma(min(float(transmit_overlap_grid(n, r, phi, theta)), 1.0))


def _brackets(values: np.ndarray) -> list[int]:
    """Indices ``k`` with a sign change (or exact zero) between ``values[k]`` and ``values[k+1]``."""
    signs = np.sign(values)
    return [k for k in range(len(values) - 1) if signs[k] == 0 or signs[k] * signs[k + 1] < 0]


def maximize_joint(n: float, r: float, p: float, config: OptimizationConfig | None = None) -> OptimumReport:
    """Maximize the restricted success probability on the optimal-overlap level set.

    The constraint ``|<phi|xi>|^2 = |tau_opt(p)|^2`` makes the same pair
    saturate the universal bound against an unrestricted spoofer. Feasible
    points are located by bracketing sign changes of the residual along each
    grid line (in ``theta`` at fixed ``phi`` and in ``phi`` at fixed
    ``theta``) and solving each bracket to high accuracy. The best feasible
    point is then polished by a bounded one-dimensional search along the
    level set.
    """
    config = config or OptimizationConfig()
    n, r, p = _check_inputs(n, r, p)
    if not p < 2.0 / 3.0:
        raise DomainError(f"p={p!r}: the optimal-overlap constraint needs p < 2/3")
    target = optimal_overlap(p)
    # phi = 0 closes the scan: the overlap tends to 1 there, so large-n roots
    # below the first grid point still get a bracket
    phis = np.concatenate([[0.0], config.phi_grid()])
    # theta = 0 aligns both squeezing axes; under strong squeezing the feasible
    # band around it is far narrower than the grid step
    thetas = np.union1d(config.theta_grid(), [0.0])
    evaluations = 0

    def residual(phi, theta):
        return float(transmit_overlap_grid(n, r, phi, theta)) - target

    def objective(phi, theta):
        return restricted_success_at(p, n, phi, r, theta)

    grid = transmit_overlap_grid(n, r, phis[:, None], thetas[None, :]) - target
    evaluations += grid.size
    candidates = []  # (phi, theta, axis, lo, hi)
    for i, phi in enumerate(phis):
        for k in _brackets(grid[i, :]):
            lo, hi = thetas[k], thetas[k + 1]
            theta = lo if grid[i, k] == 0 else brentq(lambda t: residual(phi, t), lo, hi, xtol=1e-13, rtol=1e-15)
            candidates.append((float(phi), float(theta), "theta", float(lo), float(hi)))
    for j, theta in enumerate(thetas):
        for k in _brackets(grid[:, j]):
            lo, hi = phis[k], phis[k + 1]
            phi = lo if grid[k, j] == 0 else brentq(lambda f: residual(f, theta), lo, hi, xtol=1e-13, rtol=1e-15)
            candidates.append((float(phi), float(theta), "phi", float(lo), float(hi)))
    if not candidates:
        return OptimumReport(
            phi_star=float("nan"),
            theta_star=float("nan"),
            objective=float("nan"),
            feasible=False,
            evaluations=evaluations,
        )

    scored = []
    for phi, theta, axis, lo, hi in candidates:
        evaluations += 1
        scored.append((-objective(phi, theta), phi, theta, axis, lo, hi))
    scored.sort(key=lambda c: (c[0], c[1], c[2]))
    neg_best, best_phi, best_theta, axis, lo, hi = scored[0]
    best = -neg_best
    history = [best]

    # polish along the level set: the free coordinate moves, the other is re-solved
    step = (phis[1] - phis[0]) if axis == "theta" else (thetas[1] - thetas[0])
    free0 = best_phi if axis == "theta" else best_theta
    width = hi - lo

    def on_curve(free):
        if axis == "theta":
            f = lambda t: residual(free, t)
        else:
            f = lambda x: residual(x, free)
        a, b = lo - width, hi + width
        if axis == "phi":
            a, b = max(a, 0.0), min(b, math.pi)
        if f(a) * f(b) > 0:
            return None
        root = brentq(f, a, b, xtol=1e-13, rtol=1e-15)
        return (free, root) if axis == "theta" else (root, free)

    def neg_objective(free):
        point = on_curve(free)
        if point is None:
            return 0.0
        return -objective(*point)

    lo_free = free0 - step
    hi_free = free0 + step
    if axis == "theta":
        lo_free, hi_free = max(lo_free, 1e-12), min(hi_free, math.pi)
    polish = minimize_scalar(
        neg_objective,
        bounds=(lo_free, hi_free),
        method="bounded",
        options={"xatol": 1e-10, "maxiter": config.max_refine_iters},
    )
    evaluations += polish.nfev
    point = on_curve(float(polish.x))
    if point is not None:
        value = objective(*point)
        if value > best and abs(residual(*point)) < config.constraint_tol:
            best_phi, best_theta, best = point[0], point[1], value
    history.append(best)

    theta_out = wrap_angle(best_theta)
    res = residual(best_phi, theta_out)
    gamma = restricted_gamma(n, r, best_phi, theta_out)
    return OptimumReport(
        phi_star=float(best_phi),
        theta_star=theta_out,
        objective=best,
        feasible=abs(res) < config.constraint_tol,
        evaluations=evaluations,
        gamma=gamma,
        constraint_residual=res,
        ps_unrestricted=success_probability(p, gamma).ps,
        history=tuple(history),
    )


def _map(func, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _prior_record(p: float, n: float, r: float, config: OptimizationConfig) -> dict:
    opt = maximize_restricted(n, r, p, config)
    bound = success_probability(p, gamma_opt(p))
    return {
        "p": p,
        "n": n,
        "r": r,
        "phi": opt.phi_star,
        "theta": opt.theta_star,
        "gamma": opt.gamma,
        "ps_bar": opt.objective,
        "ps_bound": bound.ps,
        "ps_classical": classical_limit(p),
        "gain": opt.objective - classical_limit(p),
        "regime": bound.regime.value,
    }


def sweep_prior(
    n: float, r: float, p_grid: Iterable[float], config: OptimizationConfig | None = None, workers: int = 1
) -> SweepTable:
    """Optimized restricted success probability versus the prior (one record per ``p``)."""
    config = config or OptimizationConfig()
    ps = sorted(float(p) for p in p_grid)
    records = _map(partial(_prior_record, n=n, r=r, config=config), ps, workers)
    return SweepTable(key=("p",), records=tuple(records))


def _photon_record(n: float, p: float) -> dict:
    phi = phi_opt(n, p)
    at_pi = coherent_success_at(n, math.pi, p)
    at_opt = coherent_success_at(n, phi, p)
    return {
        "n": n,
        "p": p,
        "phi_opt": phi,
        "tau2_pi": overlap_coherent(n, math.pi),
        "tau2_opt": overlap_coherent(n, phi),
        "gamma_opt": at_opt.gamma,
        "ps_pi": at_pi.ps,
        "ps_opt": at_opt.ps,
        "gain": at_opt.gain,
        "regime": at_opt.regime.value,
    }


def sweep_photons(
    p: float, n_grid: Iterable[float], config: OptimizationConfig | None = None, workers: int = 1
) -> SweepTable:
    """Coherent pair at ``phi = pi`` and at the optimal phase versus photon number.

    ``config`` is accepted for signature symmetry; the coherent case is closed form.
    """
    ns = sorted(float(n) for n in n_grid)
    records = _map(partial(_photon_record, p=p), ns, workers)
    return SweepTable(key=("n",), records=tuple(records))


def _squeezing_record(key: tuple[float, float], p: float, config: OptimizationConfig) -> dict:
    n, r = key
    free = maximize_restricted(n, r, p, config)
    record = {
        "n": n,
        "r": r,
        "p": p,
        "phi": free.phi_star,
        "theta": free.theta_star,
        "ps_bar_restricted": free.objective,
        "feasible": False,
        "phi_joint": None,
        "theta_joint": None,
        "ps_bar_joint": None,
        "ps_unrestricted": None,
    }
    if p < 2.0 / 3.0:
        joint = maximize_joint(n, r, p, config)
        if joint.feasible:
            record.update(
                feasible=True,
                phi_joint=joint.phi_star,
                theta_joint=joint.theta_star,
                ps_bar_joint=joint.objective,
                ps_unrestricted=joint.ps_unrestricted,
            )
    return record


def sweep_squeezing(
    p: float,
    n_list: Iterable[float],
    r_grid: Iterable[float],
    config: OptimizationConfig | None = None,
    workers: int = 1,
) -> SweepTable:
    """Both spoofer models per ``(n, r)``.

    ``ps_bar_restricted`` is the unconstrained optimum against a coherent-only
    spoofer. The joint columns come from the optimal-overlap constrained
    optimum: ``ps_bar_joint`` against the coherent-only spoofer and
    ``ps_unrestricted`` against a spoofer that can squeeze. They are ``None``
    with ``feasible = False`` when the constraint cannot be met.
    """
    config = config or OptimizationConfig()
    keys = sorted((float(n), float(r)) for n in n_list for r in r_grid)
    records = _map(partial(_squeezing_record, p=p, config=config), keys, workers)
    return SweepTable(key=("n", "r"), records=tuple(records))


__all__ = [
    "OptimizationConfig",
    "OptimumReport",
    "Regime",
    "SweepTable",
    "maximize_joint",
    "maximize_restricted",
    "restricted_gamma",
    "sweep_photons",
    "sweep_prior",
    "sweep_squeezing",
]
