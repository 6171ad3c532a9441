"""One test per acceptance criterion, each at its stated tolerance and time budget."""

import math
import time

import numpy as np

from qspoof.coherent import coherent_success, phi_opt
from qspoof.fock import (
    difference_operator,
    hermitian_eigenvalues,
    overlap_numeric,
    spoof_mixture,
    success_probability_numeric,
    suggest_dim,
)
from qspoof.gaussian import conjugate_pair, db_to_r, overlap_squeezed
from qspoof.helstrom import gamma_opt, helstrom_gamma, optimal_overlap, quantum_gain, success_probability
from qspoof.optimize import maximize_joint, maximize_restricted
from qspoof.restricted import cubic_coefficients, restricted_scenario, restricted_success, solve_cubic_real


def timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


def test_criterion_01_optimal_point(criterion):
    (g, t2), elapsed = timed(lambda: (gamma_opt(0.5), optimal_overlap(0.5)))
    ok = abs(g - 0.75) < 1e-12 and abs(t2 - 0.75) < 1e-12 and elapsed < 1e-3
    criterion(1, "optimal point at p = 1/2", ok, f"gamma_opt={g!r} tau2_opt={t2!r} in {elapsed * 1e3:.3f} ms")
    assert ok


def test_criterion_02_bound_value(criterion):
    def run():
        analytic = success_probability(0.5, 0.75).ps
        a, b = conjugate_pair(1.0, phi_opt(1.0, 0.5))
        g = helstrom_gamma(abs(overlap_numeric(a, b, 40)) ** 2)
        numeric = success_probability_numeric(0.5, a, spoof_mixture(g, a, b), 40)
        return analytic, numeric

    (analytic, numeric), elapsed = timed(run)
    ok = analytic == 9 / 16 and abs(numeric - 9 / 16) < 1e-8 and elapsed < 1.0
    criterion(2, "bound value 9/16", ok, f"analytic={analytic!r} numeric={numeric!r} in {elapsed:.3f} s")
    assert ok


def test_criterion_03_no_gain_region(criterion):
    def run():
        high = [quantum_gain(p, gamma_opt(p)) for p in np.linspace(2 / 3, 1.0, 100)]
        low = [quantum_gain(p, gamma_opt(p)) for p in np.linspace(0.05, 0.6, 100)]
        return max(high), min(low)

    (high, low), elapsed = timed(run)
    ok = high < 1e-10 and low > 1e-4 and elapsed < 1.0
    criterion(3, "gain only below p = 2/3", ok, f"max gain on [2/3,1]={high:.3e}, min gain on [0.05,0.6]={low:.3e}")
    assert ok


def test_criterion_04_plateau(criterion):
    def run():
        plateau = [coherent_success(n, 0.5).ps for n in (0.08, 1.0, 10.0, 100.0, 1e4)]
        below = [(coherent_success(n, 0.5).ps, phi_opt(n, 0.5)) for n in (0.01, 0.05)]
        return plateau, below

    (plateau, below), elapsed = timed(run)
    spread = max(plateau) - min(plateau)
    ok = (
        abs(plateau[0] - 0.5625) < 1e-10
        and spread < 1e-10
        and all(ps < 0.5625 and phi == math.pi for ps, phi in below)
        and elapsed < 1.0
    )
    criterion(4, "coherent plateau", ok, f"spread={spread:.1e}, below-critical ps={[round(b[0], 6) for b in below]}")
    assert ok


def test_criterion_05_overlap_oracle(criterion):
    def run():
        worst, count, total = 0.0, 0, 0
        for n in (0.5, 1.0, 2.0, 4.0):
            for phi in (0.3, 1.0, 2.0, math.pi):
                for r in (0.0, 0.5, 1.0, 1.5):
                    for theta in (0.0, 0.7, 2.0):
                        first, second = conjugate_pair(n, phi, r, theta)
                        # evaluate at the mandated dim; the truncation guard is lifted so the
                        # comparison itself decides
                        diff = abs(overlap_squeezed(first, second) - overlap_numeric(first, second, 60, trunc_tol=1.0))
                        worst = max(worst, diff)
                        count += diff >= 1e-6
                        total += 1
        return worst, count, total

    (worst, count, total), elapsed = timed(run)
    ok = worst < 1e-6 and elapsed < 30.0
    criterion(5, "overlap oracle at dim = 60", ok, f"worst diff={worst:.2e}, {count}/{total} points >= 1e-6, {elapsed:.1f} s")
    assert ok


def test_criterion_06_restricted_reduction(criterion):
    rng = np.random.default_rng(6)

    def run():
        worst = 0.0
        for _ in range(20):
            p, n, phi = rng.uniform(0.01, 0.99), rng.uniform(0.0, 10.0), rng.uniform(0.0, math.pi)
            s = restricted_scenario(p, n, phi, 0.0, 0.0)
            expected = success_probability(p, helstrom_gamma(math.exp(-4 * n * math.sin(phi / 2) ** 2))).ps
            worst = max(worst, abs(restricted_success(s) - expected))
        return worst

    worst, elapsed = timed(run)
    ok = worst < 1e-9 and elapsed < 1.0
    criterion(6, "restricted reduces at r = 0", ok, f"worst diff={worst:.2e} in {elapsed:.3f} s")
    assert ok


def test_criterion_07_squeezing_numbers(criterion):
    def run():
        return maximize_restricted(100.0, 3.9, 0.5).objective, maximize_restricted(100.0, db_to_r(15.0), 0.5).objective

    (at_39, at_15db), elapsed = timed(run)
    ok = at_39 >= 0.99 and 0.88 <= at_15db <= 0.92 and elapsed < 120.0
    criterion(7, "squeezing anchors", ok, f"r=3.9 -> {at_39:.8f} (need >= 0.99), 15 dB -> {at_15db:.5f}")
    assert ok


def test_criterion_08_bound_breaking(criterion):
    rs = (0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 3.9)
    values, elapsed = timed(lambda: [maximize_restricted(100.0, r, 0.5).objective for r in rs])
    increasing = all(b > a for a, b in zip(values, values[1:]))
    above = all(v > 9 / 16 for v in values[1:])
    ok = increasing and above and elapsed < 120.0
    criterion(8, "bound breaking in r", ok, ", ".join(f"{v:.6f}" for v in values))
    assert ok


def test_criterion_09_joint(criterion):
    reports, elapsed = timed(lambda: [maximize_joint(100.0, r, 0.5) for r in (0.5, 1.0, 2.0)])
    ok = elapsed < 120.0
    parts = []
    for rep in reports:
        ok &= rep.feasible and abs(rep.constraint_residual) < 1e-8 and abs(rep.ps_unrestricted - 9 / 16) < 1e-8
        parts.append(f"res={rep.constraint_residual:.1e} ps={rep.ps_unrestricted!r}")
    criterion(9, "joint optimization saturates", bool(ok), "; ".join(parts))
    assert ok


def test_criterion_10_cubic_integrity(criterion):
    rng = np.random.default_rng(10)

    def run():
        worst_res, worst_sum = 0.0, 0.0
        for _ in range(10_000):
            p, n, phi = rng.uniform(0, 1), rng.uniform(0, 10), rng.uniform(0, math.pi)
            r, theta = rng.uniform(0, 2), rng.uniform(-math.pi, math.pi)
            c = cubic_coefficients(restricted_scenario(p, n, phi, r, theta))
            roots = solve_cubic_real(c)
            worst_res = max(worst_res, max(abs(c(x)) for x in roots))
            worst_sum = max(worst_sum, abs(sum(roots) - (2 * p - 1)))
        worst_spec = 0.0
        for _ in range(10):
            p, n, phi = rng.uniform(0.05, 0.95), rng.uniform(0, 4), rng.uniform(0, math.pi)
            r, theta = rng.uniform(0, 1.5), rng.uniform(-math.pi, math.pi)
            s = restricted_scenario(p, n, phi, r, theta)
            op = difference_operator(p, s.pair[0], spoof_mixture(s.gamma, *s.spoof_pair), suggest_dim(*s.pair))
            ev = hermitian_eigenvalues(op)
            top = sorted(sorted(ev, key=abs, reverse=True)[:3], reverse=True)
            worst_spec = max(worst_spec, float(np.max(np.abs(np.array(top) - solve_cubic_real(cubic_coefficients(s))))))
        return worst_res, worst_sum, worst_spec

    (res, total, spec), elapsed = timed(run)
    ok = res < 1e-10 and total < 1e-10 and spec < 1e-8 and elapsed < 60.0
    criterion(10, "cubic integrity", ok, f"residual={res:.1e} trace={total:.1e} spectrum={spec:.1e} in {elapsed:.1f} s")
    assert ok
