import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qspoof.coherent import overlap_coherent
from qspoof.errors import DomainError
from qspoof.fock import overlap_numeric, suggest_dim
from qspoof.gaussian import (
    GaussianStateParams,
    conjugate_pair,
    db_to_r,
    overlap_squeezed,
    squeezing_db,
)

# 15 dB inverted at 30 digits: 15 ln(10) / 20
R_15DB = 1.72693881974553426301349359101


def states(max_n=10.0, max_r=2.0):
    return st.builds(
        lambda n, phi, r, theta: GaussianStateParams(math.sqrt(n) * cmath.exp(1j * phi), r, theta),
        st.floats(0, max_n),
        st.floats(-math.pi, math.pi),
        st.floats(0, max_r),
        st.floats(-math.pi, math.pi),
    )


def test_identical_states():
    s = GaussianStateParams(1.2 - 0.4j, 0.8, 0.3)
    assert overlap_squeezed(s, s) == pytest.approx(1.0 + 0j, abs=1e-15)


def test_theta_is_wrapped():
    assert GaussianStateParams(0, 0.5, 3 * math.pi).theta == pytest.approx(math.pi)
    assert GaussianStateParams(0, 0.5, -math.pi).theta == math.pi


def test_params_validation():
    with pytest.raises(DomainError):
        GaussianStateParams(0, -0.1)
    with pytest.raises(DomainError):
        GaussianStateParams(0, 25.0)
    with pytest.raises(DomainError):
        GaussianStateParams(complex("nan"))


def test_coherent_reduction_grid():
    for a1 in (0, 1 + 1j, -0.3 + 2j):
        for a2 in (0.5, -1j, 2 - 2j):
            ov = overlap_squeezed(GaussianStateParams(a1), GaussianStateParams(a2))
            assert abs(abs(ov) ** 2 - math.exp(-abs(a1 - a2) ** 2)) < 1e-12


def test_conjugate_pair_reproduces_coherent_overlap():
    for n in (0.1, 1.0, 4.0):
        for phi in np.linspace(0, math.pi, 7):
            for theta in (0.0, 1.1):
                pair = conjugate_pair(n, phi, 0.0, theta)
                assert abs(abs(overlap_squeezed(*pair)) ** 2 - overlap_coherent(n, phi)) < 1e-12


def test_conjugate_pair_constructor():
    a, b = conjugate_pair(1.0, 0.0, 0.5, 0.0)
    assert a == b
    a, b = conjugate_pair(100.0, 0.1, 1.0, 0.3)
    assert a.alpha == pytest.approx(10 * cmath.exp(0.05j), abs=1e-14)
    assert a.zeta == pytest.approx(cmath.exp(0.3j), abs=1e-14)
    assert b.alpha == pytest.approx(a.alpha.conjugate(), abs=0)
    assert b.theta == pytest.approx(-0.3)


def test_matches_fock_oracle_example():
    pair = conjugate_pair(1.0, math.pi / 2, 0.5, 0.0)
    assert abs(overlap_squeezed(*pair) - overlap_numeric(*pair, 60)) < 1e-6


@pytest.mark.parametrize("n", [0.3, 1.0, 4.0])
@pytest.mark.parametrize("r", [0.0, 0.6, 1.2])
@pytest.mark.parametrize("angles", [(0.3, 0.0), (1.7, 2.5), (math.pi, -1.0)])
def test_matches_fock_oracle_grid(n, r, angles):
    phi, theta = angles
    pair = conjugate_pair(n, phi, r, theta)
    dim = suggest_dim(*pair)
    assert abs(overlap_squeezed(*pair) - overlap_numeric(*pair, dim)) < 1e-6


def test_matches_fock_oracle_unrelated_states(rng):
    for _ in range(5):
        s1 = GaussianStateParams(complex(*rng.normal(size=2)), rng.uniform(0, 1), rng.uniform(-3, 3))
        s2 = GaussianStateParams(complex(*rng.normal(size=2)), rng.uniform(0, 1), rng.uniform(-3, 3))
        dim = suggest_dim(s1, s2)
        assert abs(overlap_squeezed(s1, s2) - overlap_numeric(s1, s2, dim)) < 1e-8


def test_magnitude_bound_random_draws(rng):
    for _ in range(10_000):
        n1, n2 = rng.uniform(0, 10, 2)
        s1 = GaussianStateParams(math.sqrt(n1) * cmath.exp(1j * rng.uniform(-3.2, 3.2)), rng.uniform(0, 2), rng.uniform(-3.2, 3.2))
        s2 = GaussianStateParams(math.sqrt(n2) * cmath.exp(1j * rng.uniform(-3.2, 3.2)), rng.uniform(0, 2), rng.uniform(-3.2, 3.2))
        assert abs(overlap_squeezed(s1, s2)) <= 1 + 1e-12


@settings(max_examples=300)
@given(states(), states())
def test_conjugate_symmetry(s1, s2):
    assert abs(overlap_squeezed(s1, s2) - overlap_squeezed(s2, s1).conjugate()) < 1e-12


@settings(max_examples=200)
@given(states(), states())
def test_unit_magnitude_only_for_identical(s1, s2):
    mag = abs(overlap_squeezed(s1, s2))
    if abs(mag - 1) < 1e-12:
        assert abs(s1.alpha - s2.alpha) < 1e-5
        assert s1.r == pytest.approx(s2.r, abs=1e-5)


def test_squeezing_db():
    assert squeezing_db(0.0) == 0.0
    assert squeezing_db(3.9) == pytest.approx(33.87496958845364, abs=1e-12)
    assert round(squeezing_db(3.9)) == 34
    assert db_to_r(15.0) == pytest.approx(R_15DB, abs=1e-14)
    for r in (0.0, 0.3, 1.7, 5.0):
        assert abs(db_to_r(squeezing_db(r)) - r) < 1e-12
    assert squeezing_db(1.0) == pytest.approx(10 * math.log10(math.exp(2)), abs=1e-12)
    with pytest.raises(DomainError):
        squeezing_db(-1)
    with pytest.raises(DomainError):
        db_to_r(-1)


def test_matches_fock_oracle_wide_grid():
    worst = 0.0
    for n in (0.5, 1.0, 2.0, 4.0):
        for phi in (0.3, 1.0, 2.0, math.pi):
            for r in (0.0, 0.5, 1.0, 1.5):
                for theta in (0.0, 0.7, 2.0):
                    pair = conjugate_pair(n, phi, r, theta)
                    worst = max(worst, abs(overlap_squeezed(*pair) - overlap_numeric(*pair, suggest_dim(*pair))))
    assert worst < 1e-7
