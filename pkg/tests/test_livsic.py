import math

import numpy as np
import pytest

from resolab import (builtin_model, coupling_gram, livsic_branch, livsic_pair,
                     livsic_symmetry_defect, quad_real_line)

TWO_PI_I = 2j * math.pi

MODELS = ["paper-1d", "oneD-gamma", "twoK-oneE"]


def test_paper_1d_closed_form():
    # L_up(z) = z - 1 - 1/(z + i) for the unit-strength model
    L = livsic_branch(builtin_model("paper-1d"), "upper")
    for z in (2.0 + 1j, -0.5 + 0.3j, 1.5 - 2.0j):
        assert L(z)[0, 0] == pytest.approx(z - 1.0 - 1.0 / (z + 1j))


def test_upper_branch_matches_cauchy_integral():
    # independent oracle: L(z) = (z - h_e) - int M#M(x)/(z - x) dx, Im z > 0
    m = builtin_model("oneD-gamma")
    L = livsic_branch(m, "upper")
    gram = coupling_gram(m)
    z = 0.4 + 1.7j
    q, _ = quad_real_line(lambda x: gram(x)[0, 0] / (z - x))
    assert abs(L(z)[0, 0] - ((z - 1.0) - q)) < 1e-8


@pytest.mark.parametrize("name", MODELS)
def test_continuation_identity(name):
    pair = livsic_pair(builtin_model(name))
    assert pair.continuation_defect() <= 1e-9
    # pointwise as well, on both sides of the axis
    rng = np.random.default_rng(7)
    for _ in range(20):
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        if min(abs(z.imag - 1), abs(z.imag + 1), abs(z.imag - 2), abs(z.imag + 2)) < 0.1:
            continue
        lhs = pair.upper(z)
        rhs = pair.lower(z) + pair.jump(z)
        assert np.linalg.norm(lhs - rhs) < 1e-12 * max(1.0, np.linalg.norm(lhs))


@pytest.mark.parametrize("name", MODELS)
def test_symmetry(name):
    m = builtin_model(name)
    rng = np.random.default_rng(11)
    for _ in range(20):
        z = complex(rng.uniform(-3, 3), rng.uniform(0.1, 3))
        assert livsic_symmetry_defect(m, z) < 1e-12


def test_jump_is_gram():
    m = builtin_model("twoK-oneE")
    pair = livsic_pair(m)
    gram = coupling_gram(m)
    x = 0.9
    assert np.allclose(pair.jump(x), TWO_PI_I * gram(x))


def test_boundary_values_from_both_sides():
    # L_up is the limit from above, L_low from below: check against
    # epsilon-shifted Cauchy integrals with Richardson extrapolation
    m = builtin_model("paper-1d")
    gram = coupling_gram(m)
    pair = livsic_pair(m)
    x = 0.3

    def cauchy(z):
        q, _ = quad_real_line(lambda s: gram(s)[0, 0] / (z - s), tol=1e-11)
        return q

    for branch, sgn in ((pair.upper, 1.0), (pair.lower, -1.0)):
        eps = 1e-3
        f1 = cauchy(x + sgn * 1j * eps)
        f2 = cauchy(x + sgn * 1j * eps / 2)
        extrap = 2 * f2 - f1  # first-order Richardson in eps
        want = (x - 1.0) - extrap
        assert abs(branch(x)[0, 0] - want) < 1e-6
