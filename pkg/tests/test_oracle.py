import math

import numpy as np
import pytest

from resolab import Contour, argument_principle_count, quad_oscillatory, quad_real_line


class TestQuadRealLine:
    def test_gaussian(self):
        q, err = quad_real_line(lambda x: math.exp(-x * x))
        assert q == pytest.approx(math.sqrt(math.pi), abs=1e-9)

    def test_lorentzian(self):
        q, _ = quad_real_line(lambda x: 1.0 / (x * x + 4.0))
        assert q == pytest.approx(math.pi / 2.0, abs=1e-9)

    def test_complex_valued(self):
        q, _ = quad_real_line(lambda x: (1.0 + 2j) / (x * x + 1.0))
        assert q == pytest.approx((1.0 + 2j) * math.pi, abs=1e-8)


class TestQuadOscillatory:
    def test_full_line_lorentzian(self):
        # int exp(-i t x) / (x^2 + 1) dx = pi exp(-t), t > 0
        for t in (0.5, 2.0, 10.0):
            q = quad_oscillatory(lambda x: 1.0 / (x * x + 1.0), t)
            assert abs(q - math.pi * math.exp(-t)) < 1e-9

    def test_half_line(self):
        # int_0^inf exp(-i t x) exp(-x) dx = 1/(1 + i t)
        q = quad_oscillatory(lambda x: math.exp(-x), 3.0, half_line=True)
        assert abs(q - 1.0 / (1.0 + 3.0j)) < 1e-9

    def test_breit_wigner_survival(self):
        zeta = 1.0 - 0.1j
        dens = lambda x: (0.1 / math.pi) / ((x - 1.0) ** 2 + 0.01)
        for t in (1.0, 5.0):
            q = quad_oscillatory(dens, t)
            assert abs(q - np.exp(-1j * t * zeta)) < 1e-8


class TestArgumentPrinciple:
    def test_polynomial_zero_count(self):
        p = np.polynomial.polynomial.Polynomial([2.0, 0.0, 1.0])  # zeros at +-i sqrt 2
        c = Contour(re_min=-1, re_max=1, im_min=0.5, im_max=2.5)
        assert argument_principle_count(p, c) == 1

    def test_empty_region(self):
        c = Contour(re_min=5, re_max=6, im_min=5, im_max=6)
        assert argument_principle_count(lambda z: z * z + 1.0, c) == 0

    def test_multiplicity_counts(self):
        f = lambda z: (z - (1.0 - 1.0j)) ** 3
        c = Contour(re_min=0, re_max=2, im_min=-2, im_max=0)
        assert argument_principle_count(f, c) == 3

    def test_zero_on_contour_rejected(self):
        c = Contour(re_min=-1, re_max=1, im_min=-1, im_max=1)
        with pytest.raises(ValueError):
            argument_principle_count(lambda z: z - 1.0, c)

    def test_inflate_and_contains(self):
        c = Contour(re_min=-1, re_max=1, im_min=-2, im_max=0)
        assert c.contains(0.0 - 1.0j)
        assert not c.contains(2.0 - 1.0j)
        big = c.inflate(1.5)
        assert big.contains(1.2 - 1.0j)
