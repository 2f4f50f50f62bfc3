import math

import numpy as np
import pytest

from resolab import (RatMat, builtin_model, coupling_gram, leading_coefficient,
                     livsic_pair, smatrix, theorem2_conditions, unitarity_defect)
from resolab.config import TOL
from resolab.ratfun import RatFun

TWO_PI_I = 2j * math.pi
MODELS = ["paper-1d", "oneD-gamma", "twoK-oneE"]


class TestAssembly:
    def test_pointwise_definition(self):
        # S(x) = I - 2 pi i M(x) L_up(x)^-1 M(x)^* on the real axis
        m = builtin_model("twoK-oneE")
        sm = smatrix(m)
        pair = livsic_pair(m)
        for x in (-3.0, 0.2, 1.4, 10.0):
            Mx = m.coupling(x)
            want = np.eye(2) - TWO_PI_I * (Mx @ np.linalg.inv(pair.upper(x)) @ Mx.conj().T)
            assert np.allclose(sm.s(x), want, atol=1e-10)

    def test_equivalent_via_lower_branch(self):
        # assembling with L_low + jump must give the same rational matrix
        m = builtin_model("oneD-gamma")
        pair = livsic_pair(m)
        alt_upper = pair.lower + pair.jump
        sm1 = smatrix(m)
        sm2 = smatrix(m, livsic_upper=alt_upper)
        for i in range(m.dim_k):
            for j in range(m.dim_k):
                assert sm1.s[i, j].isclose(sm2.s[i, j])

    def test_paper_1d_residue_at_i(self):
        # simple pole at i with residue 2i/(3 + 2i)
        sm = smatrix(builtin_model("paper-1d"))
        [rec] = [p for p in sm.poles_upper]
        assert abs(rec.location - 1j) < 1e-8
        assert rec.order == 1
        assert abs(rec.leading[0, 0] - 2j / (3 + 2j)) < 1e-8


class TestUnitarity:
    @pytest.mark.parametrize("name", MODELS)
    def test_grid(self, name):
        sm = smatrix(builtin_model(name))
        worst = max(unitarity_defect(sm, float(x)) for x in np.linspace(-50, 50, 201))
        assert worst <= 1e-8

    def test_flip_product_is_identity(self):
        # S#(z) S(z) = I as a rational identity (checked at off-axis points)
        sm = smatrix(builtin_model("twoK-oneE"))
        prod = sm.s.conj_flip() @ sm.s
        for z in (0.5 + 0.3j, -1.0 - 0.4j):
            assert np.allclose(prod(z), np.eye(2), atol=1e-9)


class TestPoles:
    def test_classification(self):
        sm = smatrix(builtin_model("twoK-oneE"))
        ups = sorted(p.location.imag for p in sm.poles_upper)
        assert np.allclose(ups, [1.0, 2.0], atol=1e-8)
        assert len(sm.poles_lower) == 3
        assert all(p.location.imag < 0 for p in sm.poles_lower)

    @pytest.mark.parametrize("scale", [0.1, 10.0])
    def test_stable_under_tolerance_scaling(self, scale):
        tol = TOL.scaled(scale)
        for name in MODELS:
            base = smatrix(builtin_model(name))
            scaled = smatrix(builtin_model(name, tol=tol), tol=tol)
            assert len(scaled.poles_upper) == len(base.poles_upper)
            assert len(scaled.poles_lower) == len(base.poles_lower)
            for a, b in zip(sorted(p.location.imag for p in scaled.poles_upper),
                            sorted(p.location.imag for p in base.poles_upper)):
                assert abs(a - b) < 1e-6

    def test_is_pole_radius(self):
        sm = smatrix(builtin_model("paper-1d"))
        assert sm.is_pole(1j)
        assert sm.is_pole(1j + 1e-8)
        assert not sm.is_pole(0.5j)


class TestLeadingCoefficient:
    def test_rank_one_at_upper_pole(self):
        # the order-1 main part at i is an outer product with M(i)
        m = builtin_model("twoK-oneE")
        rec = leading_coefficient(m, 1j)
        a = rec.leading
        assert rec.order == 1
        svals = np.linalg.svd(a, compute_uv=False)
        assert svals[0] > 1e-3 and svals[1] < 1e-10 * svals[0]
        mi = np.asarray(m.coupling(1j)).ravel()
        # column space parallel to M(i)
        cross = np.abs(np.vdot(mi, a[:, np.argmax(np.abs(a).sum(axis=0))]))
        assert cross > 0.99 * np.linalg.norm(mi) * np.linalg.norm(
            a[:, np.argmax(np.abs(a).sum(axis=0))])

    def test_holomorphic_point_raises(self):
        with pytest.raises(ValueError, match="holomorphic"):
            leading_coefficient(builtin_model("paper-1d"), 0.5j)


class TestConditions:
    @pytest.mark.parametrize("name", MODELS)
    def test_builtins_satisfy_hypotheses(self, name):
        rep = theorem2_conditions(builtin_model(name))
        assert rep.all_pass
        assert rep.finitely_many_upper_poles
        assert not rep.conjugate_pairs

    def test_json_shape(self):
        doc = theorem2_conditions(builtin_model("paper-1d")).to_json()
        assert doc["schema_version"] == 1
        assert doc["all_pass"] is True
