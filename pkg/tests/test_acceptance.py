"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines; each test also enforces its stated runtime budget.
"""

import math
import time

import numpy as np
import pytest

from resolab import (BreitWigner, Contour, GridFunction, HardyGrid,
                     builtin_model, bw_amplitude, characteristic_semigroup,
                     coupling_gram, eigenvector_check, find_resonances,
                     livsic_kernel, livsic_pair, livsic_symmetry_defect,
                     nogo_report, quad_oscillatory, quad_real_line,
                     resolvent_construct, smatrix, subspace_bases,
                     survival_full, truncated_survival, unitarity_defect,
                     verify_lemma)
from resolab.config import TOL
from resolab.hardy import _bw_vector, rational_inner_product
from resolab.ratfun import Poly, RatFun

BELOW = Contour(re_min=-3, re_max=3, im_min=-3, im_max=-1e-6)
TWO_PI_I = 2j * math.pi


class _Gate:
    def __init__(self, number, label, budget):
        self.number, self.label, self.budget = number, label, budget
        self.t0 = time.time()
        self.failures = []

    def check(self, what, ok):
        if not ok:
            self.failures.append(what)

    def finish(self):
        elapsed = time.time() - self.t0
        if elapsed > self.budget:
            self.failures.append(f"runtime {elapsed:.1f}s > {self.budget}s")
        verdict = "PASS" if not self.failures else "FAIL (" + "; ".join(self.failures) + ")"
        print(f"\n[criterion {self.number:2d}] {self.label}: {verdict}  "
              f"({elapsed:.2f}s)")
        assert not self.failures, f"criterion {self.number}: {self.failures}"


def test_criterion_01_breit_wigner_normalization():
    gate = _Gate(1, "Breit-Wigner normalization", 1.0)
    for c, alpha in ((0.0, 1.0), (1.0, 0.1), (5.0, 0.01)):
        bw = BreitWigner(c, alpha)
        closed = rational_inner_product(bw_amplitude(bw), bw_amplitude(bw))
        gate.check(f"closed form ({c},{alpha})", abs(closed - 1.0) < 1e-10)
        q, _ = quad_real_line(lambda x: abs(bw.amplitude_value(x)) ** 2)
        gate.check(f"quadrature ({c},{alpha})", abs(q - 1.0) <= 1e-8)
    gate.finish()


def test_criterion_02_survival_amplitude():
    gate = _Gate(2, "survival amplitude and semigroup law", 5.0)
    bw = BreitWigner(1.0, 0.1)
    for t in (0.5, 1.0, 5.0, 10.0):
        q = quad_oscillatory(lambda x: abs(bw.amplitude_value(x)) ** 2, t)
        gate.check(f"t={t}", abs(q - np.exp(-1j * t * bw.zeta)) <= 1e-6)
    for t1, t2 in ((0.5, 1.0), (2.0, 3.0)):
        defect = abs(survival_full(bw, t1) * survival_full(bw, t2)
                     - survival_full(bw, t1 + t2))
        gate.check(f"law {t1}+{t2}", defect <= 1e-10)
    gate.finish()


def test_criterion_03_paper_pole_claim():
    gate = _Gate(3, "paper-1d scattering pole at i", 1.0)
    sm = smatrix(builtin_model("paper-1d"))
    gate.check("exactly one upper pole", len(sm.poles_upper) == 1)
    if sm.poles_upper:
        rec = sm.poles_upper[0]
        gate.check("location i", abs(rec.location - 1j) <= 1e-8)
        gate.check("simple", rec.order == 1)
    gate.finish()


def test_criterion_04_lemma_verification():
    gate = _Gate(4, "kernel/multiplicity lemma at every resonance", 5.0)
    for name in ("oneD-gamma", "twoK-oneE"):
        m = builtin_model(name)
        recs = find_resonances(m, BELOW)
        gate.check(f"{name} has resonances", len(recs) >= 2)
        for r in recs:
            rep = verify_lemma(m, r.zeta)
            gate.check(f"{name}@{r.zeta:.3f} dims",
                       rep.dim_ker_s == rep.dim_span_mult >= 1)
            gate.check(f"{name}@{r.zeta:.3f} angle",
                       rep.max_principal_angle <= 1e-6)
    control = verify_lemma(builtin_model("oneD-gamma"), -0.41 - 0.73j)
    gate.check("random-point control vacuous", control.verdict == "vacuous")
    gate.finish()


def test_criterion_05_structural_identities():
    gate = _Gate(5, "continuation, symmetry, Plemelj limit", 5.0)
    rng = np.random.default_rng(3)
    for name in ("paper-1d", "oneD-gamma", "twoK-oneE"):
        m = builtin_model(name)
        pair = livsic_pair(m)
        gate.check(f"{name} rational continuation", pair.continuation_defect() <= 1e-9)
        for _ in range(20):
            z = complex(rng.uniform(-3, 3), rng.uniform(0.05, 3))
            lhs = pair.upper(z)
            rhs = pair.lower(z) + pair.jump(z)
            gate.check(f"{name} pointwise",
                       np.linalg.norm(lhs - rhs)
                       <= 1e-12 * max(1.0, np.linalg.norm(lhs)))
            gate.check(f"{name} symmetry", livsic_symmetry_defect(m, z) <= 1e-12)
    # Plemelj: eps-shifted Cauchy integrals, Richardson extrapolation in eps
    m = builtin_model("oneD-gamma")
    gram = coupling_gram(m)
    x = 0.7

    def cauchy(z):
        q, _ = quad_real_line(lambda s: gram(s)[0, 0] / (z - s), tol=1e-11)
        return q

    eps = 1e-3
    jump = [(cauchy(x + 1j * e) - cauchy(x - 1j * e)) for e in (eps, eps / 2)]
    extrap = 2 * jump[1] - jump[0]
    gate.check("Plemelj limit", abs(extrap - (-TWO_PI_I * gram(x)[0, 0])) <= 1e-6)
    gate.finish()


def test_criterion_06_unitarity():
    gate = _Gate(6, "unitarity on the 1000-point grid", 10.0)
    lam = np.linspace(-50.0, 50.0, 1000)
    for name in ("paper-1d", "oneD-gamma", "twoK-oneE"):
        sm = smatrix(builtin_model(name))
        worst = max(unitarity_defect(sm, float(x)) for x in lam)
        gate.check(f"{name} (max {worst:.2e})", worst <= 1e-8)
    gate.finish()


def test_criterion_07_nogo_demonstration():
    gate = _Gate(7, "non-exponential half-line decay", 30.0)
    bw = BreitWigner(1.0, 0.05)
    ts = np.unique(np.concatenate([np.linspace(0.0, 20.0, 41),
                                   np.geomspace(20.0, 1e4, 80)]))
    rep = nogo_report(bw, ts)
    gate.check(f"tail slope {rep.tail_slope:.3f}", abs(rep.tail_slope + 2.0) <= 0.2)
    # P(1e4) / exp(-2 alpha 1e4) > 1e6, tracked in log10
    p_end = abs(truncated_survival(bw, 1e4)) ** 2
    log_ratio = math.log10(p_end) + 2 * bw.alpha * 1e4 / math.log(10)
    gate.check(f"ratio 10^{log_ratio:.0f}", log_ratio > 6.0)
    early = ts[(ts > 0) & (ts <= 20.0)]
    for t in early:
        p = abs(truncated_survival(bw, t)) ** 2
        gate.check(f"early t={t:.1f}",
                   abs(p - math.exp(-2 * bw.alpha * t)) <= 0.1 * math.exp(-2 * bw.alpha * t))
    gate.check("verdict", rep.verdict == "non-exponential")
    gate.finish()


def test_criterion_08_semigroup_eigenvector():
    gate = _Gate(8, "grid semigroup eigenvector defect", 10.0)
    grid = HardyGrid(half_width=200.0, n=2 ** 16)
    bw = BreitWigner(1.0, 0.1)
    f = GridFunction.from_rational(grid, bw_amplitude(bw))
    for t in (0.5, 1.0):
        out = characteristic_semigroup(t, f)
        expect = f.scale(np.exp(-1j * grid.snap_time(t) * bw.zeta))
        defect = (out - expect).norm()
        gate.check(f"t={t} (defect {defect:.2e})", defect <= 1e-4 * f.norm())
    gate.finish()


def test_criterion_09_theorem2_eigenvectors():
    gate = _Gate(9, "restricted-semigroup eigenvector orthogonality", 30.0)
    # case (a): resonance eigenvectors of oneD-gamma
    m = builtin_model("oneD-gamma")
    sm = smatrix(m)
    bases = subspace_bases(m, n_max=30, sm=sm)
    for r in find_resonances(m, BELOW):
        k0 = np.asarray(m.coupling(r.zeta) @ livsic_kernel(m, r.zeta)[:, 0])
        rep = eigenvector_check(m, r.zeta, k0 / np.linalg.norm(k0),
                                sm=sm, bases=bases, semigroup_times=())
        gate.check(f"case a @{r.zeta:.3f} ({rep.max_orthogonality:.1e})",
                   rep.case == "(i)(a)" and rep.max_orthogonality <= 1e-8)
    # case (b): twoK-oneE at -i with k0 perpendicular to M(i)
    m2 = builtin_model("twoK-oneE")
    sm2 = smatrix(m2)
    bases2 = subspace_bases(m2, n_max=30, sm=sm2)
    mi = np.asarray(m2.coupling(1j)).ravel()
    k0 = np.array([-np.conj(mi[1]), np.conj(mi[0])])
    k0 /= np.linalg.norm(k0)
    rep = eigenvector_check(m2, -1j, k0, sm=sm2, bases=bases2, semigroup_times=())
    gate.check(f"case b ({rep.max_orthogonality:.1e})",
               rep.case == "(i)(b)" and rep.max_orthogonality <= 1e-8)
    # negative control: generic k0 is far from orthogonal
    bad = eigenvector_check(m2, -1j, np.array([1.0, 0.0]), sm=sm2, bases=bases2,
                            semigroup_times=())
    gate.check(f"generic control ({bad.max_orthogonality:.1e})",
               bad.max_orthogonality >= 1e-3)
    gate.finish()


def test_criterion_10_theorem2_resolvent():
    gate = _Gate(10, "resolvent construction certificates", 30.0)

    def test_fn(m):
        [r, *_] = find_resonances(m, BELOW)
        kt = np.asarray(m.coupling(r.zeta) @ livsic_kernel(m, r.zeta)[:, 0])
        return _bw_vector(kt, r.zeta, TOL)

    m1 = builtin_model("paper-1d")
    rep_b = resolvent_construct(m1, -1j, test_fn(m1))
    gate.check("paper-1d case", rep_b.case == "(ii)(b)")
    gate.check(f"paper-1d certificates (cancel {rep_b.cancellation_residual:.1e})",
               rep_b.all_certificates_pass)

    m2 = builtin_model("twoK-oneE")
    rep_a = resolvent_construct(m2, -0.5 - 0.5j, test_fn(m2))
    gate.check("twoK case", rep_a.case == "(ii)(a)")
    gate.check(f"twoK certificates (orth {rep_a.f_orthogonality:.1e})",
               rep_a.all_certificates_pass)

    # uniqueness: any perturbed k0 breaks the pole cancellation and the
    # orthogonality by at least the perturbation size
    bases = subspace_bases(m1)
    g = test_fn(m1)
    lin = Poly([1j, 1.0])  # z + i
    for eps in (1e-6, 1e-3):
        k_pert = rep_b.k0 + eps
        # unreduced (g - k)/(z + i): reduction would cancel the near-root
        # at -i that carries the perturbation signal
        f_bad = [RatFun(gi.num - gi.den * k, gi.den * lin, reduce=False)
                 for gi, k in zip(g, k_pert)]
        worst = max(abs(rational_inner_product(f_bad, v)) for v in bases.mplus)
        gate.check(f"perturbation {eps:g} detected ({worst:.1e})", worst > eps / 100)
    gate.finish()


def test_criterion_11_resonance_finder_audit():
    gate = _Gate(11, "argument-principle audit on three regions", 10.0)
    regions = [BELOW,
               Contour(re_min=0.0, re_max=3.0, im_min=-3.0, im_max=-1e-6),
               Contour(re_min=-3.0, re_max=3.0, im_min=-3.0, im_max=-0.5)]
    for name in ("paper-1d", "oneD-gamma", "twoK-oneE"):
        m = builtin_model(name)
        for k, region in enumerate(regions):
            try:
                recs = find_resonances(m, region, audit=True)
            except ArithmeticError as exc:
                gate.check(f"{name} region {k}: {exc}", False)
                continue
            gate.check(f"{name} region {k}", True)
        full = find_resonances(m, BELOW)
        gate.check(f"{name} count", sum(r.order for r in full) >= 2)
    gate.finish()
