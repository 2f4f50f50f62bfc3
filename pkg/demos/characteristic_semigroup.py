"""Resonances as eigenvalues of a contractive semigroup on a Hardy subspace.

The decay semigroup "evolve, then project back to positive time" is not a
semigroup on the full spectral representation, but it is on K = H^2 minus
the image of the damped manifold under the scattering matrix.  On that
subspace every resonance zeta in the lower half plane shows up as a
genuine eigenvalue with eigenvector k0/(z - zeta), and every
non-resonance point below the axis lies in the resolvent set, certified
by an explicit rational solution of the resolvent equation.

The script certifies both halves for the rank-two model: the eigenvector
at each resonance (algebraic condition, orthogonality to the scattering
image, semigroup action on the grid) and the resolvent construction at a
point strictly between the resonances.
"""

import numpy as np

from resolab import (Contour, builtin_model, eigenvector_check,
                     find_resonances, livsic_kernel, resolvent_construct,
                     smatrix, subspace_bases, theorem2_conditions)
from resolab.config import TOL
from resolab.hardy import _bw_vector

REGION = Contour(re_min=-5.0, re_max=5.0, im_min=-5.0, im_max=-1e-6)


def main():
    m = builtin_model("twoK-oneE")
    sm = smatrix(m)

    cond = theorem2_conditions(m)
    print("scattering hypotheses:",
          "all pass" if cond.all_pass else "violated")
    print(f"  upper poles: {[p.location for p in sm.poles_upper]}")
    print(f"  growth bound K = {cond.k_bound:.3f} outside radius "
          f"{cond.radius:.1f}")

    bases = subspace_bases(m, sm=sm)
    records = find_resonances(m, REGION)

    print("\neigenvalues of the restricted semigroup:")
    for rec in records:
        k0 = np.asarray(m.coupling(rec.zeta) @ livsic_kernel(m, rec.zeta)[:, 0])
        rep = eigenvector_check(m, rec.zeta, k0, sm=sm, bases=bases)
        print(f"  zeta = {rec.zeta: .6f}  case {rep.case}  "
              f"residual {rep.condition_residual:.1e}  "
              f"orthogonality {rep.max_orthogonality:.1e}  "
              f"certified: {rep.eigenvector_certified}")
        for t, defect in rep.semigroup_defects.items():
            print(f"    Z({t}) action defect on the grid: {defect:.1e}")

    # a non-resonance point below the axis: solve the resolvent equation,
    # with the first resonance's eigenvector as a known member of the
    # complement subspace
    zeta = -0.5 - 0.5j
    first = records[0]
    kt = np.asarray(m.coupling(first.zeta) @ livsic_kernel(m, first.zeta)[:, 0])
    g = _bw_vector(kt, first.zeta, TOL)
    rep = resolvent_construct(m, zeta, g, sm=sm, bases=bases)
    print(f"\nresolvent point {zeta}: case {rep.case}")
    print(f"  membership certificate (T+ overlap): "
          f"{rep.t_plus_certificate:.1e}")
    print(f"  pole cancellation at zeta: {rep.cancellation_residual:.1e}")
    print(f"  solution stays orthogonal to the scattering image: "
          f"{rep.f_orthogonality:.1e}")
    print(f"  all certificates pass: {rep.all_certificates_pass}")


if __name__ == "__main__":
    main()
