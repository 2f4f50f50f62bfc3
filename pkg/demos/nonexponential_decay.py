"""Why a half-line spectrum rules out exact exponential decay.

The survival amplitude of a Breit-Wigner state on the full line is a
pure exponential exp(-i t zeta): this is the textbook resonance decay
law.  A physical Hamiltonian, however, is bounded below, and restricting
the same line shape to positive energies changes the long-time story.
The rotated-contour representation splits the truncated amplitude into
the exponential pole term plus a background integral that decays only
like a power of t.  No matter how narrow the resonance, the power-law
background eventually dominates, so exact semigroup decay is impossible
on the half line.

The script prints the survival probability against 2*alpha*t exponential
decay, then fits the tail slope on a log-log grid to exhibit the t^-2
law (amplitude ~ 1/t, probability ~ 1/t^2).
"""

import numpy as np

from resolab import BreitWigner, nogo_report, truncated_survival

bw = BreitWigner(c=1.0, alpha=0.05)

print(f"resonance zeta = {bw.zeta}, half-line norm^2 = "
      f"{bw.half_line_norm_sq:.6f}")
print(f"{'t':>8} {'P(t)':>12} {'exp(-2 a t)':>12} {'ratio':>12}")
for t in (1.0, 10.0, 100.0, 400.0, 1000.0):
    p = abs(truncated_survival(bw, t)) ** 2
    e = np.exp(-2.0 * bw.alpha * t)
    print(f"{t:8.0f} {p:12.4e} {e:12.4e} {p / e:12.4e}")

# the automated verdict: tail slope on the last decade of a log grid
t = np.geomspace(1.0, 2000.0, 120)
report = nogo_report(bw, t)
print(f"\ntail slope d log P / d log t = {report.tail_slope:.3f} "
      f"(pure exponential would diverge)")
print(f"max log10 deviation from exponential: "
      f"{report.max_log10_ratio:.1f} decades")
print(f"verdict: {report.verdict}")
