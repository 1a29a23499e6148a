"""
Monte-Carlo convergence of the empirical kernel
===============================================

With random isotropic frequency rows the similarity is an average of M
cosines, so its error against the analytic kernel shrinks like M^(-1/2).
For HexSSP the same happens as the number of orientations grows.
"""

import numpy as np

from _plotting import figure_or_none, save
from sspkernels import BuilderConfig, KernelSpec, RadialDistribution, convergence_sweep

rand = BuilderConfig("randssp", 2, RadialDistribution.chi(2))
rep = convergence_sweep(rand, KernelSpec("gaussian", n=2), [100, 300, 1000, 3000, 10000], seeds=10)
print("random rows, Gaussian kernel")
print("     M   median max-abs error")
for m, e in zip(rep.values, rep.max_abs_median):
    print(f"{m:6d}   {e:.4f}")
print(f"fitted slope {rep.slope:.3f} (root-M law: -0.5)")

hexa = BuilderConfig("hexssp", 2, RadialDistribution.uniform(1.0), n_scales=20)
rep_h = convergence_sweep(hexa, KernelSpec("hypergeometric", n=2), [1, 4, 16, 64, 256], seeds=20,
                          param="n_rotations", radii=np.linspace(0, 10, 101))
print("\nHexSSP, 20 scales per orientation")
print("   N_R   median max-abs error")
for m, e in zip(rep_h.values, rep_h.max_abs_median):
    print(f"{m:6d}   {e:.4f}")

plt = figure_or_none()
if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(rep.values, rep.max_abs_median, "o-", label="random rows vs M")
    rows = 3 * np.array(rep_h.values) * 20
    ax.loglog(rows, rep_h.max_abs_median, "s-", label="HexSSP vs 60 N_R")
    ax.loglog(rep.values, rep.max_abs_median[0] * (np.array(rep.values) / 100) ** -0.5, "k:", label="M^-1/2")
    ax.set_xlabel("frequency rows")
    ax.set_ylabel("median max-abs error")
    ax.legend()
    save(fig, "04_convergence.png")
