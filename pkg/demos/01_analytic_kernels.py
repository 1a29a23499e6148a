"""
Analytic radial kernels and how they widen with dimension
=========================================================

Drawing frequency magnitudes uniformly from [0, 1/ell] gives the
integrated hypergeometric kernel; drawing frequency vectors uniformly from
the n-ball gives the n-jinc kernel.  Both flatten toward 1 as the feature
dimension grows, and the quadrature oracle reproduces each closed form.
"""

import numpy as np

from _plotting import figure_or_none, save
from sspkernels import KernelSpec, RadialDistribution, quadrature_kernel

rho = np.linspace(0, 10, 201)
ns = [1, 2, 3, 5, 10]

# closed forms, one curve per dimension
hyp = {n: KernelSpec("hypergeometric", n=n)(rho) for n in ns}
jinc = {n: KernelSpec("jinc", n=n)(rho) for n in ns}

print("value at rho = 2")
print(" n   hypergeometric   jinc")
for n in ns:
    print(f"{n:2d}   {hyp[n][40]:14.6f}   {jinc[n][40]:.6f}")

# the same kernels, integrated numerically from their magnitude laws
for n in (2, 5):
    q_hyp = quadrature_kernel(RadialDistribution.uniform(1.0), n, rho)
    q_jinc = quadrature_kernel(RadialDistribution.scaled_beta(n), n, rho)
    print(f"n={n}: max |closed form - quadrature| = "
          f"{np.max(np.abs(q_hyp - hyp[n])):.1e} (hypergeometric), {np.max(np.abs(q_jinc - jinc[n])):.1e} (jinc)")

# first zero of the 2-D jinc kernel is the first zero of J_1
k = jinc[2]
i = np.flatnonzero(np.diff(np.sign(k)))[0]
print(f"2-D jinc changes sign between rho = {rho[i]:.2f} and {rho[i + 1]:.2f}")

plt = figure_or_none()
if plt is not None:
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for n in ns:
        axes[0].plot(rho, hyp[n], label=f"n={n}")
        axes[1].plot(rho, jinc[n], label=f"n={n}")
    axes[0].set_title("integrated hypergeometric")
    axes[1].set_title("n-jinc")
    for ax in axes:
        ax.axhline(0, color="0.7", lw=0.8)
        ax.set_xlabel("rho = |x| / ell")
    axes[0].set_ylabel("K(rho)")
    axes[1].legend()
    save(fig, "01_analytic_kernels.png")
