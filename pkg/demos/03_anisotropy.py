"""
Product-of-1D embeddings are not isotropic
==========================================

Binding one 1-D embedding per axis makes similarity depend on direction:
along an axis half the frequency rows never see the displacement.  The
HexSSP mixture with the same number of rows does not have this problem.
"""

import numpy as np

from _plotting import figure_or_none, save
from sspkernels import RadialDistribution, anisotropy_gap, build_hexssp, build_product_ssp, similarity

uniform = RadialDistribution.uniform(1.0)
product = build_product_ssp(2, 1500, uniform, seed=0)
hexssp = build_hexssp(2, 50, 20, uniform, seed=0)
print(f"rows: product {product.M}, hexssp {hexssp.M}")

for rho in (1.0, np.pi, 5.0):
    print(f"rho={rho:.3f}  direction spread: product {anisotropy_gap(product, radius=rho):.4f}, "
          f"hexssp {anisotropy_gap(hexssp, radius=rho):.4f}")

# similarity around the circle rho = pi
ang = np.linspace(0, np.pi, 181)
ring = np.pi * np.stack([np.cos(ang), np.sin(ang)], axis=1)
sp, sh = similarity(product, ring), similarity(hexssp, ring)
print(f"product: {sp[0]:.3f} along the x axis, {sp[45]:.3f} on the diagonal")

plt = figure_or_none()
if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(np.degrees(ang), sp, label="product of 1-D")
    ax.plot(np.degrees(ang), sh, label="HexSSP")
    ax.set_xlabel("direction (degrees)")
    ax.set_ylabel("similarity at rho = pi")
    ax.legend()
    save(fig, "03_anisotropy.png")
