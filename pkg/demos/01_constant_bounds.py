"""
Bounds on the real parts of a constant matrix
=============================================

Plain Gershgorin discs, then a diagonal similarity ``D^-1 Q D`` and the
Ostrowski blend ``R^alpha C^(1-alpha)``, each tuned by the optimizer.
"""

import numpy as np

from eigloc import Region, build_families, eigenvalues, gershgorin_bounds, optimize_scaling, optimized_region, render_svg
from _common import save

Q = np.array([[-1.0, -2.5], [-0.5, -2.0]])

# %%
# The plain bounds read straight off the disc centers and radii.
plain = gershgorin_bounds(Q)
print(f"plain          sigma in [{plain.sigma_min:+.4f}, {plain.sigma_max:+.4f}]")

# %%
# Every positive scaling gives a valid set of discs, so we search for the
# tightest one.  For a 2x2 matrix the optimum touches the true spectrum.
for variant in ("scaled", "alpha", "scaled_alpha"):
    (s_max, s_min), rep = optimize_scaling(Q, variant)
    print(f"{variant:14s} sigma in [{rep.sigma_min:+.4f}, {rep.sigma_max:+.4f}]  "
          f"d={np.round(s_max.d, 4)} alpha={s_max.alpha:.3f}")

lam = eigenvalues(Q).values
print("eigenvalues   ", np.round(lam, 4))

# %%
# Pictures: the plain rows-and-columns region and the intersection over
# many optimal scalings.  Markers are the eigenvalues.
save("constant_plain.svg", render_svg(Region(build_families(Q)), lam))
region, _ = optimized_region(Q, "scaled_alpha")
save("constant_optimized.svg", render_svg(region, lam))
