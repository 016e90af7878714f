"""
Enclosing every realization of an interval matrix
=================================================

Uncertain diagonal entries turn discs into e-circles (stadiums); every
eigenvalue of every realization lies in their union.
"""

import numpy as np

from eigloc import (
    IntervalMatrix,
    Region,
    build_interval_families,
    enclosure_check,
    imag_bound,
    interval_bounds,
    optimized_region,
    real_extent,
    render_svg,
    sample_interval,
)
from eigloc.oracle import eigenvalues
from _common import save

# nominal diag(-1, -1.5); diagonal perturbations +/-1 and +/-4;
# off-diagonal magnitudes 2 and 3
M = IntervalMatrix(np.diag([-1.0, -1.5]), [-1.0, -4.0], [1.0, 4.0], [[0.0, 2.0], [3.0, 0.0]])

# %%
# Bounds valid for the whole family.
rep = interval_bounds(M)
print(f"interval bounds: sigma in [{rep.sigma_min:+.3f}, {rep.sigma_max:+.3f}]")

# %%
# Plain and optimized regions, with their real extent and height.
plain = Region(build_interval_families(M))
opt, _ = optimized_region(M, "scaled_alpha")
for name, r in (("plain", plain), ("optimized", opt)):
    lo, hi = real_extent(r)
    print(f"{name:10s} Re in [{lo:+.3f}, {hi:+.3f}], |Im| <= {imag_bound(r):.3f}")

# %%
# Sample the family and confirm containment with the eigenvalue oracle.
samples = np.concatenate([sample_interval(M, 0, 200, "uniform"), sample_interval(M, 1, 200, "vertex")])
report = enclosure_check(M, opt, 0, len(samples), samples=samples)
print(f"{report.tested} sampled eigenvalues, {len(report.violations)} outside the optimized region")

pts = np.concatenate([eigenvalues(q, residual=False).values for q in samples[:100]])
save("interval_plain.svg", render_svg(plain, pts))
save("interval_optimized.svg", render_svg(opt, pts))
