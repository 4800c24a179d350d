"""The index-beta evolution and its critical driving strength.

The modified flow dh = 2|h|^(2-beta)/h dt - dU is self-similar of index beta;
driven by an alpha-stable process with alpha = beta it has a phase transition
in the driving strength theta at the computable threshold theta0(alpha).
This demo scans theta across the threshold and prints the empirical
half-crossing bracket next to the analytic value.
"""

from levyloewner.experiments import theta0_bracket
from levyloewner.stable_calculus import theta0

ALPHA = 1.5
N, T, SEED = 600, 2000.0, 5

th0 = theta0(ALPHA)
print(f"analytic threshold theta0({ALPHA}) = {th0:.6f}")

grid = [m * th0 for m in (0.25, 0.5, 0.75, 1.0, 1.25, 1.5)]
res = theta0_bracket(ALPHA, grid, 0.5, N, T, SEED)
print(f"\nhit fractions at x=0.5, T={T}, n={N} (beta = alpha = {ALPHA}):")
for est in res.estimates:
    print(f"  theta = {est.params.theta / th0:4.2f} * theta0   "
          f"hit fraction {est.hit_fraction:.3f}  [{est.horizon_flag}]")
print(f"\nempirical 1/2-crossing bracket: [{res.theta_lo:.4f}, {res.theta_hi:.4f}]"
      f"  (analytic {res.analytic:.4f}, contained: {res.contains_analytic})")
print("At theta0 itself the line theory gives survival, so the empirical")
print("crossing sits at or just above the analytic value for any finite T.")
