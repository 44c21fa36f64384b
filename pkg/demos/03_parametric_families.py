"""Two parametric families of trees: combs and stars.

Comb trees B(s) interpolate between a bare unit segment (s = 1 ... s = 0
in the limit) by growing teeth at dyadic positions; which generations of
teeth are present depends on the dyadic band containing s.  Star trees
carry a tunable vector of branch lengths drawn from a product of
intervals, and move 2-Lipschitz-ly with respect to the sup-distance on
that cube.
"""

import numpy as np

from treegh import (
    CombParams,
    StarParams,
    c_fun,
    comb_attachments,
    comb_tree,
    cube_interval,
    rho_embed,
    star_metric,
    star_tree,
    tau,
)

# -- cutoff functions ---------------------------------------------------------

print("cutoff ramp c_n(s):")
for s in (1.0, 0.75, 0.5, 0.4, 0.2, 0.1):
    row = ["c_%d=%.3f" % (n, c_fun(n, s)) for n in range(4)]
    print("  s=%.2f  %s" % (s, "  ".join(row)))

# -- comb structure across bands ----------------------------------------------

print("\ncomb trees:")
for s in (0.5, 0.375, 0.1):
    comb = comb_tree(CombParams(s=s))
    gens = sorted(comb_attachments(s, 8))
    total = sum(w for _, _, w in comb.edges)
    print(
        "  B(%.3f): %d vertices, generations %s, total length %.4f, diameter %.4f"
        % (s, comb.n, gens, total, comb.as_space().diameter())
    )

# truncation: a small s wants many generations; the depth cap drops the
# tiny ones and records the error it made
tiny = comb_tree(CombParams(s=0.1, depth_cap=2))
print("  B(0.100) capped at depth 2: %d vertices, truncation error %g"
      % (tiny.n, tiny.metadata["truncation_error"]))

# -- stars and the coefficient cube -------------------------------------------

print("\nadmissible branch ranges:", [cube_interval(i) for i in (1, 2, 3)])

a = (0.25, 0.0625)
st = star_tree(StarParams(a=a, scale=2.0, eps=0.125))
print("star with a=%s, scale 2: %d vertices" % (a, st.n))
print("  d(center, tip of branch 1) =", st.distance("center", "branch:1:1.0"))

# the star metric can be evaluated without materialising the tree
p = StarParams(a=a, scale=2.0)
print("  metric check: d((1,1),(1,2)) =", star_metric(p, (1.0, 1), (1.0, 2)))

# -- modulus of continuity in the coefficients --------------------------------

rng = np.random.default_rng(7)
b = tuple(v + rng.uniform(-0.01, 0.01) for v in a)
pa, pb = StarParams(a=a, scale=1.0), StarParams(a=tuple(b), scale=1.0)
pts = [(s, i) for i in range(3) for s in (0.0, 0.5, 1.0)]
sup = max(abs(star_metric(pa, x, y) - star_metric(pb, x, y)) for x in pts for y in pts)
print("\nperturbed star: sup |R[a]-R[b]| = %.5f <= 2*tau = %.5f" % (sup, 2 * tau(a, b)))

# -- encoding points of the square as branch vectors --------------------------

print("\nrho_embed((0.5, 0), fiber 1 of 3):", rho_embed((0.5, 0.0), 1, 3, 3))
print("rho_embed((0.5, 0), fiber 2 of 3):", rho_embed((0.5, 0.0), 2, 3, 3))
print("  (only the third coefficient moves with the fiber index)")
