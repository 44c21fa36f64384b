"""From a grid of plane points to a family of pairwise-distinct trees.

Given two endpoint trees attached to two marked points of a grid, the
assembly build_F produces, for every other grid cell and fiber index, a
tree that (a) degenerates to the endpoint trees at the marked points,
(b) changes continuously with the cell, and (c) hides a star-shaped
"fingerprint" from which the cell and fiber can be read back.
"""

from treegh import (
    EmbedConfig,
    build_F,
    continuity_scan,
    gh_tree_interval,
    injectivity_scan,
    replacement_path,
    rho_embed,
    scalar_fields,
    star_fingerprint,
    tau,
    tree_from_edges,
    unit_grid,
)

# -- configuration ------------------------------------------------------------

h, coords = unit_grid(3)
cfg = EmbedConfig(
    h_space=h,
    coords=coords,
    marked=("g0_0", "g2_2"),
    trees=(
        tree_from_edges([("a", "b", 1.0)]),
        tree_from_edges([("x", "y", 0.6), ("y", "z", 0.9)]),
    ),
    basepoints=("a", "x"),
    m=2,
    eps=2.0 ** -4,
)

# -- scalar fields ------------------------------------------------------------

# the grid center is equidistant from the two marked corners
f = scalar_fields(cfg, "g1_1")
print("fields at center: sigma =", f.sigma, " phi =", f.phi, " xi =", f.xi)
f = scalar_fields(cfg, "g0_1")
print("fields at g0_1:   sigma = (%.3f, %.3f)  phi = %.4f  xi = %.4f"
      % (f.sigma[0], f.sigma[1], f.phi, f.xi))

# -- assembly and fingerprint recovery ----------------------------------------

w = build_F(cfg, "g0_1", 2)
print("\nbuild_F(g0_1, fiber 2): %d vertices, truncation error %g"
      % (w.n, w.metadata["truncation_error"]))

fp = star_fingerprint(w)
expected = rho_embed(cfg.coords["g0_1"], 2, cfg.m, cfg.branches)
print("fingerprint: xi_hat = %.6f (true xi %.6f)" % (fp.xi_hat, w.metadata["xi"]))
print("  recovered a_hat vs rho_embed: tau = %.2e" % tau(fp.a_hat, expected))

# -- endpoint collapse --------------------------------------------------------

w0 = build_F(cfg, "g0_0", 1)
iv = gh_tree_interval(w0, cfg.trees[0], eps=2.0 ** -5)
print("\nat the marked corner the family returns the endpoint tree:")
print("  gh interval vs endpoint: [%g, %g]" % (iv.lo, iv.hi))

# -- scans --------------------------------------------------------------------

cells = [("g0_1", 1), ("g1_0", 1), ("g1_1", 1)]
rep = injectivity_scan(cfg, cells)
print("\ninjectivity over %d cells: min separation %.5f, k* = %d"
      % (len(rep.rows), rep.min_separation, rep.k_star))

cont = continuity_scan(cfg, cells, [(0, 2), (1, 2)])
for row in cont.rows:
    print("continuity %s -- %s: hi %.4f <= bound %.4f + 2 eps"
          % (row.label_a, row.label_b, row.hi, row.bound))

# -- a comb replacement path --------------------------------------------------

x = tree_from_edges([("a", "b", 1.0), ("b", "c", 0.8)])
steps = replacement_path(x, [0.0, 0.3, 0.32], eps=2.0 ** -5)
print("\nreplacement path of a 2-edge tree:")
for st in steps:
    if st.hi is None:
        print("  s = %.2f  (start: isometric copy, %d vertices)" % (st.s, st.tree.n))
    else:
        print("  s = %.2f  step hi %.4f <= bound %.4f + 2 eps" % (st.s, st.hi, st.bound))
