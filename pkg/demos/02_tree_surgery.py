"""Tree surgery: wedges, edge replacement, subdivision, and metric balls.

The library treats a metric tree as a weighted graph whose path metric
is the object of interest.  All surgery operations below preserve that
metric on the vertices they keep.
"""

from treegh import (
    CombParams,
    ReplacementEntry,
    closed_ball_subtree,
    comb_tree,
    deg2_components,
    geodesic,
    replace_edges,
    subdivide,
    tree_from_edges,
    wedge_sum,
)

# -- a base tree and its geodesics --------------------------------------------

t = tree_from_edges(
    [("root", "a", 1.0), ("a", "b", 0.5), ("a", "c", 0.8), ("c", "d", 0.3)]
)
print("d(root, d) =", t.distance("root", "d"))
print("geodesic root -> d:", " -> ".join(geodesic(t, "root", "d")))

# -- degree <= 2 structure ----------------------------------------------------

# components of the set of degree <= 2 vertices; their closures are the
# maximal "bare intervals" of the tree
for comp in deg2_components(t):
    print("component", comp.vertices, "closure length", round(comp.closure_diameter, 6))

# -- wedge: glue two trees at chosen basepoints -------------------------------

left = tree_from_edges([("x", "y", 2.0)])
right = tree_from_edges([("u", "v", 1.5), ("v", "w", 0.5)])
w = wedge_sum([(left, "x"), (right, "u")])
# part vertices get a P<i>. prefix; the shared basepoint becomes "p"
print("wedge vertices:", sorted(w.vertices))
print("cross distance y--w via p:", w.distance("P0.y", "P1.w"))

# -- edge replacement ---------------------------------------------------------

# swap the edge (a, c) for a small comb of matching span (0.8)
patch = comb_tree(CombParams(s=0.5, scale=0.8))
entry = ReplacementEntry(a="a", b="c", tree=patch, alpha="spine:0.0", beta="spine:1.0")
replaced = replace_edges(t, [entry])
print("after replacement: d(a, c) still", replaced.distance("a", "c"))
print("  new vertex count", replaced.n, "(was %d)" % t.n)

# -- subdivision --------------------------------------------------------------

fine = subdivide(t, 0.25)
print("subdivided at 0.25:", fine.n, "vertices,",
      "longest edge", max(wt for _, _, wt in fine.edges))

# -- metric balls -------------------------------------------------------------

# the closed ball around root; boundary points in mid-edge become cut vertices
ball = closed_ball_subtree(t, "root", 1.6)
print("ball(root, 1.6) vertices:", sorted(ball.vertices))
for v in sorted(ball.vertices):
    print("  d(root, %s) = %g" % (v, ball.distance("root", v)))
