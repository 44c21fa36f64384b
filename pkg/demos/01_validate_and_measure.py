"""Validating finite metric spaces and measuring how tree-like they are.

A distance matrix can fail to be a metric (triangle violations), and a
perfectly good metric can still be far from a tree.  The four-point
defect quantifies the latter: it is zero exactly for tree metrics.
"""

import numpy as np

from treegh import (
    FiniteMetricSpace,
    four_point_defect,
    hausdorff_distance,
    tree_from_edges,
    validate_metric,
)

# -- a clean metric: four points on a line ------------------------------------

line = FiniteMetricSpace(
    ("a", "b", "c", "d"),
    np.abs(np.subtract.outer([0.0, 1.0, 3.0, 6.0], [0.0, 1.0, 3.0, 6.0])),
)
report = validate_metric(line)
print("line of four points:", report.category, "worst violation", report.worst_violation)
print("  diameter", line.diameter(), "eccentricities", line.eccentricities())

# line metrics are tree metrics, so the defect vanishes
print("  four-point defect", four_point_defect(line))

# -- break the triangle inequality --------------------------------------------

bad = np.array(
    [
        [0.0, 1.0, 5.0],
        [1.0, 0.0, 1.0],
        [5.0, 1.0, 0.0],
    ]
)
report = validate_metric(FiniteMetricSpace(("x", "y", "z"), bad))
print("tampered matrix:", report.category, "worst violation", report.worst_violation)

# -- a metric that is NOT tree-like: the unit 4-cycle -------------------------

cycle = np.array(
    [
        [0.0, 1.0, 2.0, 1.0],
        [1.0, 0.0, 1.0, 2.0],
        [2.0, 1.0, 0.0, 1.0],
        [1.0, 2.0, 1.0, 0.0],
    ]
)
c4 = FiniteMetricSpace(("p0", "p1", "p2", "p3"), cycle)
print("unit 4-cycle: valid =", validate_metric(c4).ok, "defect =", four_point_defect(c4))

# -- any tree scores zero ------------------------------------------------------

tree = tree_from_edges(
    [("r", "u", 1.2), ("r", "v", 0.7), ("v", "w", 2.0), ("v", "s", 0.4)]
)
space = tree.as_space()
print("random-looking tree: defect =", four_point_defect(space))

# -- Hausdorff distance between vertex subsets --------------------------------

# how far is {r} from the whole vertex set, inside the tree metric?
whole = list(range(space.n))
root_only = [space.index("r")]
print("Hausdorff({r}, all vertices) =", hausdorff_distance(space, root_only, whole))
print("  (equals the eccentricity of r:", max(space.dist[space.index('r')]), ")")
