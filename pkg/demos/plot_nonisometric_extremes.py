"""
Extreme contractions that are not isometries
============================================

"""

from opgeom import space as sp
from opgeom.experiment import default_spaces, plane_experiment
from opgeom.extreme import flat_segment_extreme, search_extreme_nonisometry

# a flat piece of the unit sphere gives one directly
res = flat_segment_extreme(sp.lp("inf", 2))
print(res.op.matrix)
print(res.certificate.attainment_vectors)

# strictly convex planes need a search
found = search_extreme_nonisometry(sp.lp(4, 2), seed=0)
print(found.op.matrix, found.multistart_norm)

# and on the Euclidean plane none turn up
for row in plane_experiment(default_spaces(), euclidean_trials=200)["rows"]:
    print(row["label"], row["protocol"], row["found"])
