"""
Orthogonality in a normed plane
===============================

"""

# x is orthogonal to y when no multiple of y shortens x
import numpy as np
from opgeom import space as sp
from opgeom.bjorth import bj_orthogonal

l1 = sp.lp(1, 2)
print(bj_orthogonal(l1, [0, 1], [1, 1]))
print(bj_orthogonal(l1, [1, 1], [0, 1]))

# the relation is not symmetric outside inner product spaces;
# on a Euclidean plane it reduces to <x, y> = 0
e2 = sp.euclidean(2)
for theta in np.linspace(0, np.pi, 5):
    y = np.array([np.cos(theta), np.sin(theta)])
    print(f"{theta:.3f}", bj_orthogonal(e2, [1, 0], y).orthogonal)
