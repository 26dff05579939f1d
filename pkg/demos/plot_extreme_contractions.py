"""
Extreme contractions on a Euclidean plane
=========================================

"""

import numpy as np
from opgeom import space as sp
from opgeom.attain import operator
from opgeom.extreme import classify

e2 = sp.euclidean(2)
c, s = np.cos(0.3), np.sin(0.3)

# a rotation is an isometry, hence extreme
print(classify(operator([[c, -s], [s, c]], e2)).status)

# diag(1, 1/2) is the midpoint of diag(1, 3/4) and diag(1, 1/4)
v = classify(operator(np.diag([1, 0.5]), e2))
print(v.status, v.witness.case_tag, v.witness.T1, v.witness.T2, sep="\n")

# diag(1, 0) needs a new direction w for its kernel
v = classify(operator(np.diag([1.0, 0.0]), e2))
print(v.witness.case_tag, v.witness.w)
