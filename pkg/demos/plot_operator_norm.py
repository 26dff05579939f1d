"""
Operator norms three ways
=========================

"""

import numpy as np
from opgeom import space as sp
from opgeom.attain import norm_attainment_set, operator, operator_norm

rng = np.random.default_rng(0)
m = rng.standard_normal((2, 2))

# Euclidean: the largest singular value
op = operator(m, sp.euclidean(2))
print(operator_norm(op, "spectral").value, operator_norm(op, "multistart").value)

# l_inf: the maximum over the four corners of the square is exact
op = operator(m, sp.lp("inf", 2))
print(operator_norm(op, "vertex").value, operator_norm(op, "multistart").value)

# where is the norm attained?
aset = norm_attainment_set(operator([[1, 0], [1, 0]], sp.lp("inf", 2)))
print(aset.points)
print(aset.segments)
