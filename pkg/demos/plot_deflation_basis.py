"""
A basis whose images stay orthogonal
====================================

"""

import numpy as np
from opgeom import space as sp
from opgeom.attain import operator
from opgeom.basis import compare_with_svd, greedy_orthogonal_basis

rng = np.random.default_rng(1)
op = operator(rng.standard_normal((4, 4)), sp.euclidean(4))

# pick the best direction, restrict to its orthogonal complement, repeat
res = greedy_orthogonal_basis(op)
print(res.vectors)
print(np.round(res.image_gram, 12))

# the image norms are the singular values
print(compare_with_svd(op, res)["max_value_gap"])
