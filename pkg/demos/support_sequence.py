"""
Guessing error positions from the syndrome alone
================================================

A variable whose checks are mostly unsatisfied is a likely error position.
The score ``d_v - 2*w1`` counts satisfied minus unsatisfied neighbours,
and sorting by it reproduces the ranking of one probability-domain BP
pass on codes with constant check degree.
"""

import numpy as np

from qldpc_ids import build_support_sequence, rank_oracle_one_iter_bp, sample_weight_error
from qldpc_ids.named import gb_126_28
from qldpc_ids.noise import frame_rng

code = gb_126_28()
g = code.tanner
e = sample_weight_error(code.n, 6, frame_rng(3, 0))
s = g.syndrome(e)
print("true support:", np.flatnonzero(e))

seq = build_support_sequence(code, s)
print("head of the sequence:", seq.order[:10])
print("scores:", seq.metric[:10])

###############################################################################
# Where do the true error positions land in the sequence?

pos = {int(v): i for i, v in enumerate(seq.order)}
print(sorted(pos[int(v)] for v in np.flatnonzero(e)))

###############################################################################
# The one-pass BP odds rank the variables the same way.

ratio = rank_oracle_one_iter_bp(code, s, 0.02)
print(np.round(ratio[seq.order[:10]], 4))
assert np.all(np.diff(ratio[seq.order]) <= 0)
