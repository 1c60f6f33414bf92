"""
What one iteration costs
========================

Every decoder reports per-iteration operation counts. On a regular code
they follow closed forms in ``E`` (edges), ``M`` (checks), ``d_v`` and
``d_c``; the residual schedules differ mostly in residual comparisons.
"""

from qldpc_ids import decode, sample_weight_error
from qldpc_ids.named import gb_126_28
from qldpc_ids.noise import frame_rng
from qldpc_ids.sim import expected_counters

code = gb_126_28()
g = code.tanner
print(code, "E =", g.n_edges, "M =", g.n_checks)

s = g.syndrome(sample_weight_error(code.n, 20, frame_rng(0, 0)))
print(f"{'decoder':14s} {'c2v':>6s} {'v2c':>6s} {'precomp':>8s} {'comparisons':>12s}   closed form")
for name in ("sbp", "slbp", "srbp", "nw-srbp", "lmd-srbp", "proposed-pool"):
    out = decode(code, s, 0.02, name, i_max=2)
    row = out.counters.per_iteration[0]
    exp = expected_counters(code, name)
    print(f"{name:14s} {row[0]:6d} {row[1]:6d} {row[2]:8d} {row[3]:12d}   {exp['comparisons']}")

###############################################################################
# The proposed pool only looks at the checks of one variable per selection,
# so its comparison count sits below the bound rather than on it.
