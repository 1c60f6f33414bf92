"""
Residual schedules on a [[256,32]] bicycle code
===============================================

Solvable ratio of each decoder as the error weight grows. Errors are drawn
uniformly among supports of exactly the given weight. The sample count is
small so the script runs in a couple of minutes; raise ``SAMPLES`` for
smoother curves.
"""

import time

from qldpc_ids import ExperimentConfig, run_weight_profile
from qldpc_ids.named import bicycle_256_32

SAMPLES = 30
WEIGHTS = [8, 10, 12, 14]

code = bicycle_256_32()
print(code, "row weight", code.h_z.row_weights()[0], "column weight", code.h_z.col_weights()[0])

for decoder in ("sbp", "slbp", "srbp", "lmd-srbp", "pre-srbp"):
    t = time.time()
    cfg = ExperimentConfig(decoder=decoder, seed=1, p_values=(0.02,))
    rows = run_weight_profile(cfg, WEIGHTS, SAMPLES)
    cells = "  ".join(f"w{r.weight}:{r.ratio:.2f}" for r in rows)
    print(f"{decoder:9s} {cells}   {time.time() - t:.1f}s")

###############################################################################
# PRE-sRBP spends its 90 iterations as 15 short trials of 6. Each trial
# removes one guessed error position from the syndrome first.
