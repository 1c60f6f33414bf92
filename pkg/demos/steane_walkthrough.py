"""
Decoding single X errors on the Steane code
===========================================

The Steane code uses the [7,4] Hamming matrix for both stabilizer types,
so X errors are decoded against a 3x7 parity-check matrix.
"""

import numpy as np

from qldpc_ids import decode
from qldpc_ids.named import steane

code = steane()
print(code)
print(code.h_z.to_dense())

# every single-qubit error has its own syndrome
for j in range(code.n):
    e = np.eye(code.n, dtype=np.uint8)[j]
    print(j, code.tanner.syndrome(e))

###############################################################################
# Flooding BP against layered BP
# ------------------------------
# Column 1 is ``111``: all three checks fire. After one flooding pass every
# check tells its other variables to flip, and the decoder lands on a
# different error with the same syndrome. Layered BP sees the updated
# messages straight away and does not overshoot.

for name in ("sbp", "slbp", "srbp", "pre-srbp"):
    row = []
    for j in range(code.n):
        e = np.eye(code.n, dtype=np.uint8)[j]
        out = decode(code, code.tanner.syndrome(e), 0.01, name, i_max=10, lambda_max=1, i_t=10)
        row.append("ok" if np.array_equal(out.e_hat, e) else "".join(map(str, out.e_hat)))
    print(f"{name:9s}", row)

###############################################################################
# The overshoot is a stabilizer away from the truth only if the difference is
# in the row space of h_x. Here it is a logical operator.

from qldpc_ids import classify_outcome

e = np.eye(code.n, dtype=np.uint8)[1]
out = decode(code, code.tanner.syndrome(e), 0.01, "sbp", i_max=10)
print(out.e_hat, classify_outcome(code, e, out.e_hat, out.converged))
