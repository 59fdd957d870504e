"""The target gates: one control qubit simultaneously phase-flipping n
targets, and the controlled-NOT variant obtained from two Hadamards.

Run: python3 demos/01_ideal_gates.py
"""

import numpy as np

from cavityphase import ideal_ntcnot, ideal_ntcp

np.set_printoptions(precision=3, suppress=True, linewidth=120)

# Two qubits: the controlled-phase gate is diagonal in the per-qubit
# sigma-x product basis and flips only the |- -> branch.
gate = ideal_ntcp(1)
print("two-qubit controlled-phase gate, sigma-x product basis (+,+ ... -,-):")
print(np.real(gate.x_basis_matrix()))

# Three targets: the sign is (-1)^(number of targets in |->) when the
# control is in |->, so two flipped targets cancel.
gate3 = ideal_ntcp(3)
diag = np.real(np.diag(gate3.x_basis_matrix()))
print("\nfour-qubit gate diagonal (control bit first):")
for idx, value in enumerate(diag):
    bits = format(idx, "04b").replace("0", "+").replace("1", "-")
    print(f"  |{bits}>  ->  {value:+.0f} |{bits}>")

# The controlled-NOT version only needs Hadamards on the control, not on
# every target: in the computational basis it flips all targets iff the
# control is |1>.
cnot = ideal_ntcnot(1)
print("\ncontrolled-NOT from the phase gate (computational basis):")
print(np.real(cnot.matrix.entries))

big = ideal_ntcnot(2).matrix.entries
flips = big @ np.kron([0, 1], np.kron([1, 0], [1, 0]))  # |1 0 0>
target = np.nonzero(np.abs(flips) > 0.5)[0][0]
print(f"\n|100> maps to basis state index {target} = |{format(target, '03b')}>")
