"""Exact n-qubit Pauli algebra: strings, operators and the Heisenberg state."""
