"""Three-qubit mediator protocol in the Heisenberg and Schroedinger pictures."""
