"""Search over local-operations-plus-classical-mediator protocols for entanglement."""
