"""Model-file parsing, schema validation and the bundled models."""
