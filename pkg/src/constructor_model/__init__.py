"""Finite constructor-theory models and the predicates decided over them."""
