"""Numerical services: set gradients, minimal-norm elements, descent, experiments."""
