"""File persistence: hulls, traces, max-affine specs and run summaries."""
