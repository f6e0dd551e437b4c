"""Numerical tolerances and caps."""

# Dual map contract |<a, j(a)> - ||a||| and | ||j(a)|| - 1 |
DUAL_MAP_TOL = 1e-10

# Points of a hull closer than this (max-abs) are merged
DEDUP_TOL = 1e-14

# Piece activity on a region: active when the worst margin is >= -ACTIVITY_TOL
ACTIVITY_TOL = 1e-12

# Pairing residual allowed for certificates under strictly convex norms
PAIRING_TOL = 1e-8

# Line search
MAX_HALVINGS = 40

# Difference quotient step for the Monte-Carlo directional derivative
FD_STEP = 1e-6

# Built-in weighted_abs enumerates 2^n sign pieces
MAX_SIGN_PATTERN_DIM = 12

# Dense unit-sphere sampling is only attempted in low dimension
MAX_SPHERE_SAMPLING_DIM = 3

# Wolfe major cycles before declaring a stall
WOLFE_MAX_MAJOR = 10000

# Samples drawn per chunk; each chunk owns one random substream
SAMPLE_CHUNK = 256
