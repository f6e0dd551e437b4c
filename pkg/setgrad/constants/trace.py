"""Trace file column and status names."""

STATUS_STEP = "step"
STATUS_SHRINK = "shrink"
STATUS_STATIONARY = "stationary"
STATUS_ITER_LIMIT = "iter_limit"

TRACE_STATUSES = (STATUS_STEP, STATUS_SHRINK, STATUS_STATIONARY, STATUS_ITER_LIMIT)

COLUMN_ITER = "iter"
COLUMN_F = "f"
COLUMN_EPS = "eps"
COLUMN_A_MIN_NORM = "a_min_norm"
COLUMN_STEP = "step"
COLUMN_SAMPLES = "samples"
COLUMN_STATUS = "status"

# Significant digits for bit-exact float round trips
FLOAT_DIGITS = 17


def trace_columns(dim: int) -> list:
    """Return the ordered trace header for dimension ``dim``."""
    return (
        [COLUMN_ITER]
        + [f"x{i}" for i in range(dim)]
        + [COLUMN_F, COLUMN_EPS, COLUMN_A_MIN_NORM]
        + [f"h{i}" for i in range(dim)]
        + [COLUMN_STEP, COLUMN_SAMPLES, COLUMN_STATUS]
    )
