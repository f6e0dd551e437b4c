"""Configuration module for setgrad."""
import os
from typing import Optional

from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _optional_int(name: str) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return None
    return int(raw)


class Config:
    """Process-wide configuration."""

    # Logging
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
    LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Experiment defaults
    DEFAULT_NORM = os.getenv("SETGRAD_NORM", "euclidean")
    SAMPLE_WORKERS = int(os.getenv("SETGRAD_SAMPLE_WORKERS", 1))

    # Numerical caps and tolerances
    FACE_DIM_CAP = int(os.getenv("SETGRAD_FACE_DIM_CAP", 16))
    MIN_NORM_TOL = float(os.getenv("SETGRAD_MIN_NORM_TOL", 1e-10))
    DUAL_NORM_TOL = float(os.getenv("SETGRAD_DUAL_NORM_TOL", 1e-8))
    DUAL_NORM_MAX_ITERS = int(os.getenv("SETGRAD_DUAL_NORM_MAX_ITERS", 100000))

    @property
    def seed_override(self) -> Optional[int]:
        """Seed forced through SETGRAD_SEED, read at call time."""
        return _optional_int("SETGRAD_SEED")


# Global config instance
config = Config()
