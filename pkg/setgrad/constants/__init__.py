"""Constants package for setgrad."""
