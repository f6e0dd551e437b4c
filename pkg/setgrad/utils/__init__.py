"""Small helpers shared by services, repositories and commands."""
