"""cwp-verifier - solvability verification for conceptual work product models."""

__version__ = "1.0.0"
