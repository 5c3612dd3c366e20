"""Secret sharing with rank-metric codes and q-polymatroid ports."""

__version__ = "0.1.0"
