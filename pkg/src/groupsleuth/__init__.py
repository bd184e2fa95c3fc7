"""Black-box group computations at desk scale."""

__version__ = "0.1.0"
