"""Figure rendering for paleodemog artifacts."""

__version__ = "0.1.0"
