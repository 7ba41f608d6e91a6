"""Construction and numerical verification of marginally trapped submanifolds."""

__version__ = "0.1.0"
