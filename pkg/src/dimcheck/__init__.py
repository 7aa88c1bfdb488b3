"""Intrinsic-dimensionality estimation and a learner-comparison rig for tabular data."""

__version__ = "0.1.0"
