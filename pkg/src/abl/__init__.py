"""Alignment-Based Learning: unsupervised constituent induction from plain sentences."""

__version__ = "0.1.0"
