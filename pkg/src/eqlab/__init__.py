"""Exact tools for equiangular lines, regular two-graphs and quasi-symmetric designs."""

__version__ = "0.1.0"
