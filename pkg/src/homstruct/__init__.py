"""Exact verification of homogeneous structures on SU(1,1) with
left-invariant diagonal metrics."""

__version__ = "0.1.0"
