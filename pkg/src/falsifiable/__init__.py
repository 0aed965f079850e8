"""Exact falsifiability, capacity and learnability measures for finite theories."""

__version__ = "0.1.0"
