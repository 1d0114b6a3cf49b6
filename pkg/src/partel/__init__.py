"""Conditional partial teleportation of a qubit as optimal cloning at a distance."""

__version__ = "0.1.0"
