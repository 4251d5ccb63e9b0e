"""Dispersive qubit-cavity cat states leaking into finite and structured reservoirs."""

__version__ = "0.1.0"
