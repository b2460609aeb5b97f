"""Deterministic event-sourced supply chain simulator."""

__version__ = "0.1.0"
