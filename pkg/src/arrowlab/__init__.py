"""Arrowing, sender gadgets and Hanf-locality witnesses for finite simple graphs."""

__version__ = "0.1.0"
