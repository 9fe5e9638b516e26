"""Simulator for angular momentum transfer by a disembodied spin."""

__version__ = "1.0.0"
