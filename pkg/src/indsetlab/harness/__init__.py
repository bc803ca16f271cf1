"""Experiments and command-line interface."""
