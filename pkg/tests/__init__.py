"""Test suite for optosqueeze.

This package contains the unit, integration and acceptance tests for the
optosqueeze solvers, optimizers and command-line tool.
"""

__all__: list[str] = []
