"""Unit tests for optosqueeze.

This package contains unit tests that exercise individual modules in
isolation, on small systems with relaxed solver tolerances.
"""

__all__: list[str] = []
