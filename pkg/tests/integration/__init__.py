"""Integration tests for optosqueeze.

This package contains tests that run several components together,
including solver cross-checks and end-to-end command-line runs.
"""

__all__: list[str] = []
