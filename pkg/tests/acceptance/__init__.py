"""Statistical acceptance runs for optosqueeze, enabled with --run-slow."""

__all__: list[str] = []
