"""Error type shared by all qhopf modules.

Every failure that a caller might want to dispatch on carries a stable
machine-readable ``code`` string (e.g. "LEVEL_MISMATCH", "NOT_INVERTIBLE").
Verification *results* are never errors — axiom failures come back as report
data; EngineError is for misuse and unsatisfiable preconditions.
"""

from __future__ import annotations

__all__ = ["EngineError"]


class EngineError(Exception):
    """Exception with a stable machine-readable code."""

    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)
