"""Shared size budget for assembled matrices and materialized products.

The default caps work comfortably above every bundled example; callers
can raise or lower the cap per call, and the PDCE_BUDGET environment
variable overrides the default globally.
"""

from __future__ import annotations

import os

__all__ = ["DEFAULT_BUDGET", "current_budget"]

DEFAULT_BUDGET = 1_000_000


def current_budget(override: int | None = None) -> int:
    """The active budget: explicit override, else PDCE_BUDGET, else the default."""
    if override is not None:
        return int(override)
    env = os.environ.get("PDCE_BUDGET")
    return int(env) if env else DEFAULT_BUDGET
