"""Run-time budgets.

The point budget bounds q^n (the number of vectors acted on); the scan budget
bounds |GL_n(q)| for harnesses that walk the whole group.
"""

import os

DEFAULT_POINT_BUDGET = 4096
DEFAULT_SCAN_BUDGET = 25000
ENV_POINT_BUDGET = "FFGROUP_BUDGET_POINTS"

_overrides: dict[str, int] = {}


def point_budget() -> int:
    if "points" in _overrides:
        return _overrides["points"]
    env = os.environ.get(ENV_POINT_BUDGET)
    if env:
        return int(env)
    return DEFAULT_POINT_BUDGET


def scan_budget() -> int:
    return _overrides.get("scan", DEFAULT_SCAN_BUDGET)


def set_budgets(points: int | None = None, scan: int | None = None) -> None:
    """Override budgets for the current process (used by the CLI)."""
    for key, value in (("points", points), ("scan", scan)):
        if value is None:
            continue
        if value < 1:
            raise ValueError(f"{key} budget must be >= 1")
        _overrides[key] = value


def reset_budgets() -> None:
    _overrides.clear()
