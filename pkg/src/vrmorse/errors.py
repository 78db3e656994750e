"""Exception types shared across the package."""

import os

DEFAULT_SIMPLEX_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed its configured size budget."""

    def __init__(self, what, budget):
        super().__init__(f"{what} exceeds budget of {budget}")
        self.what = what
        self.budget = budget


def simplex_budget(budget=None):
    """Resolve a simplex budget: explicit value, then ``VRMORSE_BUDGET``, then the default."""
    if budget is not None:
        if budget <= 0:
            raise ValueError("budget must be positive")
        return int(budget)
    env = os.environ.get("VRMORSE_BUDGET")
    if env:
        value = int(env)
        if value <= 0:
            raise ValueError("VRMORSE_BUDGET must be positive")
        return value
    return DEFAULT_SIMPLEX_BUDGET
