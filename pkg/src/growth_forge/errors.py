"""Shared exception types."""


class DomainOverflowError(Exception):
    """An index beyond the configured evaluation cap was requested.

    Raised instead of silently truncating; the message names the offending
    index and the cap in force.
    """


class BudgetExceededError(Exception):
    """A bounded search or materialization ran out of its configured budget."""
