"""Exception types shared across the library."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class ComputationError(RuntimeError):
    """A numerical procedure failed to converge.

    ``diagnostics`` carries whatever partial information the failing routine
    had when it gave up (partial sums, achieved error estimates, term counts).
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics
