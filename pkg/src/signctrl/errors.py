"""Exception types raised by signctrl."""


class NetworkError(ValueError):
    """A network or graph violates its structural invariants."""


class CapExceededError(ValueError):
    """An exhaustive enumeration would exceed its configured size cap."""


class SamplingError(RuntimeError):
    """No sign-consistent realization could be drawn within the retry budget."""
