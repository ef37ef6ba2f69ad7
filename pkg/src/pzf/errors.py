"""Exception types shared across modules."""


class StateCapExceeded(Exception):
    """Reachable-state enumeration would exceed the configured cap.

    The enumeration aborts instead of approximating; callers may retry with a
    larger cap or fall back to Monte Carlo estimation.
    """

    def __init__(self, cap: int):
        super().__init__(f"reachable state count exceeds the configured cap of {cap} states")
        self.cap = cap
