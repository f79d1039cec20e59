class IntegrationError(RuntimeError):
    """Adaptive step control failed (step underflow or step budget exhausted)."""


class UntrustedResult(RuntimeError):
    """A truncated-space computation leaked population past its bound."""
