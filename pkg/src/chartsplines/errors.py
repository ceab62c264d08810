"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid construction parameters or an unsupported combination."""


class DomainError(ValueError):
    """Evaluation point outside the configured parameter domain."""


class RankError(ConfigError):
    """A projector or fit is rank deficient for the requested setup."""


class NumericalError(RuntimeError):
    """A computation produced results outside its accuracy contract."""
