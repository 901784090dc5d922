"""Exception hierarchy shared by the library and the command line."""


class SzilardError(Exception):
    """Base class for every error raised by this package."""


class NumericalError(SzilardError):
    """A numerical routine could not deliver its contract."""


class NonConvergence(NumericalError):
    pass


class NoSignChange(NumericalError):
    pass


class NonFiniteObjective(NumericalError):
    pass


class UndefinedEfficiency(NumericalError):
    """Efficiency requested where no heat is absorbed (measurement ideality 0)."""


class NoThreshold(NumericalError):
    pass


class EmptyInput(SzilardError):
    pass


class ConfigError(SzilardError):
    """Bad command-line or config-file input. Always names the offending token."""


class BadFlag(ConfigError):
    pass


class BadValue(ConfigError):
    pass


class UnknownKey(ConfigError):
    pass
