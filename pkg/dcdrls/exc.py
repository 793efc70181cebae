class DcdException(Exception):
    """Base exception class."""


class UsageError(DcdException, ValueError):
    """Raised when an operation is called with invalid arguments (bad
    dimensions, non-finite entries, parameters out of range).

    """


class ConfigError(UsageError):
    """Raised when an experiment configuration is invalid.

    :param str path: Field path of the offending entry (``section.key``).
    :param str reason: What is wrong with it.

    """
    def __init__(self, path, reason):
        self.path = path
        self.reason = reason
        super(ConfigError, self).__init__("{}: {}".format(path, reason))


class DivergenceError(DcdException):
    """Raised when a filter state stops being finite."""
