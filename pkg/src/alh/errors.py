class AlhError(Exception):
    """Base class for errors raised by this package."""


class ParseError(AlhError, ValueError):
    pass


class ValidationError(AlhError, ValueError):
    pass


class ConfigError(AlhError, ValueError):
    pass


class SolverError(AlhError, RuntimeError):
    pass
