"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """Operand outside the range implied by a multiplier configuration."""


class UnsupportedConfigError(ValueError):
    """Multiplier configuration the hardware model does not define."""


class MappingError(ValueError):
    """Workload does not fit on the configured banks."""


class ModelFormatError(ValueError):
    """Malformed serialized model file."""


class ConfigFileError(ValueError):
    """Malformed key-value configuration file, with location info."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        where = ""
        if path is not None:
            where = f"{path}: "
            if line is not None:
                where = f"{path}:{line}: "
        super().__init__(where + message)
        self.path = path
        self.line = line
