"""Exception types raised across the package."""


class InvalidInputError(ValueError):
    """An argument violates a documented precondition."""


class DataError(ValueError):
    """Time-series data is missing, malformed or out of range."""

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class ConfigError(ValueError):
    """A run configuration field is invalid."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
