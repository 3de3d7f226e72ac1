class OSACError(Exception):
    pass


class InvalidInputError(OSACError, ValueError):
    pass


class CapacityViolationError(OSACError):
    pass


class UndefinedMetricError(OSACError, ArithmeticError):
    pass


class SizeLimitError(OSACError):
    pass


class TraceParseError(OSACError, ValueError):
    def __init__(self, row, message):
        super().__init__(f"row {row}: {message}")
        self.row = row


class ConfigError(OSACError, ValueError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
