class SizeLimitError(Exception):
    """Raised when an exact/enumerative operation would exceed its size limit."""


class ParseError(Exception):
    """Syntax error in a formula or knowledge-base file."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column
