from typing import List, Optional


class SpecError(Exception):
    """Base class of spec compile errors; always positioned."""

    def __init__(self, detail: str, line: int, column: int) -> None:
        self.detail = detail
        self.line = line
        self.column = column
        self.message = f'line {line}, column {column}: {detail}'
        super().__init__(self.message)


class SpecSyntaxError(SpecError):
    """Raised when the spec text does not follow the grammar."""

    def __init__(self, expected: List[str], found: str, line: int, column: int) -> None:
        self.expected = list(expected)
        self.found = found
        if len(self.expected) == 1:
            wanted = self.expected[0]
        else:
            wanted = 'one of ' + ', '.join(self.expected)
        SpecError.__init__(self, f'expected {wanted} but found {found}', line, column)


class SpecNameError(SpecError):
    """Base class of name resolution errors."""


class DuplicateName(SpecNameError):
    def __init__(self, name: str, category: str, line: int, column: int) -> None:
        self.name = name
        self.category = category
        SpecNameError.__init__(self, f'duplicate {category} name "{name}"', line, column)


class UnknownVoAgent(SpecNameError):
    def __init__(self, name: str, line: int, column: int) -> None:
        self.name = name
        SpecNameError.__init__(self, f'unknown VO agent "{name}"', line, column)


class UnknownAttribute(SpecNameError):
    def __init__(self, name: str, line: int, column: int) -> None:
        self.name = name
        SpecNameError.__init__(self, f'no model declares attribute "{name}"', line, column)


class UnboundVariable(SpecNameError):
    def __init__(self, name: str, line: int, column: int) -> None:
        self.name = name
        SpecNameError.__init__(self, f'"{name}" is not bound by an enclosing forall/exists/proximity', line, column)


class SpecTypeError(SpecError):
    """Raised when an expression does not have the type its position requires."""

    def __init__(self, expression: str, expected: str, actual: str, line: int, column: int) -> None:
        self.expression = expression
        self.expected = expected
        self.actual = actual
        SpecError.__init__(self, f'{expression}: expected {expected}, got {actual}', line, column)


class PlacementError(SpecError):
    """Raised when a spatial VO agent lies outside the world it is run against."""

    def __init__(self, name: str, detail: str, line: int = 0, column: int = 0) -> None:
        self.name = name
        SpecError.__init__(self, f'VO agent "{name}" {detail}', line, column)


class EvalError(Exception):
    """Raised when an expression cannot produce a value; logged, never fatal to a run."""

    codes = ('EmptySet', 'DivByZero', 'MissingAttribute', 'TypeMismatch', 'Overflow')

    def __init__(self, code: str, detail: Optional[str] = None) -> None:
        self.code = code
        self.detail = detail or code
        self.message = f'{code}: {self.detail}'
        super().__init__(self.message)


class VomasHalted(RuntimeError):
    """Raised when per-tick evaluation is requested after a halt."""
