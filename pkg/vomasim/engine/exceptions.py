from typing import Any, Optional


class EngineError(Exception):
    """Base class of simulation engine errors."""

    def __init__(self, message: str = '') -> None:
        self.message = message
        super().__init__(self.message)


class UnknownModel(EngineError):
    """Raised when a model name is not registered."""

    def __init__(self, name: str, known: Optional[list] = None) -> None:
        self.name = name
        message = f'Unknown model "{name}"'
        if known:
            message += f', registered models are {sorted(known)}'
        EngineError.__init__(self, message)


class ParameterError(EngineError):
    """Raised when a model parameter fails its schema."""

    def __init__(self, name: str, expected: str, value: Any) -> None:
        self.name = name
        self.expected = expected
        self.value = value
        EngineError.__init__(self, f'Invalid parameter "{name}": expected {expected}, got {value!r}')


class ModelPanic(EngineError):
    """Raised when a model step fails; the run aborts."""

    def __init__(self, model: str, tick: int, cause: Any) -> None:
        self.model = model
        self.tick = tick
        self.cause = cause
        EngineError.__init__(self, f'Model "{model}" failed at tick {tick}: {cause}')
