class ValidatorError(Exception):
    """Base class of validator errors."""

    def __init__(self, message: str = '') -> None:
        self.message = message
        super().__init__(self.message)


class NonSpatialVoAgent(ValidatorError):
    """Raised when a proximity report is requested for a global VO agent."""

    def __init__(self, name: str) -> None:
        self.name = name
        ValidatorError.__init__(self, f'VO agent "{name}" is global; proximity needs a spatial placement')
