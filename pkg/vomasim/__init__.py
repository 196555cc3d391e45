__all__ = ['__version__', 'compile_spec', 'run_simulation']


def _get_version() -> str:
    from importlib.metadata import PackageNotFoundError, version

    try:
        __version__ = version(__package__)
    except PackageNotFoundError:
        __version__ = 'unknown'

    return __version__


__version__ = _get_version()  # e.g. '0.1.0'
from . import models  # noqa: E402  registers the bundled models
from .engine import run_simulation  # noqa: E402
from .vomas import compile_spec  # noqa: E402
