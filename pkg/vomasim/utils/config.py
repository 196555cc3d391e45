"""Plain-text key=value parameter files."""

import configparser
from pathlib import Path
from typing import Dict, Iterable, Optional

from loguru import logger

from ..data_structure.constants import PathLike

__all__ = ['ParamConfig', 'load_params', 'parse_param_pairs']


class ParamConfig:
    """Model parameter table read from a ``key=value`` file.

    One pair per line, ``#`` starts a comment, blank lines are ignored and a key
    given twice keeps its last value. Values stay strings; the model's parameter
    schema coerces them.
    """

    section_key = 'params'

    def __init__(self, path: Optional[PathLike] = None) -> None:
        """
        Args:
            path (Optional[PathLike], optional): Path to the config file. Defaults to None (empty table).
        """
        self.parser = configparser.ConfigParser(
            delimiters=('=',), comment_prefixes=('#',), inline_comment_prefixes=('#',), strict=False, interpolation=None
        )
        self.parser.optionxform = str  # keep key case
        self.path = Path(path).resolve() if path else None
        self.params: Dict[str, str] = {}
        if self.path is not None:
            if not self.path.is_file():
                raise FileNotFoundError(f'Parameter file not found: "{self.path.as_posix()}"')
            try:
                self.read_string(self.path.read_text(encoding='utf-8'))
            except ValueError as e:
                raise ValueError(f'"{self.path.as_posix()}", {e}') from None
            logger.debug(f'Read {len(self.params)} parameter(s) from "{self.path.as_posix()}"')

    def read_string(self, text: str) -> None:
        """Parse ``key=value`` lines.

        Raises:
            ValueError: naming the first line that is a section header or has no ``=``.
        """
        for lineno, line in enumerate(text.splitlines(), start=1):
            if self.parser.SECTCRE.match(line.strip()):
                raise ValueError(f'line {lineno}: sections are not supported, got "{line.strip()}"')
        try:
            self.parser.read_string(f'[{self.section_key}]\n{text}')
        except configparser.ParsingError as e:
            # line numbers are shifted by the injected section header
            lineno = e.errors[0][0] - 1
            line = text.split('\n')[lineno - 1].strip()
            raise ValueError(f'line {lineno}: expected key=value, got "{line}"') from None
        except configparser.Error as e:
            raise ValueError(e.message) from None
        self.params = {key: value.strip() for key, value in self.parser[self.section_key].items()}

    def __repr__(self) -> str:
        path = self.path.as_posix() if self.path else None
        return f'ParamConfig(path="{path}", params={self.params})'


def load_params(path: PathLike) -> Dict[str, str]:
    """Read a ``key=value`` parameter file.

    Args:
        path (PathLike): Path to the file.

    Returns:
        Dict[str, str]: raw parameter table.
    """
    return ParamConfig(path).params


def parse_param_pairs(pairs: Iterable[str]) -> Dict[str, str]:
    """Parse ``k=v`` strings given on the command line.

    Raises:
        ValueError: If a pair has no ``=`` or an empty key.
    """
    params = {}
    for pair in pairs:
        key, sep, value = pair.partition('=')
        key = key.strip()
        if not sep or not key:
            raise ValueError(f'Invalid parameter "{pair}", expected key=value')
        params[key] = value.strip()
    return params
