"""
Run-configuration parsers, selected by file suffix.

Use TomlConfigParser for ``.toml`` files and JsonConfigParser for ``.json``,
or implement ConfigParserBase for other formats.
"""

from pathlib import Path
from typing import Dict, Type, Union

from ..errors import UsageError
from .base import ConfigParserBase
from .json_parser import JsonConfigParser
from .toml_parser import TomlConfigParser

PARSERS_BY_SUFFIX: Dict[str, Type[ConfigParserBase]] = {
    ".toml": TomlConfigParser,
    ".json": JsonConfigParser,
}


def parser_for_path(path: Union[str, Path]) -> ConfigParserBase:
    """Read ``path`` and return the parser matching its suffix."""
    path = Path(path)
    parser_class = PARSERS_BY_SUFFIX.get(path.suffix.lower())
    if parser_class is None:
        raise UsageError(
            f"Unsupported configuration format '{path.suffix}'. Supported: {sorted(PARSERS_BY_SUFFIX)}"
        )
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"Cannot read configuration file {str(path)!r}: {e}") from e
    return parser_class(text)


__all__ = [
    "ConfigParserBase",
    "JsonConfigParser",
    "PARSERS_BY_SUFFIX",
    "TomlConfigParser",
    "parser_for_path",
]
