"""Parser for TOML run configurations."""

import sys
from typing import Any, Dict

from ..errors import UsageError
from .base import ConfigParserBase

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class TomlConfigParser(ConfigParserBase):
    """
    Parses a TOML document into a RunConfig.

    Example:
        command = "el-check"
        p = [0, 1, 2]

        [manifold]
        name = "quadric-cp3"

        [tolerances]
        el = 1e-5
    """

    def __init__(self, config_string: str) -> None:
        try:
            self._payload: Dict[str, Any] = tomllib.loads(config_string)
        except tomllib.TOMLDecodeError as e:
            raise UsageError(f"Invalid TOML configuration: {e}") from e

    @property
    def payload(self) -> Dict[str, Any]:
        return dict(self._payload)
