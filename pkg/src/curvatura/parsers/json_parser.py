"""Parser for JSON run configurations."""

import json
from typing import Any, Dict

from ..errors import UsageError
from .base import ConfigParserBase


class JsonConfigParser(ConfigParserBase):
    """
    Parses a JSON object into a RunConfig. The object mirrors RunConfig,
    with ``manifold``, ``tolerances`` and ``steps`` as nested objects.

    Example:
        {"command": "tube", "manifold": {"name": "sphere", "parameters": {"r": 2.0}}}
    """

    def __init__(self, config_string: str) -> None:
        try:
            payload = json.loads(config_string)
        except json.JSONDecodeError as e:
            raise UsageError(f"Invalid JSON configuration: {e}") from e
        if not isinstance(payload, dict):
            raise UsageError(f"JSON configuration must be an object, got {type(payload).__name__}")
        self._payload: Dict[str, Any] = payload

    @property
    def payload(self) -> Dict[str, Any]:
        return dict(self._payload)
