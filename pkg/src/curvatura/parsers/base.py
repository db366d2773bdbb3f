"""Abstract base for run-configuration parsers. Implement this to support other file formats."""

from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

from ..config import RunConfig, load_run_config, merge_payloads


class ConfigParserBase(ABC):
    """
    Interface for turning a raw configuration document into a RunConfig.
    Subclasses decode the document into a nested mapping; validation and
    flag overrides are shared.
    """

    @property
    @abstractmethod
    def payload(self) -> Dict[str, Any]:
        """The decoded document as a nested mapping."""
        ...

    def initialize(self, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
        """Merge ``overrides`` over the document and validate the result."""
        return load_run_config(merge_payloads(self.payload, overrides or {}))
