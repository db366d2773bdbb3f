from abc import ABC, abstractmethod
from asyncio import iscoroutine
from typing import TYPE_CHECKING, Any, Coroutine, Dict, List, Optional, Type, Union

from pydantic import BaseModel, ConfigDict

from .config import RunConfig, Tolerances
from .immersion import ImmersionPatch, SubmanifoldMesh
from .zoo.registry import ZooEntry

if TYPE_CHECKING:
    from .reports.base import CheckOutcome, Report


class CheckContext(BaseModel):
    """Everything a check handler needs: the config, the built patch and its mesh."""

    config: RunConfig
    patch: ImmersionPatch
    mesh: SubmanifoldMesh
    p_values: List[int]
    workers: int = 1
    entry: Optional[ZooEntry] = None

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @property
    def tolerances(self) -> Tolerances:
        return self.config.tolerances

    @property
    def tags(self) -> tuple:
        return self.entry.tags if self.entry is not None else ()

    @property
    def references(self) -> Dict[str, float]:
        if self.entry is None:
            return {}
        return self.entry.references(**self.config.manifold.parameters)

class CheckHandler(ABC):
    command: str = ""

    def applies(self, context: CheckContext) -> bool:
        """False when the check makes no sense for this manifold; report-all then skips it."""
        return True

    @abstractmethod
    def process(self, context: CheckContext) -> Union["CheckOutcome", Coroutine[Any, Any, "CheckOutcome"]]:
        pass

    async def __call__(self, context: CheckContext) -> "CheckOutcome":
        res = self.process(context=context)
        if iscoroutine(res):
            return await res
        return res

class ReportWriter(ABC):
    @abstractmethod
    def write(self, report: "Report") -> Any:
        """Persist the report. Returns what was written, if anything."""
        ...

class CheckRouterInterface(ABC):
    @abstractmethod
    def get_handlers_for_command(self, command: str) -> List[Any]:
        pass

    @abstractmethod
    def register(self, command: str, handler_class: Type[CheckHandler]) -> None:
        pass

    @abstractmethod
    def deregister(self, command: str, handler_class: Type[CheckHandler]) -> None:
        pass
