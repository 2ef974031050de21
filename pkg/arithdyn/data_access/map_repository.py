import logging
from typing import List, Optional

from ..core.config import get_settings
from ..core.exceptions import PreconditionError
from ..models.catalog import ExampleMap
from .json_repository import JsonRepository

logger = logging.getLogger(__name__)


class MapRepository(JsonRepository[ExampleMap]):
    """The bundled catalog of example maps."""

    def __init__(self, data_dir: Optional[str] = None):
        super().__init__(
            model_class=ExampleMap,
            data_filename=get_settings().CATALOG_FILE,
            id_field="id",
            data_dir=data_dir,
        )

    def ids(self) -> List[str]:
        return [entry.id for entry in self.get_all()]

    def resolve(self, name: str) -> ExampleMap:
        """Catalog entry by id (case-insensitive)."""
        entry = self.get_by_id(name.strip().lower())
        if entry is None:
            raise PreconditionError(f"unknown example map {name!r}", {"known": self.ids()})
        logger.debug(f"example {entry.id}: {entry.expression}")
        return entry

    def with_tag(self, tag: str) -> List[ExampleMap]:
        return [entry for entry in self.get_all() if tag in entry.tags]
