import os
from typing import Generic, List, Optional, Type, TypeVar

from pydantic import BaseModel

from ..core.config import get_settings
from ..core.utils import load_json_data

# Define a generic type variable for Pydantic models
T = TypeVar('T', bound=BaseModel)


class JsonRepository(Generic[T]):
    """Generic read-only repository over a bundled JSON file.

    The file holds one collection under ``data_key``; entries are validated
    into ``model_class`` instances.
    """

    def __init__(self, model_class: Type[T], data_filename: str, id_field: str = "id",
                 data_dir: Optional[str] = None):
        """Initialize the repository.

        Args:
            model_class: Pydantic model class for the entities
            data_filename: Name of the JSON file containing the data
            id_field: Name of the field used as identifier (default: "id")
            data_dir: Directory holding the file (default: ``Settings.DATA_DIR``)
        """
        self.model_class = model_class
        self.data_filename = data_filename
        self.id_field = id_field
        self.data_dir = data_dir or get_settings().DATA_DIR
        self.data_key = data_filename.split('.')[0]
        self._cache: Optional[List[T]] = None

    @property
    def path(self) -> str:
        return os.path.join(self.data_dir, self.data_filename)

    def get_all(self) -> List[T]:
        """Get all entities, loading the file once."""
        if self._cache is None:
            data = load_json_data(self.path)
            self._cache = [self.model_class(**item) for item in data.get(self.data_key, [])]
        return list(self._cache)

    def get_by_id(self, entity_id: str) -> Optional[T]:
        for entity in self.get_all():
            if getattr(entity, self.id_field) == entity_id:
                return entity
        return None
