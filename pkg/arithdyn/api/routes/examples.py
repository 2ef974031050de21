from typing import List, Optional

from fastapi import APIRouter, HTTPException, Query, status

from ...data_access.map_repository import MapRepository
from ...models.catalog import ExampleMap

router = APIRouter(prefix="/api/examples", tags=["examples"])
repository = MapRepository()


@router.get("/", response_model=List[ExampleMap])
async def get_examples(tag: Optional[str] = Query(None, description="Only maps carrying this tag")):
    """Get all catalog maps, optionally restricted to one tag."""
    if tag is not None:
        return repository.with_tag(tag)
    return repository.get_all()


@router.get("/{example_id}", response_model=ExampleMap)
async def get_example(example_id: str):
    """Get a catalog map by id."""
    entry = repository.get_by_id(example_id)
    if entry is None:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail=f"Example map {example_id!r} not found"
        )
    return entry
