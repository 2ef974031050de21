from fastapi import APIRouter

from ...core.config import get_settings

router = APIRouter(tags=["health"])


@router.get("/health")
async def health_check():
    """Health check endpoint."""
    return {"status": "healthy"}


@router.get("/api/status")
async def status_check():
    """Status check endpoint."""
    settings = get_settings()
    return {"status": "running", "version": settings.VERSION, "schema": settings.SCHEMA_VERSION}
