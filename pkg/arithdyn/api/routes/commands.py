"""POST endpoints mirroring the CLI subcommands.

Bodies are ``CommandOptions``; responses are the CLI's JSON documents.
Handlers are synchronous so FastAPI runs the exact arithmetic in its
worker threads.
"""
from typing import Any, Dict

from fastapi import APIRouter

from ...core.config import get_settings
from ...models.schemas import CommandOptions
from ...services.analysis_service import run_subcommand

router = APIRouter(prefix=get_settings().API_PREFIX, tags=["commands"])


def _run(name: str, options: CommandOptions) -> Dict[str, Any]:
    return run_subcommand(name, options).payload


@router.post("/degrees")
def degrees(options: CommandOptions):
    """Degree sequence and recurrence."""
    return _run("degrees", options)


@router.post("/dyndeg")
def dyndeg(options: CommandOptions):
    """Dynamical degrees, optionally with preimage counts of the given points."""
    return _run("dyndeg", options)


@router.post("/height")
def height(options: CommandOptions):
    return _run("height", options)


@router.post("/canheight")
def canheight(options: CommandOptions):
    return _run("canheight", options)


@router.post("/orbit")
def orbit(options: CommandOptions):
    return _run("orbit", options)


@router.post("/classify")
def classify(options: CommandOptions):
    return _run("classify", options)


@router.post("/analyze")
def analyze(options: CommandOptions):
    """Full analysis report."""
    return _run("analyze", options)
