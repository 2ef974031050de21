"""Subcommand dispatch: turns CommandOptions into JSON payloads and tables.

The CLI and the HTTP routes both go through ``AnalysisService.run`` so that
they return identical documents for identical inputs.
"""
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional

import pandas as pd

from ..core.config import get_settings
from ..core.exceptions import PreconditionError
from ..core.monitoring import PerformanceMonitor, track_memory_usage
from ..data_access.map_repository import MapRepository
from ..models.heights import RationalPoint
from ..models.polynomials import PolynomialMap
from ..models.schemas import AnalysisReport, CommandOptions, Meta, PointAnalysis, TheoremSummary
from .degree_service import DegreeService, check_submultiplicativity, detect_recurrence, is_polynomial_automorphism
from .height_service import HeightService, global_height
from .orbit_service import OrbitService
from .parser_service import parse_map, parse_point
from .polynomial_service import format_map

logger = logging.getLogger(__name__)
settings = get_settings()

SUBCOMMANDS = ("degrees", "dyndeg", "height", "canheight", "orbit", "classify", "analyze")


@dataclass
class CommandResult:
    """JSON payload of a subcommand plus the table behind its CSV form."""

    payload: Dict[str, Any]
    table: Optional[pd.DataFrame] = None

    def to_frame(self) -> pd.DataFrame:
        if self.table is not None:
            return self.table
        return pd.json_normalize(self.payload)


class AnalysisService:
    """Runs the subcommands with one set of budgets and one seed."""

    def __init__(self, options: CommandOptions, repository: Optional[MapRepository] = None):
        self.options = options
        self.repository = repository or MapRepository()
        self.seed = settings.SEED if options.seed is None else options.seed
        self.timings: Dict[str, float] = {}
        self.degree_service = DegreeService(
            seed=self.seed, trials=options.trials, degree_bound=options.degree_bound, timings=self.timings
        )
        self.height_service = HeightService(timings=self.timings)
        self.orbit_service = OrbitService(
            max_iter=options.max_iter, bit_budget=options.bit_budget, tol=options.tol, timings=self.timings
        )

    # inputs

    def resolve_map(self) -> PolynomialMap:
        if self.options.example is not None:
            return parse_map(self.repository.resolve(self.options.example).expression)
        if self.options.map is None:
            raise PreconditionError("a map is required (--map or --example)")
        return parse_map(self.options.map)

    def resolve_points(self, required: bool = True) -> List[RationalPoint]:
        points = [parse_point(text) for text in self.options.points]
        if required and not points:
            raise PreconditionError("a point is required (--point)")
        return points

    def single_point(self) -> RationalPoint:
        points = self.resolve_points()
        if len(points) > 1:
            raise PreconditionError("this subcommand takes a single --point", {"points": len(points)})
        return points[0]

    def meta(self) -> Dict[str, Any]:
        options = self.options
        budgets = {
            "max_iter": settings.MAX_ITER if options.max_iter is None else options.max_iter,
            "bit_budget": options.bit_budget or settings.ORBIT_BIT_BUDGET,
            "degree_bound": options.degree_bound or settings.DEGREE_BOUND,
            "tol": options.tol or settings.CANONICAL_HEIGHT_TOL,
            "trials": options.trials or settings.LAMBDA2_TRIALS,
            "zero_threshold": options.zero_threshold or settings.ZERO_THRESHOLD,
            "height_bound": options.height_bound or settings.HEIGHT_BOUND,
        }
        timing = None
        if options.timing:
            timing = {name: f"{seconds:.6f}" for name, seconds in sorted(self.timings.items())}
        meta = Meta(
            schema_version=settings.SCHEMA_VERSION,
            version=settings.VERSION,
            seed=self.seed,
            budgets=budgets,
            timing=timing,
        )
        return meta.model_dump(mode="json", by_alias=True, exclude_none=True)

    # subcommands

    def degrees(self) -> CommandResult:
        f = self.resolve_map()
        seq = self.degree_service.degree_sequence(f, self.options.max_iter)
        values = seq.verified_values()
        max_order = min(settings.RECURRENCE_MAX_ORDER, (len(values) - 2) // 2)
        recurrence = detect_recurrence(seq, max_order) if max_order >= 1 else None
        table = pd.DataFrame(
            {
                "n": range(seq.length),
                "degree": seq.values,
                "verified": seq.verified,
                "primes": [";".join(str(p) for p in primes) for primes in seq.primes_used],
            }
        )
        payload = {
            "map": format_map(f),
            "degree_sequence": seq.model_dump(mode="json"),
            "recurrence": None if recurrence is None else recurrence.model_dump(mode="json"),
            "submultiplicativity_violations": [list(pair) for pair in check_submultiplicativity(seq)],
            "meta": self.meta(),
        }
        return CommandResult(payload, table)

    def dyndeg(self) -> CommandResult:
        f = self.resolve_map()
        degrees = self.degree_service.analyze(f)
        payload = {
            "map": format_map(f),
            "degrees": degrees.model_dump(mode="json"),
            "automorphism": is_polynomial_automorphism(f, degrees),
        }
        points = self.resolve_points(required=False)
        if points:
            payload["preimages"] = [self.degree_service.preimages(f, q).model_dump(mode="json") for q in points]
        payload["meta"] = self.meta()
        return CommandResult(payload)

    def height(self) -> CommandResult:
        point = self.single_point()
        payload = self.height_service.decompose(point).model_dump(mode="json", by_alias=True)
        if self.options.map is not None or self.options.example is not None:
            f = self.resolve_map()
            bad = self.height_service.bad_places(f, point)
            orbit = self.orbit_service.orbit(f, point)
            payload["bad_places"] = bad.model_dump(mode="json")["places"]
            payload["orbit_local_heights"] = {
                "iterations": orbit.last_index,
                "stop_reason": orbit.stop_reason.value,
                "tau": self.height_service.orbit_local_heights(orbit.points, bad.places),
            }
            payload["growth_bound"] = self.height_service.growth_bound(f)
        payload["meta"] = self.meta()
        table = pd.DataFrame(payload["locals"], columns=["place", "log_arg"])
        return CommandResult(payload, table)

    def canheight(self) -> CommandResult:
        f = self.resolve_map()
        point = self.single_point()
        degrees = self.degree_service.analyze(f)
        estimate = self.orbit_service.canonical_height(f, point, degrees)
        residual = self.orbit_service.residual(f, point, degrees)
        payload = {
            "map": format_map(f),
            "point": point.coordinates(),
            "canonical_height": estimate.model_dump(mode="json"),
            "functional_equation_residual": residual.model_dump(mode="json"),
            "meta": self.meta(),
        }
        return CommandResult(payload)

    def orbit(self) -> CommandResult:
        f = self.resolve_map()
        point = self.single_point()
        orbit = self.orbit_service.orbit(f, point)
        rows = orbit.rows()
        payload = {
            "map": format_map(f),
            "point": point.coordinates(),
            "stop_reason": orbit.stop_reason.value,
            "preperiod": orbit.preperiod,
            "period": orbit.period,
            "rows": rows,
            "meta": self.meta(),
        }
        return CommandResult(payload, pd.DataFrame(rows, columns=["n", "x1", "x2", "height", "height_bits"]))

    def classify(self) -> CommandResult:
        f = self.resolve_map()
        point = self.single_point()
        verdict = self.orbit_service.classify(f, point, self.options.height_bound)
        payload = {
            "map": format_map(f),
            "point": point.coordinates(),
            "classification": verdict.model_dump(mode="json"),
            "meta": self.meta(),
        }
        return CommandResult(payload)

    @track_memory_usage
    def analyze(self) -> CommandResult:
        f = self.resolve_map()
        points = self.resolve_points()
        with PerformanceMonitor("analyze", timings=self.timings):
            degrees = self.degree_service.analyze(f)
            analyses = [self._analyze_point(f, point, degrees) for point in points]
        report = AnalysisReport(
            map=format_map(f),
            degrees=degrees,
            points=analyses,
            report=self._summary(f, degrees, analyses),
        )
        payload = report.model_dump(mode="json", by_alias=True)
        payload["meta"] = self.meta()
        return CommandResult(payload, pd.DataFrame([_point_row(a) for a in analyses]))

    def _analyze_point(self, f: PolynomialMap, point: RationalPoint, degrees) -> PointAnalysis:
        theorem = self.orbit_service.main_theorem(f, point, degrees, self.options.zero_threshold)
        orbit = self.orbit_service.orbit(f, point)
        return PointAnalysis(
            point=point.coordinates(),
            height=global_height(point),
            stop_reason=orbit.stop_reason,
            iterations=orbit.last_index,
            preperiod=orbit.preperiod,
            period=orbit.period,
            main_theorem=theorem,
        )

    @staticmethod
    def _summary(f: PolynomialMap, degrees, analyses: List[PointAnalysis]) -> TheoremSummary:
        verdicts = [a.main_theorem.inequality_star_ok for a in analyses]
        decided = [v for v in verdicts if v is not None]
        notes = sorted({note for a in analyses for note in a.main_theorem.notes})
        return TheoremSummary(
            hypothesis_ok=degrees.small_topological_degree,
            lambda1_polynomial=degrees.lambda1.polynomial,
            lambda2=degrees.lambda2,
            inequality_star_ok=all(decided) if decided else None,
            automorphism=is_polynomial_automorphism(f, degrees),
            notes=notes,
        )

    # dispatch

    def handlers(self) -> Dict[str, Callable[[], CommandResult]]:
        return {
            "degrees": self.degrees,
            "dyndeg": self.dyndeg,
            "height": self.height,
            "canheight": self.canheight,
            "orbit": self.orbit,
            "classify": self.classify,
            "analyze": self.analyze,
        }

    def run(self, name: str) -> CommandResult:
        handlers = self.handlers()
        if name not in handlers:
            raise PreconditionError(f"unknown subcommand {name!r}", {"known": list(SUBCOMMANDS)})
        logger.info(f"running {name}")
        return handlers[name]()


def _point_row(analysis: PointAnalysis) -> Dict[str, Any]:
    theorem = analysis.main_theorem
    return {
        "point": ",".join(str(c) for c in analysis.point),
        "stop_reason": analysis.stop_reason.value,
        "iterations": analysis.iterations,
        "hhat": None if theorem.hhat is None else theorem.hhat.value,
        "alpha": theorem.alpha.extrapolated,
        "verdict": theorem.classification.verdict.value,
        "inequality_star_ok": theorem.inequality_star_ok,
        "residual": None if theorem.functional_equation_residual is None else theorem.functional_equation_residual.value,
    }



def run_subcommand(name: str, options: CommandOptions) -> CommandResult:
    """Run one subcommand; the CLI and the HTTP routes both come through here."""
    return AnalysisService(options).run(name)
