"""Exact orbits and the quantities read off them: canonical heights,
arithmetic degrees, the functional equation and orbit classification."""
import logging
from typing import Dict, List, Optional, Tuple

import mpmath

from ..core.config import get_settings
from ..core.exceptions import BudgetExceededError, PreconditionError
from ..core.monitoring import PerformanceMonitor
from ..core.utils import decimal_string, mp_log, mp_rational, working_precision
from ..models.dynamics import DynamicalDegrees
from ..models.heights import RationalPoint
from ..models.orbits import (
    ArithmeticDegreeEstimate,
    ArithmeticDegreeSample,
    CanonicalHeightEstimate,
    FunctionalEquationResidual,
    MainTheoremReport,
    Orbit,
    OrbitClass,
    StopReason,
    Verdict,
)
from ..models.polynomials import PolynomialMap
from .degree_service import is_polynomial_automorphism
from .height_service import global_height
from .polynomial_service import evaluate_map, require_dominant

logger = logging.getLogger(__name__)
settings = get_settings()


def orbit(
    f: PolynomialMap,
    point: RationalPoint,
    max_iter: Optional[int] = None,
    bit_budget: Optional[int] = None,
) -> Orbit:
    """Iterate f exactly from ``point`` for at most ``max_iter`` steps.

    Stops early on the first repeated point (the repetition is stored) or
    when an image exceeds the coordinate bit budget.
    """
    require_dominant(f)
    requested = settings.MAX_ITER if max_iter is None else max_iter
    if requested < 0:
        raise PreconditionError("iteration count must be nonnegative", {"max_iter": requested})
    points = [point]
    seen: Dict[Tuple[int, int, int], int] = {point.key: 0}
    stop, preperiod, period = StopReason.COMPLETED, None, None
    for n in range(1, requested + 1):
        try:
            image = evaluate_map(f, points[-1], bit_budget)
        except BudgetExceededError as e:
            logger.info(f"orbit truncated at n={n - 1}: {e.message}")
            stop = StopReason.BUDGET_EXCEEDED
            break
        points.append(image)
        if image.key in seen:
            preperiod = seen[image.key]
            period = n - preperiod
            stop = StopReason.CYCLE_DETECTED
            logger.info(f"cycle detected: preperiod {preperiod}, period {period}")
            break
        seen[image.key] = n
    return Orbit(
        points=points,
        heights=[global_height(p) for p in points],
        stop_reason=stop,
        preperiod=preperiod,
        period=period,
        requested=requested,
    )


# ---------------------------------------------------------------------------
# canonical height
# ---------------------------------------------------------------------------


def _require_expanding(degrees: DynamicalDegrees) -> None:
    if degrees.lambda1.compare(1) <= 0:
        raise PreconditionError("canonical height needs lambda1 > 1", {"lambda1": degrees.lambda1.decimal})


def _normalizer(n: int, exponent: int, lam: mpmath.mpf) -> mpmath.mpf:
    return mpmath.mpf(n) ** exponent * lam ** n


def _lambda_bounds(degrees: DynamicalDegrees) -> Tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]:
    lam = degrees.lambda1
    return mp_rational(lam.lower), lam.mp_value(), mp_rational(lam.upper)


def _usable_iterations(orbit_: Orbit, wanted: int) -> int:
    """Largest N <= wanted whose height is known."""
    if orbit_.is_cycle or orbit_.last_index >= wanted:
        return wanted
    logger.warning(f"orbit budget allows N={orbit_.last_index} instead of N={wanted}")
    return orbit_.last_index


def _canonical_height_from_orbit(
    orbit_: Orbit, degrees: DynamicalDegrees, n: int, tol: float
) -> CanonicalHeightEstimate:
    exponent = degrees.growth_exponent or 0
    common = dict(
        lambda1=degrees.lambda1,
        growth_exponent=exponent,
        stop_reason=orbit_.stop_reason,
    )
    if orbit_.is_cycle:
        return CanonicalHeightEstimate(
            value="0", error_bound="0", iterations_used=n, tail_delta="0",
            certified_zero=True, converged=True, **common,
        )
    n = _usable_iterations(orbit_, n)
    if n < 1:
        raise BudgetExceededError("no iterate within the bit budget", partial_degree=None, iterations=n)
    with mpmath.workprec(working_precision()):
        lower, lam, upper = _lambda_bounds(degrees)

        def estimate(k: int, base: mpmath.mpf) -> mpmath.mpf:
            return mp_log(orbit_.heights[k].log_argument) / _normalizer(k, exponent, base)

        value = estimate(n, lam)
        error = (estimate(n, lower) - estimate(n, upper)) / 2
        tail = abs(value - estimate(n - 1, lam)) if n >= 2 else None
        return CanonicalHeightEstimate(
            value=decimal_string(value),
            error_bound=mpmath.nstr(error, 3),
            iterations_used=n,
            tail_delta=None if tail is None else mpmath.nstr(tail, 6),
            converged=tail is not None and tail < tol,
            **common,
        )


def canonical_height(
    f: PolynomialMap,
    point: RationalPoint,
    degrees: DynamicalDegrees,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    bit_budget: Optional[int] = None,
) -> CanonicalHeightEstimate:
    """hhat(P) estimated by h(f^N P) / (N^l lambda1^N), N = ``max_iter``."""
    _require_expanding(degrees)
    n = settings.MAX_ITER if max_iter is None else max_iter
    tol = settings.CANONICAL_HEIGHT_TOL if tol is None else tol
    return _canonical_height_from_orbit(orbit(f, point, n, bit_budget), degrees, n, tol)


def _residual_from_orbit(orbit_: Orbit, degrees: DynamicalDegrees, n: int) -> FunctionalEquationResidual:
    if orbit_.is_cycle:
        return FunctionalEquationResidual(value="0", error_bound="0", iterations_used=n, certified_zero=True)
    n = min(n, orbit_.last_index - 1)
    if n < 1:
        raise BudgetExceededError("functional equation needs two iterates within the bit budget")
    exponent = degrees.growth_exponent or 0
    with mpmath.workprec(working_precision()):
        lower, lam, upper = _lambda_bounds(degrees)
        h_next = mp_log(orbit_.heights[n + 1].log_argument)
        h_now = mp_log(orbit_.heights[n].log_argument)

        def residual(base: mpmath.mpf) -> mpmath.mpf:
            return (h_next - base * h_now) / _normalizer(n, exponent, base)

        value = residual(lam)
        error = abs(residual(lower) - residual(upper)) / 2
        return FunctionalEquationResidual(
            value=decimal_string(value), error_bound=mpmath.nstr(error, 3), iterations_used=n
        )


def functional_equation_residual(
    f: PolynomialMap,
    point: RationalPoint,
    degrees: DynamicalDegrees,
    n: Optional[int] = None,
    bit_budget: Optional[int] = None,
) -> FunctionalEquationResidual:
    """hhat_N(f(P)) - lambda1 * hhat_N(P); zero exactly on detected cycles."""
    _require_expanding(degrees)
    n = settings.MAX_ITER if n is None else n
    return _residual_from_orbit(orbit(f, point, n + 1, bit_budget), degrees, n)


# ---------------------------------------------------------------------------
# arithmetic degree and classification
# ---------------------------------------------------------------------------


def _arithmetic_degree_from_orbit(orbit_: Orbit, n: int) -> ArithmeticDegreeEstimate:
    top = n if orbit_.is_cycle else min(n, orbit_.last_index)
    if top < 1 and n >= 1:
        raise BudgetExceededError("no iterate within the bit budget")
    samples: List[ArithmeticDegreeSample] = []
    with mpmath.workprec(working_precision()):
        for k in range(1, top + 1):
            h = mp_log(orbit_.height_at(k).log_argument)
            samples.append(ArithmeticDegreeSample(n=k, value=decimal_string(max(mpmath.mpf(1), h) ** (mpmath.mpf(1) / k))))
    if orbit_.is_cycle or not samples:
        # bounded orbits have arithmetic degree 1
        extrapolated = decimal_string(1)
    else:
        extrapolated = samples[-1].value
    return ArithmeticDegreeEstimate(
        samples=samples,
        extrapolated=extrapolated,
        window=[s.n for s in samples],
        bounded_orbit=orbit_.is_cycle,
    )


def arithmetic_degree(
    f: PolynomialMap,
    point: RationalPoint,
    max_iter: Optional[int] = None,
    bit_budget: Optional[int] = None,
) -> ArithmeticDegreeEstimate:
    """alpha(P) read off as max(1, h(f^n P))^(1/n) at the largest computed n."""
    n = settings.MAX_ITER if max_iter is None else max_iter
    return _arithmetic_degree_from_orbit(orbit(f, point, n, bit_budget), n)


def _height_ratios(orbit_: Orbit) -> List[Optional[mpmath.mpf]]:
    ratios = []
    with mpmath.workprec(working_precision()):
        logs = [mp_log(h.log_argument) for h in orbit_.heights]
        for previous, current in zip(logs, logs[1:]):
            ratios.append(current / previous if previous > 0 else None)
    return ratios


def _classify_from_orbit(orbit_: Orbit, height_bound: float) -> OrbitClass:
    if orbit_.is_cycle:
        return OrbitClass(verdict=Verdict.PERIODIC, preperiod=orbit_.preperiod, period=orbit_.period)
    window = settings.CLASSIFY_WINDOW
    ratios = _height_ratios(orbit_)[-window:]
    shown = [mpmath.nstr(r, 8) if r is not None else "undefined" for r in ratios]
    with mpmath.workprec(working_precision()):
        tallest = max(mp_log(h.log_argument) for h in orbit_.heights)
        growing = (
            len(ratios) == window
            and tallest > height_bound
            and all(r is not None and r > settings.CLASSIFY_RATIO for r in ratios)
        )
    if growing:
        return OrbitClass(verdict=Verdict.HEIGHT_GROWING, rate=mpmath.nstr(ratios[-1], 8), ratios=shown)
    note = f"no repetition within {orbit_.last_index} iterates ({orbit_.stop_reason.value})"
    return OrbitClass(verdict=Verdict.UNDETERMINED, note=note, ratios=shown)


def classify_orbit(
    f: PolynomialMap,
    point: RationalPoint,
    height_bound: Optional[float] = None,
    max_iter: Optional[int] = None,
    bit_budget: Optional[int] = None,
) -> OrbitClass:
    """Periodic on an exact repetition, height-growing when heights pass
    ``height_bound`` and keep growing geometrically, undetermined otherwise."""
    bound = settings.HEIGHT_BOUND if height_bound is None else height_bound
    return _classify_from_orbit(orbit(f, point, max_iter, bit_budget), bound)


# ---------------------------------------------------------------------------
# theorem checks
# ---------------------------------------------------------------------------


def check_main_theorem(
    f: PolynomialMap,
    point: RationalPoint,
    degrees: DynamicalDegrees,
    zero_threshold: Optional[float] = None,
    max_iter: Optional[int] = None,
    bit_budget: Optional[int] = None,
    tol: Optional[float] = None,
) -> MainTheoremReport:
    threshold = settings.ZERO_THRESHOLD if zero_threshold is None else zero_threshold
    n = settings.MAX_ITER if max_iter is None else max_iter
    tol = settings.CANONICAL_HEIGHT_TOL if tol is None else tol
    orbit_ = orbit(f, point, n + 1, bit_budget)
    alpha = _arithmetic_degree_from_orbit(orbit_, n)
    classification = _classify_from_orbit(orbit_, settings.HEIGHT_BOUND)
    notes: List[str] = []

    hhat = residual = None
    if degrees.lambda1.compare(1) > 0:
        hhat = _canonical_height_from_orbit(orbit_, degrees, n, tol)
        residual = _residual_from_orbit(orbit_, degrees, n)
    else:
        notes.append("lambda1 = 1: canonical height undefined")
    is_zero = hhat is not None and (hhat.certified_zero or hhat.as_float() < threshold)

    hypothesis_ok = degrees.small_topological_degree
    inequality_star_ok = None
    if not hypothesis_ok:
        notes.append("theorem inapplicable: lambda2 >= lambda1")
    elif is_zero:
        inequality_star_ok = alpha.as_float() <= degrees.lambda2 + settings.ALPHA_TOLERANCE
        if not inequality_star_ok:
            logger.warning(f"inequality (*) fails at {point}: alpha ~ {alpha.extrapolated}")

    automorphism = is_polynomial_automorphism(f, degrees)
    dichotomy_ok = None
    if automorphism and hhat is not None and classification.verdict != Verdict.UNDETERMINED:
        dichotomy_ok = (classification.verdict == Verdict.PERIODIC) == is_zero

    lam = float(degrees.lambda1)
    conjecture_applicable = is_zero and degrees.lambda1.compare_square(degrees.lambda2) > 0
    conjecture_ok = None
    if conjecture_applicable:
        conjecture_ok = alpha.as_float() + settings.ALPHA_TOLERANCE < lam
    elif is_zero and abs(alpha.as_float() - lam) <= settings.ALPHA_TOLERANCE:
        notes.append("hhat ~ 0 while alpha ~ lambda1 (lambda2 = lambda1^2)")
    if hhat is not None and not hhat.converged and not hhat.certified_zero:
        notes.append(f"hhat tail delta {hhat.tail_delta} above tolerance {tol}")

    return MainTheoremReport(
        hypothesis_ok=hypothesis_ok,
        hhat=hhat,
        alpha=alpha,
        inequality_star_ok=inequality_star_ok,
        functional_equation_residual=residual,
        classification=classification,
        automorphism=automorphism,
        automorphism_dichotomy_ok=dichotomy_ok,
        conjecture_applicable=conjecture_applicable,
        conjecture_ok=conjecture_ok,
        zero_threshold=threshold,
        notes=notes,
    )


class OrbitService:
    """Orbit computations sharing budgets and a timing sink."""

    def __init__(
        self,
        max_iter: Optional[int] = None,
        bit_budget: Optional[int] = None,
        tol: Optional[float] = None,
        timings: Optional[Dict[str, float]] = None,
    ):
        self.max_iter = settings.MAX_ITER if max_iter is None else max_iter
        self.bit_budget = bit_budget
        self.tol = tol
        self.timings = timings

    def orbit(self, f: PolynomialMap, point: RationalPoint) -> Orbit:
        with PerformanceMonitor("orbit", timings=self.timings):
            return orbit(f, point, self.max_iter, self.bit_budget)

    def canonical_height(self, f: PolynomialMap, point: RationalPoint, degrees: DynamicalDegrees) -> CanonicalHeightEstimate:
        with PerformanceMonitor("canonical_height", timings=self.timings):
            return canonical_height(f, point, degrees, self.tol, self.max_iter, self.bit_budget)

    def residual(self, f: PolynomialMap, point: RationalPoint, degrees: DynamicalDegrees) -> FunctionalEquationResidual:
        with PerformanceMonitor("functional_equation_residual", timings=self.timings):
            return functional_equation_residual(f, point, degrees, self.max_iter, self.bit_budget)

    def arithmetic_degree(self, f: PolynomialMap, point: RationalPoint) -> ArithmeticDegreeEstimate:
        with PerformanceMonitor("arithmetic_degree", timings=self.timings):
            return arithmetic_degree(f, point, self.max_iter, self.bit_budget)

    def classify(self, f: PolynomialMap, point: RationalPoint, height_bound: Optional[float] = None) -> OrbitClass:
        with PerformanceMonitor("classify_orbit", timings=self.timings):
            return classify_orbit(f, point, height_bound, self.max_iter, self.bit_budget)

    def main_theorem(
        self, f: PolynomialMap, point: RationalPoint, degrees: DynamicalDegrees, zero_threshold: Optional[float] = None
    ) -> MainTheoremReport:
        with PerformanceMonitor("check_main_theorem", timings=self.timings):
            return check_main_theorem(f, point, degrees, zero_threshold, self.max_iter, self.bit_budget, self.tol)
