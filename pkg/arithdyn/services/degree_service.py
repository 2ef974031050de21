"""Degree growth of iterates: degree sequences, recurrences, lambda_1, the
growth exponent, the topological degree lambda_2 and preimage counts."""
import logging
from fractions import Fraction
from math import comb, lcm
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from flint import nmod_poly
from sympy import Matrix, Poly, QQ, Rational, Symbol, nextprime

from ..core.config import get_settings
from ..core.exceptions import (
    GrowthExponentUndefinedError,
    InconsistencyError,
    NonFiniteFiberError,
    PreconditionError,
    UndeterminedError,
)
from ..core.monitoring import PerformanceMonitor
from ..core.utils import decimal_string, format_rational, working_precision
from ..models.algebraic import AlgebraicReal
from ..models.dynamics import (
    AlgebraicPreimageGroup,
    DegreeConfidence,
    DegreeSequence,
    DynamicalDegrees,
    Lambda2Trial,
    LinearRecurrence,
    PreimageCount,
    RationalPreimage,
)
from ..models.heights import RationalPoint
from ..models.polynomials import BivariatePoly, PolynomialMap, UnivariatePoly
from ..utils.formatting import format_coefficients
from ..utils.real_roots import (
    certify_interval,
    from_rational,
    largest_root_interval,
    refine_interval,
    to_rational,
)
from .polynomial_service import (
    compose_maps,
    jacobian_determinant,
    map_degree,
    reduce_map_mod_p,
    require_dominant,
    resultant_eliminate,
    squarefree_part,
    to_sympy_poly,
)

logger = logging.getLogger(__name__)
settings = get_settings()

# independent random streams per procedure
_PRIME_STREAM = 1
_LAMBDA2_STREAM = 2
_PREIMAGE_STREAM = 3


def _seed(seed: Optional[int]) -> int:
    return settings.SEED if seed is None else seed


# ---------------------------------------------------------------------------
# degree sequences
# ---------------------------------------------------------------------------


def draw_prime(rng: np.random.Generator, avoid: Sequence[int] = (), bits: Optional[int] = None) -> int:
    """Random prime of ``bits`` bits dividing none of ``avoid``."""
    bits = bits or settings.PRIME_BITS
    while True:
        candidate = int(rng.integers(2 ** (bits - 1), 2 ** bits))
        p = int(nextprime(candidate))
        if all(a % p for a in avoid if a):
            return p


class _LineRestriction:
    """The iterates of f mod p restricted to a random line t -> (a t + b, c t + e)."""

    def __init__(self, f: PolynomialMap, p: int, rng: np.random.Generator):
        self.p = p
        reduced = reduce_map_mod_p(f, p)
        self.components = [sorted(component.terms.items()) for component in reduced]
        self.top = max(max(i, j) for terms in self.components for (i, j), _ in terms)
        a, b, c, e = (int(rng.integers(1, p)) for _ in range(4))
        self.u = nmod_poly([b, a], p)
        self.v = nmod_poly([e, c], p)
        self.degrees = [1]

    def _powers(self, base: nmod_poly) -> List[nmod_poly]:
        powers = [nmod_poly([1], self.p)]
        for _ in range(self.top):
            powers.append(powers[-1] * base)
        return powers

    def step(self) -> int:
        u_powers, v_powers = self._powers(self.u), self._powers(self.v)
        images = []
        for terms in self.components:
            acc = nmod_poly([], self.p)
            for (i, j), coefficient in terms:
                acc += coefficient * (u_powers[i] * v_powers[j])
            images.append(acc)
        self.u, self.v = images
        degree = max(self.u.degree(), self.v.degree())
        self.degrees.append(degree)
        return degree


def default_degree_bound(d: int) -> int:
    wanted = d ** (settings.DEGREE_MIN_ENTRIES - 1)
    return max(settings.DEGREE_BOUND, min(wanted, settings.DEGREE_BOUND_CEILING))


def degree_sequence(
    f: PolynomialMap,
    n: Optional[int] = None,
    degree_bound: Optional[int] = None,
    seed: Optional[int] = None,
) -> DegreeSequence:
    """deg f^0, ..., deg f^N computed mod p on random lines under two primes.

    Entry k+1 is computed while deg f^k * deg f stays within ``degree_bound``;
    a sequence cut short by the bound is flagged truncated. Without an explicit
    bound the default is raised to (deg f)^(DEGREE_MIN_ENTRIES - 1), capped at
    DEGREE_BOUND_CEILING, so maps of large degree still get enough entries for
    an order-two recurrence.
    """
    require_dominant(f)
    requested = settings.DEGREE_MAX_ITER if n is None else n
    if requested < 2:
        raise PreconditionError("degree sequences need N >= 2", {"N": requested})
    d = map_degree(f)
    bound = degree_bound or default_degree_bound(d)
    rng = np.random.default_rng([_seed(seed), _PRIME_STREAM])
    denominators = sorted({c.denominator for c in f.coefficients()})
    chosen: List[int] = []

    def fresh_restriction() -> _LineRestriction:
        p = draw_prime(rng, denominators + chosen)
        chosen.append(p)
        logger.debug(f"degree sequence: using prime {p}")
        return _LineRestriction(f, p, rng)

    restrictions = [fresh_restriction(), fresh_restriction()]
    values, primes_used, verified = [1], [[]], [True]
    retries = 0
    while len(values) - 1 < requested and values[-1] * d <= bound:
        degrees = [r.step() for r in restrictions]
        best = max(degrees)
        attained = [r.p for r, degree in zip(restrictions, degrees) if degree == best]
        while len(attained) < 2:
            if retries >= settings.PRIME_RETRIES:
                raise InconsistencyError(
                    "primes disagree on deg f^n after retries",
                    {"n": len(values), "degrees": {str(r.p): r.degrees[-1] for r in restrictions}},
                )
            retries += 1
            logger.warning(f"prime disagreement at n={len(values)}; drawing another prime")
            extra = fresh_restriction()
            for _ in range(len(values)):
                degree = extra.step()
            restrictions.append(extra)
            if degree > best:
                best, attained = degree, [extra.p]
            elif degree == best:
                attained.append(extra.p)
        values.append(best)
        primes_used.append(attained)
        verified.append(True)

    truncated = len(values) - 1 < requested
    if truncated:
        logger.info(f"degree sequence stopped at n={len(values) - 1} by the degree bound {bound}")
    return DegreeSequence(
        values=values,
        primes_used=primes_used,
        verified=verified,
        requested=requested,
        truncated=truncated,
        degree_bound=bound,
    )


def check_submultiplicativity(seq: DegreeSequence) -> List[Tuple[int, int]]:
    """Index pairs (n, m) with deg f^(n+m) > deg f^n * deg f^m."""
    values = seq.values
    return [
        (n, m)
        for n in range(1, len(values))
        for m in range(n, len(values) - n)
        if values[n + m] > values[n] * values[m]
    ]


# ---------------------------------------------------------------------------
# recurrences and lambda_1
# ---------------------------------------------------------------------------


def detect_recurrence(seq: DegreeSequence, max_order: Optional[int] = None) -> Optional[LinearRecurrence]:
    """Minimal-order linear recurrence fitted on entries 1..2k by a Hankel system.

    Index 0 is excluded from fitting. A fit is accepted only when it
    reproduces at least two held-out entries beyond the fitting window.
    """
    max_order = settings.RECURRENCE_MAX_ORDER if max_order is None else max_order
    values = seq.verified_values()
    if max_order < 1 or len(values) < 2 * max_order + 2:
        raise PreconditionError(
            "too few verified entries for recurrence detection",
            {"entries": len(values), "max_order": max_order},
        )
    for k in range(1, max_order + 1):
        held_out = len(values) - 1 - 2 * k
        if held_out < settings.RECURRENCE_HOLDOUT:
            break
        system = Matrix([[values[n - i] for i in range(1, k + 1)] for n in range(k + 1, 2 * k + 1)])
        if system.det() == 0:
            continue
        rhs = Matrix([values[n] for n in range(k + 1, 2 * k + 1)])
        solution = system.LUsolve(rhs)
        coefficients = [Fraction(int(c.p), int(c.q)) for c in solution]
        candidate = LinearRecurrence(
            order=k,
            coefficients=coefficients,
            characteristic_polynomial=[-c for c in reversed(coefficients)] + [Fraction(1)],
            held_out=held_out,
        )
        if all(candidate.predict(values, n) == values[n] for n in range(2 * k + 1, len(values))):
            logger.debug(f"recurrence of order {k} found: {[str(c) for c in coefficients]}")
            return candidate
    return None


def _primitive_coefficients(poly: Poly) -> List[int]:
    _, integral = poly.clear_denoms(convert=True)
    _, primitive = integral.primitive()
    coefficients = [int(c) for c in reversed(primitive.all_coeffs())]
    if coefficients[-1] < 0:
        coefficients = [-c for c in coefficients]
    return coefficients


def _decimal_and_error(poly: Poly, interval: Tuple[Fraction, Fraction]) -> Tuple[str, str]:
    precision = working_precision()
    a, b = refine_interval(poly, interval, Fraction(1, 2 ** (precision + 8)))
    with mpmath.workprec(precision):
        middle = (a + b) / 2
        value = mpmath.mpf(middle.numerator) / middle.denominator
        error = mpmath.mpf((b - a).numerator) / (2 * (b - a).denominator)
        return decimal_string(value), mpmath.nstr(error, 3) if error else "0"


def _relative_width(lower: Fraction) -> Fraction:
    scale = max(abs(lower), Fraction(1))
    return scale / 10 ** settings.LAMBDA1_RELATIVE_WIDTH_EXP


def largest_real_root(coefficients: Sequence) -> Optional[AlgebraicReal]:
    """Largest real root of a polynomial with rational coefficients (low first),
    with its minimal polynomial and a certified isolating interval."""
    poly = Poly(list(reversed([to_rational(c) for c in coefficients])), Symbol("x"), domain=QQ)
    if poly.degree() < 1:
        return None
    candidates = []
    for factor, _ in poly.factor_list()[1]:
        if factor.degree() == 1:
            c0, c1 = factor.all_coeffs()[1], factor.all_coeffs()[0]
            root = -from_rational(c0) / from_rational(c1)
            candidates.append((factor, (root, root)))
            continue
        interval = largest_root_interval(factor)
        if interval is not None:
            candidates.append((factor, interval))
    if not candidates:
        return None

    # distinct irreducible factors have distinct roots: refine until one interval dominates
    while True:
        candidates.sort(key=lambda item: item[1][1])
        best_factor, best = candidates[-1]
        overlapping = [item for item in candidates[:-1] if item[1][1] >= best[0]]
        if not overlapping:
            break
        candidates = [
            (factor, refine_interval(factor, interval, (interval[1] - interval[0]) / 4))
            for factor, interval in candidates
        ]

    minimal = _primitive_coefficients(best_factor)
    if best[0] == best[1]:
        return AlgebraicReal.from_rational(best[0])
    integral = Poly(list(reversed(minimal)), Symbol("x"))
    interval = refine_interval(integral, best, _relative_width(best[0]))
    if not certify_interval(integral, interval):
        raise InconsistencyError(
            "isolating interval failed its Sturm certificate",
            {"polynomial": format_coefficients(minimal), "interval": [format_rational(v) for v in interval]},
        )
    decimal, error = _decimal_and_error(integral, interval)
    return AlgebraicReal(
        minimal_polynomial=minimal,
        lower=interval[0],
        upper=interval[1],
        decimal=decimal,
        error_bound=error,
    )


def _uncertified_estimate(values: List[int]) -> AlgebraicReal:
    """(deg f^N)^(1/N) as the positive root of x^N - deg f^N."""
    n = len(values) - 1
    coefficients = [-values[n]] + [0] * (n - 1) + [1]
    poly = Poly(list(reversed(coefficients)), Symbol("x"))
    interval = largest_root_interval(poly)
    if interval[0] == interval[1]:
        estimate = AlgebraicReal.from_rational(interval[0])
        return estimate.model_copy(update={"certified": False})
    interval = refine_interval(poly, interval, _relative_width(interval[0]))
    decimal, error = _decimal_and_error(poly, interval)
    return AlgebraicReal(
        minimal_polynomial=coefficients,
        lower=interval[0],
        upper=interval[1],
        decimal=decimal,
        error_bound=error,
        certified=False,
    )


def _lambda1_details(
    f: PolynomialMap, degree_bound: Optional[int] = None, seed: Optional[int] = None
) -> Tuple[AlgebraicReal, DegreeSequence, Optional[LinearRecurrence]]:
    seq = degree_sequence(f, degree_bound=degree_bound, seed=seed)
    values = seq.verified_values()
    max_order = min(settings.RECURRENCE_MAX_ORDER, (len(values) - 2) // 2)
    recurrence = detect_recurrence(seq, max_order) if max_order >= 1 else None
    if recurrence is not None:
        root = largest_real_root(recurrence.characteristic_polynomial)
        if root is not None and root.compare(1) >= 0:
            logger.info(f"lambda1 = root of {root.polynomial} ~ {root.decimal}")
            return root, seq, recurrence
    logger.warning("no degree recurrence within budget; lambda1 reported as an uncertified estimate")
    return _uncertified_estimate(values), seq, recurrence


def lambda1(f: PolynomialMap, degree_bound: Optional[int] = None, seed: Optional[int] = None) -> AlgebraicReal:
    """First dynamical degree lim (deg f^n)^(1/n)."""
    return _lambda1_details(f, degree_bound, seed)[0]


def growth_ratios(seq: DegreeSequence, lam: AlgebraicReal) -> List[mpmath.mpf]:
    """deg f^n / lambda_1^n at the last four verified indices."""
    values = seq.verified_values()
    with mpmath.workprec(working_precision()):
        base = lam.mp_value()
        return [mpmath.mpf(values[n]) / base ** n for n in range(len(values) - 4, len(values))]


def _root_multiplicity(recurrence: LinearRecurrence, lam: AlgebraicReal) -> int:
    """Multiplicity of lambda_1's minimal polynomial in the characteristic polynomial."""
    x = Symbol("x")
    characteristic = Poly(list(reversed([to_rational(c) for c in recurrence.characteristic_polynomial])), x, domain=QQ)
    minimal = Poly(list(reversed(lam.minimal_polynomial)), x, domain=QQ)
    multiplicity = 0
    while characteristic.degree() >= minimal.degree():
        quotient, remainder = characteristic.div(minimal)
        if not remainder.is_zero:
            break
        characteristic, multiplicity = quotient, multiplicity + 1
    return multiplicity


def growth_exponent(
    seq: DegreeSequence, lam: AlgebraicReal, recurrence: Optional[LinearRecurrence] = None
) -> int:
    """l in deg f^n ~ n^l lambda_1^n, from the ratios deg f^n / lambda_1^n.

    When the ratios neither settle nor grow linearly (several roots of the
    same modulus make them oscillate) a certified recurrence decides: l is
    the multiplicity of lambda_1 as a characteristic root, minus one.
    """
    if lam.compare(1) <= 0:
        raise GrowthExponentUndefinedError("growth exponent needs lambda1 > 1", {"lambda1": lam.decimal})
    if len(seq.verified_values()) < 6:
        raise PreconditionError("growth exponent needs at least 6 verified entries")
    ratios = growth_ratios(seq, lam)
    with mpmath.workprec(working_precision()):
        first = [b - a for a, b in zip(ratios, ratios[1:])]
        second = [b - a for a, b in zip(first, first[1:])]
        scale = settings.GROWTH_TOLERANCE * ratios[-1]
        if all(abs(d) < scale for d in first):
            return 0
        if all(abs(d) < scale for d in second) and all(abs(d) > scale for d in first):
            return 1
    if recurrence is not None and lam.certified:
        multiplicity = _root_multiplicity(recurrence, lam)
        if multiplicity in (1, 2):
            logger.info(f"growth exponent {multiplicity - 1} from the characteristic root multiplicity")
            return multiplicity - 1
    raise UndeterminedError(
        "growth type undetermined", {"ratios": [mpmath.nstr(r, 12) for r in ratios]}
    )


# ---------------------------------------------------------------------------
# topological degree and preimages
# ---------------------------------------------------------------------------


def shear_map(f: PolynomialMap, t: int) -> PolynomialMap:
    """f o (x + t y, y)."""
    x, y = BivariatePoly.variable("x"), BivariatePoly.variable("y")
    return compose_maps(f, PolynomialMap(x + y * t, y))


def _fiber_equation(component: BivariatePoly, value: Fraction) -> BivariatePoly:
    """component - value, scaled to integer coefficients."""
    scale = lcm(component.denominator_lcm(), Fraction(value).denominator)
    return (component - Fraction(value)) * scale


def _depends_on_y(poly: BivariatePoly) -> bool:
    degree = poly.degree_in("y")
    return isinstance(degree, int) and degree >= 1


def _has_constant_leading_coefficient(poly: BivariatePoly) -> bool:
    top = poly.degree_in("y")
    if not isinstance(top, int) or top < 1:
        return False
    return all(i == 0 for (i, j) in poly.terms if j == top)


def _fiber_system(f: PolynomialMap, t: int, target: RationalPoint):
    """Sheared fiber equations, ordered so the first is monic-like in y; None if neither is."""
    g = shear_map(f, t)
    F1, F2 = _fiber_equation(g.f1, target.x1), _fiber_equation(g.f2, target.x2)
    if not (_depends_on_y(F1) and _depends_on_y(F2)):
        return None
    if _has_constant_leading_coefficient(F1):
        return F1, F2
    if _has_constant_leading_coefficient(F2):
        return F2, F1
    return None


def _unique_lift(F1: BivariatePoly, F2: BivariatePoly, roots: UnivariatePoly) -> bool:
    """True when every root of ``roots`` carries exactly one common root y.

    Uses the degree-one subresultant s1(x) y + s0(x): its leading coefficient
    must not vanish at any root. s1 also vanishes under a non-reduced fiber
    point, which makes the trial non-generic; ``count_preimages`` lifts
    through ``_lift_over_factor`` instead.
    """
    P, Q = to_sympy_poly(F1, "y"), to_sympy_poly(F2, "y")
    y, x = P.gens
    for element in reversed(P.subresultants(Q)):
        if element.degree(y) == 1:
            s1 = Poly.from_dict(
                {(i,): c for (j, i), c in element.terms() if j == 1}, x, domain=element.get_domain()
            )
            common = roots.poly.gcd(Poly(s1.as_expr(), Symbol(roots.variable), domain=QQ))
            return common.degree() == 0
    return False


def _random_target(rng: np.random.Generator) -> RationalPoint:
    coordinates = []
    for _ in range(2):
        numerator = int(rng.integers(settings.TARGET_MIN, settings.TARGET_MAX + 1))
        denominator = int(rng.integers(settings.TARGET_MIN, settings.TARGET_MAX + 1))
        sign = 1 if rng.integers(0, 2) else -1
        coordinates.append(Fraction(sign * numerator, denominator))
    return RationalPoint.of(*coordinates)


def _random_shear(rng: np.random.Generator) -> int:
    return int(rng.integers(settings.SHEAR_MIN, settings.SHEAR_MAX + 1))


def fiber_trial(f: PolynomialMap, t: int, target: RationalPoint) -> Lambda2Trial:
    """Count distinct fiber points over ``target`` after the shear t."""
    described = [str(format_rational(target.x1)), str(format_rational(target.x2))]
    system = _fiber_system(f, t, target)
    if system is None:
        return Lambda2Trial(shear=t, target=described, generic=False, reason="no equation monic in y")
    F1, F2 = system
    eliminant = resultant_eliminate(F1, F2, "y")
    if eliminant.is_zero:
        return Lambda2Trial(shear=t, target=described, generic=False, reason="eliminant vanishes")
    roots = squarefree_part(eliminant)
    if roots.degree and not _unique_lift(F1, F2, roots):
        return Lambda2Trial(shear=t, target=described, generic=False, reason="shear does not separate fiber")
    return Lambda2Trial(shear=t, target=described, generic=True, count=int(roots.degree))


def _lambda2_details(
    f: PolynomialMap, trials: Optional[int] = None, seed: Optional[int] = None
) -> Tuple[int, List[Lambda2Trial]]:
    require_dominant(f)
    trials = trials or settings.LAMBDA2_TRIALS
    rng = np.random.default_rng([_seed(seed), _LAMBDA2_STREAM])
    log: List[Lambda2Trial] = []
    seen: List[int] = []
    for _ in range(trials):
        trial = fiber_trial(f, _random_shear(rng), _random_target(rng))
        log.append(trial)
        if not trial.generic:
            logger.warning(f"non-generic lambda2 trial (shear {trial.shear}): {trial.reason}")
            continue
        logger.debug(f"lambda2 trial: shear {trial.shear}, {trial.count} fiber points")
        if trial.count in seen:
            logger.info(f"lambda2 = {trial.count}")
            return trial.count, log
        seen.append(trial.count)
    raise UndeterminedError(
        f"no fiber count repeated within {trials} trials",
        {"observed": [t.count for t in log], "trials": trials},
    )


def lambda2(f: PolynomialMap, trials: Optional[int] = None, seed: Optional[int] = None) -> int:
    """Topological degree: the number of preimages of a general point."""
    return _lambda2_details(f, trials, seed)[0]


def fiber_count_mod_p(f: PolynomialMap, target: Tuple[int, int], p: int, shear: int) -> int:
    """Distinct fiber points over the algebraic closure of GF(p)."""
    g = reduce_map_mod_p(shear_map(f, shear), p)
    F1, F2 = g.f1 - target[0], g.f2 - target[1]
    if not (_depends_on_y(F1) and _depends_on_y(F2)):
        raise PreconditionError("fiber equation has no y mod p", {"p": p, "shear": shear})
    eliminant = to_sympy_poly(F1, "y").resultant(to_sympy_poly(F2, "y"))
    if eliminant.is_zero:
        raise NonFiniteFiberError("eliminant vanishes mod p", {"p": p})
    return int(eliminant.sqf_part().degree()) if eliminant.degree() > 0 else 0


def _coefficients_in_y(F: BivariatePoly, modulus: Poly) -> List[Poly]:
    """F as a list of coefficients of y^0, y^1, ... reduced modulo ``modulus`` in x."""
    collected: Dict[int, Dict[Tuple[int], object]] = {}
    for (i, j), c in F.terms.items():
        collected.setdefault(j, {})[(i,)] = to_rational(c)
    zero = Poly(0, modulus.gen, domain=QQ)
    coefficients = [zero] * (max(collected) + 1 if collected else 0)
    for j, rep in collected.items():
        coefficients[j] = Poly.from_dict(rep, modulus.gen, domain=QQ).rem(modulus)
    return _trim(coefficients)


def _trim(coefficients: List[Poly]) -> List[Poly]:
    while coefficients and coefficients[-1].is_zero:
        coefficients = coefficients[:-1]
    return coefficients


def _gcd_over_residue_field(a: List[Poly], b: List[Poly], modulus: Poly) -> List[Poly]:
    """Monic gcd in y of two polynomials over Q[x]/(modulus), modulus irreducible."""
    while b:
        inverse = b[-1].invert(modulus)
        while len(a) >= len(b):
            quotient = (a[-1] * inverse).rem(modulus)
            shift = len(a) - len(b)
            a = _trim([
                (c - quotient * b[i - shift]).rem(modulus) if i >= shift else c for i, c in enumerate(a)
            ])
        a, b = b, a
    if not a:
        return a
    inverse = a[-1].invert(modulus)
    return [(c * inverse).rem(modulus) for c in a]


def _lift_over_factor(F1: BivariatePoly, F2: BivariatePoly, factor: Poly) -> Optional[Poly]:
    """The common y-coordinate over the roots of the irreducible ``factor``.

    Returns y0 as a polynomial in x modulo ``factor`` when gcd(F1, F2) over
    Q[x]/(factor) is (y - y0)^k, that is when a single fiber point (possibly
    non-reduced) lies over each root; None otherwise.
    """
    common = _gcd_over_residue_field(_coefficients_in_y(F1, factor), _coefficients_in_y(F2, factor), factor)
    k = len(common) - 1
    if k < 1:
        return None
    y0 = common[k - 1].mul_ground(Rational(-1, k)).rem(factor)
    for j in range(2, k + 1):
        expected = ((-y0) ** j).mul_ground(comb(k, j)).rem(factor)
        if not (common[k - j] - expected).rem(factor).is_zero:
            return None
    return y0


def count_preimages(f: PolynomialMap, q: RationalPoint, seed: Optional[int] = None) -> PreimageCount:
    """Preimages of q: rational ones exactly with multiplicities, the rest
    grouped by the minimal polynomial of the sheared coordinate x1 - t*x2."""
    require_dominant(f)
    rng = np.random.default_rng([_seed(seed), _PREIMAGE_STREAM])
    vanishing = 0
    for _ in range(settings.LAMBDA2_TRIALS + 2):
        t = _random_shear(rng)
        system = _fiber_system(f, t, q)
        if system is None:
            continue
        F1, F2 = system
        eliminant = resultant_eliminate(F1, F2, "y")
        if eliminant.is_zero:
            vanishing += 1
            if vanishing >= 2:
                raise NonFiniteFiberError("fiber is positive dimensional", {"target": q.coordinates()})
            continue
        rational: List[RationalPreimage] = []
        algebraic: List[AlgebraicPreimageGroup] = []
        separated = True
        for factor, multiplicity in eliminant.poly.factor_list()[1]:
            lift = _lift_over_factor(F1, F2, factor)
            if lift is None:
                separated = False
                break
            if factor.degree() == 1:
                c1, c0 = factor.all_coeffs()
                x0 = -from_rational(c0) / from_rational(c1)
                y0 = from_rational(lift.eval(to_rational(x0)))
                rational.append(RationalPreimage(point=RationalPoint.of(x0 + t * y0, y0), multiplicity=multiplicity))
            else:
                minimal = _primitive_coefficients(factor)
                algebraic.append(
                    AlgebraicPreimageGroup(
                        minimal_polynomial=minimal,
                        polynomial=format_coefficients(minimal, "s"),
                        shear=t,
                        points=len(minimal) - 1,
                        multiplicity=multiplicity,
                    )
                )
        if separated:
            rational.sort(key=lambda item: (item.point.x1, item.point.x2))
            return PreimageCount(target=q, shear=t, rational=rational, algebraic=algebraic)
        logger.debug(f"shear {t} does not separate the fiber over {q}; retrying")
    raise UndeterminedError("no separating shear found", {"target": q.coordinates()})


# ---------------------------------------------------------------------------
# aggregation
# ---------------------------------------------------------------------------


def check_bezout(degrees: DynamicalDegrees) -> bool:
    """lambda_2 <= lambda_1^2 by exact comparison."""
    return degrees.lambda1.compare_square(degrees.lambda2) >= 0


def is_polynomial_automorphism(f: PolynomialMap, degrees: DynamicalDegrees) -> bool:
    """Nonzero constant Jacobian and generic fiber of one point."""
    jacobian = jacobian_determinant(f)
    return not jacobian.is_zero and jacobian.is_constant and degrees.lambda2 == 1


def analyze_degrees(
    f: PolynomialMap,
    degree_bound: Optional[int] = None,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
) -> DynamicalDegrees:
    """lambda_1, lambda_2 and l together with the small-topological-degree flag."""
    require_dominant(f)
    seed = _seed(seed)
    lam, seq, recurrence = _lambda1_details(f, degree_bound, seed)
    lam2, trial_log = _lambda2_details(f, trials, seed)
    notes = []
    ratios: List[str] = []
    exponent = None
    if lam.compare(1) > 0:
        exponent = growth_exponent(seq, lam, recurrence)
        ratios = [mpmath.nstr(r, 15) for r in growth_ratios(seq, lam)]
    else:
        notes.append("lambda1 = 1: growth exponent undefined")
    if not lam.certified:
        notes.append("lambda1 is an uncertified estimate (deg f^N)^(1/N)")
    bezout = lam.compare_square(lam2) >= 0
    if not bezout:
        logger.warning(f"Bezout bound violated: lambda2={lam2} > lambda1^2 ~ {lam.decimal}^2")
        notes.append("lambda2 exceeds lambda1^2")
    return DynamicalDegrees(
        lambda1=lam,
        lambda2=lam2,
        growth_exponent=exponent,
        small_topological_degree=lam.compare(lam2) > 0,
        bezout_ok=bezout,
        confidence=DegreeConfidence(
            seed=seed,
            degree_sequence=seq,
            recurrence=recurrence,
            lambda1_certified=lam.certified,
            lambda2_trials=trial_log,
            growth_ratios=ratios,
            growth_tolerance=settings.GROWTH_TOLERANCE,
            notes=notes,
        ),
    )


class DegreeService:
    """Degree dynamics with per-operation timing for reports."""

    def __init__(
        self,
        seed: Optional[int] = None,
        trials: Optional[int] = None,
        degree_bound: Optional[int] = None,
        timings: Optional[Dict[str, float]] = None,
    ):
        self.seed = _seed(seed)
        self.trials = trials
        self.degree_bound = degree_bound
        self.timings = timings

    def degree_sequence(self, f: PolynomialMap, n: Optional[int] = None) -> DegreeSequence:
        with PerformanceMonitor("degree_sequence", timings=self.timings):
            return degree_sequence(f, n, self.degree_bound, self.seed)

    def analyze(self, f: PolynomialMap) -> DynamicalDegrees:
        with PerformanceMonitor("analyze_degrees", timings=self.timings):
            return analyze_degrees(f, self.degree_bound, self.trials, self.seed)

    def preimages(self, f: PolynomialMap, q: RationalPoint) -> PreimageCount:
        with PerformanceMonitor("count_preimages", timings=self.timings):
            return count_preimages(f, q, self.seed)
