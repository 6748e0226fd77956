"""Sufficient conditions for real (and positive) spectra, checked mechanically.

Each checker maps coefficients to a verdict together with the numbers that
decide it, so a report can be re-verified by hand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

from .errors import InvalidSpecError
from .potential import PotentialSpec

PROVED_POSITIVE_REAL = "ProvedPositiveReal"
PROVED_REAL_GIVEN_REAL = "ProvedRealGivenReal"
UNKNOWN = "Unknown"

STRICTLY_BELOW = "StrictlyBelow"
BOUNDARY = "Boundary"
ABOVE = "Above"
NOT_APPLICABLE = "NotApplicable"

EXIT_CODES = {PROVED_POSITIVE_REAL: 0, PROVED_REAL_GIVEN_REAL: 10, UNKNOWN: 20}


# --------------------------------------------------------------------------- sign-pattern witness


def witness_holds(a: Sequence[float], j: float) -> bool:
    return all((j - k) * ak >= 0 for k, ak in enumerate(a, start=1))


def check_main(spec: PotentialSpec) -> Optional[int]:
    """Smallest integer j with 1 <= j <= m/2 and (j - k) a_k >= 0 for every k, or None."""
    for j in range(1, spec.m // 2 + 1):
        if witness_holds(spec.a, j):
            return j
    return None


# --------------------------------------------------------------------------- cubic-type P


def _tan2(x: float) -> float:
    return math.tan(x) ** 2


def reality_bound_negative_alpha(m: int, alpha: float, gamma: float) -> float:
    """Largest beta allowed when alpha, gamma < 0: sqrt(alpha gamma) sqrt(3 - tan^2(pi/m))."""
    return math.sqrt(alpha * gamma) * math.sqrt(3.0 - _tan2(math.pi / m))


def positivity_bound_negative_alpha(m: int, alpha: float, gamma: float) -> float:
    """Bound on beta under which real eigenvalues are positive (alpha, gamma < 0)."""
    t = _tan2(math.pi / (m + 1))
    return 4.0 * math.sqrt(2.0) * math.sqrt(alpha * gamma) * math.sqrt(1.0 - t) / (3.0 - t)


def reality_bound_positive_alpha(m: int, alpha: float, gamma: float) -> float:
    """sqrt(alpha |gamma|) sqrt(tan^2(2 pi/m) - 3) for m = 5, 6; +inf for m = 4."""
    if m == 4:
        return math.inf
    # tan^2(pi/3) = 3 exactly; floating point leaves 4e-16
    t = 0.0 if m == 6 else _tan2(2.0 * math.pi / m) - 3.0
    return math.sqrt(alpha * abs(gamma)) * math.sqrt(t)


def positivity_bound_positive_alpha(m: int, alpha: float, gamma: float) -> float:
    """+inf for m = 4, 5; for m = 6 the bound at theta = 2 pi/7.

    At theta = 2 pi/7 both 1 - tan^2 and alpha gamma are negative, so the
    discriminant condition beta^2 <= 32 alpha gamma (1 - tan^2)/(3 - tan^2)^2
    has the positive right side written here with |1 - tan^2| and |gamma|.
    """
    if m in (4, 5):
        return math.inf
    t = _tan2(2.0 * math.pi / 7.0)
    return 4.0 * math.sqrt(2.0) * math.sqrt(alpha * abs(gamma)) * math.sqrt(abs(1.0 - t)) / (3.0 - t)


@dataclass(frozen=True)
class ExtensionResult:
    regime: str  # "negative-alpha", "positive-alpha" or NOT_APPLICABLE
    reality_bound: Optional[float]
    positivity_bound: Optional[float]
    verdict: str


def check_extensions(m: int, alpha: float, beta: float, gamma: float) -> ExtensionResult:
    """Verdict for P(z) = alpha z^3 + beta z^2 + gamma z from the two sign regimes that have bounds."""
    if m >= 4 and alpha < 0 and gamma < 0:
        rb = reality_bound_negative_alpha(m, alpha, gamma)
        pb = positivity_bound_negative_alpha(m, alpha, gamma)
        regime = "negative-alpha"
    elif m in (4, 5, 6) and alpha > 0 and gamma < 0:
        rb = reality_bound_positive_alpha(m, alpha, gamma)
        pb = positivity_bound_positive_alpha(m, alpha, gamma)
        regime = "positive-alpha"
    else:
        return ExtensionResult(NOT_APPLICABLE, None, None, UNKNOWN)
    if beta <= rb:
        verdict = PROVED_POSITIVE_REAL
    elif beta <= pb:
        verdict = PROVED_REAL_GIVEN_REAL
    else:
        verdict = UNKNOWN
    return ExtensionResult(regime, rb, pb, verdict)


# --------------------------------------------------------------------------- exactly solvable family


@dataclass(frozen=True)
class ExactlySolvableResult:
    verdict: str
    ground_state: Optional[float] = None
    ground_state_function: Optional[str] = None


def check_exactly_solvable(m: int, alpha: float) -> ExactlySolvableResult:
    """P(z) = alpha z^{m/2 - 1} for even m >= 4, compared against the threshold alpha = m/2."""
    if m < 4 or m % 2:
        return ExactlySolvableResult(NOT_APPLICABLE)
    half = m / 2
    if alpha < half:
        return ExactlySolvableResult(STRICTLY_BELOW)
    if alpha == half:
        p = m + 2
        return ExactlySolvableResult(BOUNDARY, 0.0, f"u0(z) = exp[(2/{p}) (iz)^({p}/2)]")
    return ExactlySolvableResult(ABOVE)


def ground_state_log_derivative(m: int, z: complex) -> complex:
    """v0'/v0 = z^{m/2} for the boundary zero mode written in the rotated variable."""
    return complex(z) ** (m / 2)


# --------------------------------------------------------------------------- quartic family


@dataclass(frozen=True)
class QesResult:
    spec: PotentialSpec
    witness: Optional[int]
    verdict: str


def qes_quartic(alpha: float, beta: float, J: float) -> QesResult:
    """m = 4 spec with a = (2 alpha, alpha^2 - 2 beta, -2 (alpha beta - J)); J may be any real."""
    spec = PotentialSpec(4, (2 * alpha, alpha * alpha - 2 * beta, -2 * (alpha * beta - J)))
    j = check_main(spec)
    cond = alpha * beta >= J and (alpha >= 0 or 2 * beta >= alpha * alpha)
    verdict = PROVED_POSITIVE_REAL if (cond or j is not None) else UNKNOWN
    return QesResult(spec, j, verdict)


# --------------------------------------------------------------------------- cubic sign bridge


def cubic_to_spec(alpha: float, beta: float, gamma: float) -> Tuple[PotentialSpec, float]:
    """Map -u'' + (alpha i z^3 + beta z^2 + gamma i z) u = E u onto the m = 3 normal form.

    With c = alpha^{-1/5} (real root) the substitution z = c x gives a = (beta c^4, -gamma c^3)
    and E = lam / c^2.  Returns (spec, c^{-2}), the factor converting lam back to E.
    """
    if alpha == 0 or not all(math.isfinite(x) for x in (alpha, beta, gamma)):
        raise InvalidSpecError("the cubic coefficient must be finite and nonzero")
    c = math.copysign(abs(alpha) ** -0.2, alpha)
    return PotentialSpec(3, (beta * c ** 4, -gamma * c ** 3)), 1.0 / (c * c)


# --------------------------------------------------------------------------- report


@dataclass(frozen=True)
class HypothesisReport:
    m: int
    a: tuple
    main_witness: Optional[int]
    extension_reality_bound: Optional[float]
    extension_positivity_bound: Optional[float]
    small_m_bounds: Optional[Tuple[float, float]]
    exactly_solvable: Optional[str]
    overall: str
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.overall]


def _only_nonzero(a: Sequence[float], keep: Sequence[int]) -> bool:
    return all(x == 0 for k, x in enumerate(a, start=1) if k not in keep)


def hypothesis_report(spec: PotentialSpec) -> HypothesisReport:
    """Run every applicable checker and combine them into one verdict."""
    m, a = spec.m, spec.a
    notes = []
    verdicts = []

    j = check_main(spec)
    if j is not None:
        verdicts.append(PROVED_POSITIVE_REAL)
        notes.append(f"sign pattern witness j = {j}")

    ext_r = ext_p = None
    small = None
    if m >= 4 and _only_nonzero(a, (m - 3, m - 2, m - 1)):
        alpha, beta, gamma = a[m - 4], a[m - 3], a[m - 2]
        ext = check_extensions(m, alpha, beta, gamma)
        if ext.regime == "negative-alpha":
            ext_r, ext_p = ext.reality_bound, ext.positivity_bound
        elif ext.regime == "positive-alpha":
            small = (ext.reality_bound, ext.positivity_bound)
        if ext.regime != NOT_APPLICABLE:
            verdicts.append(ext.verdict)
            notes.append(f"cubic-type P ({ext.regime}): beta = {beta!r}, verdict {ext.verdict}")

    es = None
    if m >= 4 and m % 2 == 0 and _only_nonzero(a, (m // 2 + 1,)):
        res = check_exactly_solvable(m, a[m // 2])
        es = res.verdict
        if es == STRICTLY_BELOW:
            verdicts.append(PROVED_POSITIVE_REAL)
        elif es == BOUNDARY:
            # every eigenvalue is real but the lowest is 0, which neither verdict class describes
            notes.append("boundary case: lowest eigenvalue is 0, the rest positive real")

    if PROVED_POSITIVE_REAL in verdicts:
        overall = PROVED_POSITIVE_REAL
    elif PROVED_REAL_GIVEN_REAL in verdicts:
        overall = PROVED_REAL_GIVEN_REAL
    else:
        overall = UNKNOWN
    return HypothesisReport(m, a, j, ext_r, ext_p, small, es, overall, tuple(notes))
