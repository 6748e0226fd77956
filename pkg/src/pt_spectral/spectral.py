"""Spectral determinant, Stokes multipliers, eigenvalue search and parameter sweeps.

The eigenvalues are the zeros in lambda of the Stokes multiplier
C(a, lambda) = W_{-1,1} / W_{0,1}, where W_{j,k} is the Wronskian of the
rotated solutions f_j, f_k.  Because W_{0,1} never vanishes, the search works
with W_{-1,1} itself, evaluated at a real matching point between the turning
points (the origin for m = 2).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, linear_sum_assignment

from . import rootfind
from .errors import DegeneracyError, EvaluationError, InvalidSpecError, PoleError
from .integrator import MatchData, RaySpec, match_data, matching_point, origin_data, shoot
from .potential import (PotentialSpec, RotatedSpec, asymptotic_eigenvalue, omega, qpoly, r_and_nu,
                        rotate_frame)

REALITY_TOL = 1e-6
RESIDUAL_TOL = 1e-8

REAL = "Real"
PAIR = "ComplexPairMember"


def is_real(lam: complex, tol: float = REALITY_TOL) -> bool:
    return abs(lam.imag) < tol * max(1.0, abs(lam))


def _norm(v: complex, d: complex, s: float) -> float:
    return math.sqrt(s * abs(v) ** 2 + abs(d) ** 2 / s)


@dataclass(frozen=True)
class Evaluation:
    """f_{-1} and f_1 at the common matching point for one lambda.

    ``scale`` is the local wavenumber max(1, |Q(z*)|^{1/2}) used to balance
    values against derivatives.
    """

    lam: complex
    zstar: complex
    scale: float
    minus: MatchData
    plus: MatchData

    @property
    def radius(self) -> float:
        return max(self.minus.radius, self.plus.radius)

    def wronskian_stored(self) -> complex:
        a, b = self.minus, self.plus
        return a.value * b.derivative - a.derivative * b.value

    def log_wronskian(self) -> complex:
        """log W_{-1,1} (principal log of the stored part plus the accumulated scales)."""
        return cmath.log(self.wronskian_stored()) + self.minus.log_scale + self.plus.log_scale

    def determinant(self) -> complex:
        """W_{-1,1} divided by a positive scale, so |D| <= 1 and arg D = arg W_{-1,1}."""
        a, b, s = self.minus, self.plus, self.scale
        phase = cmath.exp(1j * (a.log_scale.imag + b.log_scale.imag))
        return self.wronskian_stored() * phase / (_norm(a.value, a.derivative, s) * _norm(b.value, b.derivative, s))

    def mismatch(self) -> complex:
        """Difference of the log-derivatives of f_{-1} and f_1 at z*, in units of the local wavenumber."""
        a, b = self.minus, self.plus
        return (a.derivative / a.value - b.derivative / b.value) / self.scale

    def values_clear_of_zero(self, threshold: float = 1e-3) -> bool:
        s = self.scale
        return all(math.sqrt(s) * abs(o.value) > threshold * _norm(o.value, o.derivative, s)
                   for o in (self.minus, self.plus))


def evaluate(spec: PotentialSpec, lam: complex, ray: RaySpec = RaySpec(),
             zstar: Optional[float] = None) -> Evaluation:
    """Shoot f_{-1} and f_1 to the matching point (chosen from lambda unless given)."""
    lam = complex(lam)
    if zstar is None:
        zstar = matching_point(spec, lam)
    q = complex(np.polyval(qpoly(spec, lam), zstar))
    scale = max(1.0, math.sqrt(abs(q)))
    return Evaluation(lam, complex(zstar), scale, match_data(spec, lam, -1, zstar, ray),
                      match_data(spec, lam, 1, zstar, ray))


def spectral_determinant(spec: PotentialSpec, lam: complex, ray: RaySpec = RaySpec()) -> complex:
    """Scale-normalized W_{-1,1}(lambda): vanishes exactly at eigenvalues, |value| <= 1."""
    return evaluate(spec, lam, ray).determinant()


def eigencondition(spec: PotentialSpec, lam: complex, ray: RaySpec = RaySpec()) -> complex:
    """Log-derivative mismatch M(lambda), or the normalized Wronskian when f_{+-1}(0) is near zero."""
    ev = evaluate(spec, lam, ray)
    if ev.values_clear_of_zero():
        return ev.mismatch()
    d = ev.determinant()
    if d == 0 and not ev.values_clear_of_zero(1e-14):
        raise EvaluationError(f"both eigencondition forms degenerate at lambda = {lam}")
    return d


# --------------------------------------------------------------------------- Stokes


@dataclass(frozen=True)
class StokesData:
    C: complex
    Ctilde: complex
    phi0: float
    log_scale_info: Dict[str, complex] = field(default_factory=dict)


def stokes_multipliers(spec: PotentialSpec, lam: complex, ray: RaySpec = RaySpec()) -> StokesData:
    """C = W_{-1,1}/W_{0,1} and C~ = -W_{-1,0}/W_{0,1} from shooting f_{-1}, f_0, f_1."""
    lam = complex(lam)
    f = {k: origin_data(spec, lam, k, ray) for k in (-1, 0, 1)}

    def ws(j, k):
        return f[j].value * f[k].derivative - f[j].derivative * f[k].value

    def size(k):
        return abs(f[k].value) + abs(f[k].derivative)

    w01 = ws(0, 1)
    if abs(w01) < 1e3 * ray.rel_tol * size(0) * size(1):
        raise DegeneracyError(f"W_(0,1) indistinguishable from zero at lambda = {lam}")
    L = {k: f[k].log_scale for k in f}
    C = ws(-1, 1) / w01 * cmath.exp(L[-1] - L[0])
    Ct = -ws(-1, 0) / w01 * cmath.exp(L[-1] - L[1])
    info = {f"log_scale_f{k}": L[k] for k in (-1, 0, 1)}
    info["log_W01"] = cmath.log(w01) + L[0] + L[1]
    return StokesData(C=C, Ctilde=Ct, phi0=cmath.phase(Ct), log_scale_info=info)


def stokes_multiplier_formula(spec: PotentialSpec, lam: complex = 0.0) -> complex:
    """Closed form C~ = -omega^{1 - 2 nu~(G^{-1}(a))}."""
    _, nu = r_and_nu(rotate_frame(spec, -1), omega(spec.m) ** spec.m * lam)
    return -cmath.exp(2j * math.pi * (1 - 2 * nu) / (spec.m + 2))


# --------------------------------------------------------------------------- eigenvalues


@dataclass(frozen=True)
class Eigenvalue:
    lam: complex
    index: int
    residual: float
    classification: str
    radius_used: float

    @property
    def is_real(self) -> bool:
        return self.classification == REAL


class EigenvalueList(list):
    """Eigenvalues sorted by real part; ``complete`` is False for a partial result."""

    def __init__(self, items=(), complete=True, window=None, winding=None, diagnostics=None):
        super().__init__(items)
        self.complete = complete
        self.window = window
        self.winding = winding
        self.diagnostics = diagnostics or []

    @property
    def values(self) -> np.ndarray:
        return np.array([e.lam for e in self], dtype=complex)


def coefficient_scale(a: Sequence[float]) -> float:
    """Length scale max_k |a_k|^{1/k} below which the lower-order terms of P dominate."""
    return max([abs(x) ** (1.0 / k) for k, x in enumerate(a, start=1)] + [0.0])


def default_window(spec: PotentialSpec, count: int) -> rootfind.Rect:
    """Rectangle [lo, hi] x [-H, H] expected to hold the lowest ``count`` eigenvalues."""
    m = spec.m
    s = coefficient_scale(spec.a)
    shift = sum(abs(x) * s ** (m - k) for k, x in enumerate(spec.a, start=1))
    if m == 2:
        top = 2.0 * (count + 2) + 1.0
    else:
        top = asymptotic_eigenvalue(m, count + 2)
    lo = -1.0 - shift
    hi = 1.2 * top + shift
    H = 0.5 * (hi - lo)
    return rootfind.Rect(lo, hi, -H, H)


class _Problem:
    """Cached evaluations of one spectral problem along with the functions built from them."""

    def __init__(self, spec: PotentialSpec, ray: RaySpec):
        self.spec = spec
        self.ray = ray
        self._cache: Dict[complex, Evaluation] = {}

    def ev(self, lam: complex, zstar: Optional[float] = None) -> Evaluation:
        key = (complex(lam), zstar)
        hit = self._cache.get(key)
        if hit is None:
            hit = evaluate(self.spec, key[0], self.ray, zstar)
            self._cache[key] = hit
        return hit

    def det(self, lam: complex) -> complex:
        return self.ev(lam).determinant()

    def real_part_function(self, x: float) -> float:
        # W_{-1,1} is purely imaginary on the real axis when a is real
        return self.det(complex(x, 0.0)).imag

    @property
    def calls(self) -> int:
        return len(self._cache)


def _refine_real(prob: _Problem, x0: float, x1: float) -> float:
    if x0 == x1:
        return x0
    return brentq(prob.real_part_function, x0, x1, xtol=1e-14 * max(1.0, abs(x0)), rtol=1e-15, maxiter=200)


def _refine_complex(prob: _Problem, z0: complex, step: float, rel_tol: float = 1e-10):
    # the matching point is frozen so the iterated function is analytic in lambda
    start = prob.ev(z0)
    zstar = start.zstar.real

    def mismatch(z):
        return prob.ev(z, zstar).mismatch()

    def det(z):
        return prob.ev(z, zstar).determinant()

    use_mismatch = start.values_clear_of_zero(0.05)
    res = rootfind.secant(mismatch if use_mismatch else det, z0, z0 + step, rel_tol=rel_tol)
    if not res.converged and use_mismatch:
        res = rootfind.secant(det, z0, z0 + step, rel_tol=rel_tol)
    return res


def _scan_real(prob: _Problem, lo: float, hi: float, n: int):
    xs = np.linspace(lo, hi, n + 1)
    ys = [prob.real_part_function(x) for x in xs]
    roots = [_refine_real(prob, a, b) for a, b in rootfind.sign_changes(xs, ys)]
    return xs, np.array(ys), roots


def _safe_edge(xs, roots, x_target, h):
    """Sample point near x_target that keeps the contour away from real zeros."""
    cands = [x for x in xs if abs(x - x_target) <= 5 * h] or [x_target]
    if not roots:
        return min(cands, key=lambda x: abs(x - x_target))
    return max(cands, key=lambda x: (min(abs(x - r) for r in roots), -abs(x - x_target)))


def _count_zeros(det, box: rootfind.Rect, slack: float, diagnostics: List[str], tries: int = 4):
    """Winding number over box, nudging the right and horizontal edges if the contour grazes a zero.

    The right edge moves by at most ``slack``; the left edge was already placed between real zeros.
    """
    base = box
    # a few hundred base samples per edge; the segment test refines where the phase turns fast
    seg = max(1.0, (base.width + base.height) / 500.0)
    for i in range(tries):
        try:
            return box, rootfind.winding_number(det, box, seg_len=seg)
        except EvaluationError:
            if i == tries - 1:
                raise
            dx = slack * (i + 1) / tries * (-1) ** i
            dy = 0.017 * (i + 1) * base.height
            box = rootfind.Rect(base.x0, base.x1 + dx, base.y0 - dy, base.y1 + dy)
            diagnostics.append(f"contour moved to {box} to avoid a zero")


def _order_key(z: complex):
    # conjugate partners agree in Re to rounding; list the upper one first
    return (round(z.real, 8), -z.imag)


def _box_target(rect: rootfind.Rect) -> float:
    return max(0.25, 0.02 * max(abs(rect.x0), abs(rect.x1), abs(rect.y0), abs(rect.y1)))


def _locate_single(det, refine, b: rootfind.Box, diagnostics: List[str], depth: int = 0) -> Optional[complex]:
    """Refine the one unknown zero of a box, splitting the box further when the iteration escapes.

    ``det`` only needs the right phase (it drives the counting); ``refine(z0, step)``
    returns a SecantResult.
    """
    if b.count - len(b.known) != 1:
        diagnostics.append(f"unresolved cluster of {b.count - len(b.known)} zeros in {b.rect}")
        return None
    r = b.rect
    res = refine(r.center, 0.1 * min(r.width, r.height))
    if res.converged and r.contains(res.root, 0.1 * max(r.width, r.height)):
        return res.root
    if depth >= 6:
        diagnostics.append(f"secant failed to converge from {r.center}")
        return None
    size = 0.5 * max(r.width, r.height)
    for sub in rootfind.isolate(det, r, known=b.known, count=b.count,
                                min_size=1e-6 * max(1.0, abs(r.center)), max_size=size):
        return _locate_single(det, refine, sub, diagnostics, depth + 1)
    return None


def _zeros_in_box(det, refine, box: rootfind.Rect, total: int, known: List[complex],
                  diagnostics: List[str]) -> List[complex]:
    """Known zeros plus every further zero that box isolation and refinement can pin down."""
    found = list(known)
    if total > len(found):
        boxes = rootfind.isolate(det, box, known=found, count=total,
                                 min_size=1e-6 * max(1.0, abs(box.center)), max_size=_box_target(box))
        for b in boxes:
            root = _locate_single(det, refine, b, diagnostics)
            if root is not None:
                found.append(root)
        found = rootfind.dedupe(found, 1e-8)
    return found


def _make_eigen(prob: _Problem, lam: complex, index: int) -> Eigenvalue:
    ev = prob.ev(lam)
    cls = REAL if is_real(lam) else PAIR
    return Eigenvalue(lam=lam, index=index, residual=abs(ev.determinant()), classification=cls,
                      radius_used=ev.radius)


def find_eigenvalues(spec: PotentialSpec, count: int, window: Optional[rootfind.Rect] = None,
                     ray: RaySpec = RaySpec(), hints: Sequence[complex] = (),
                     max_expansions: int = 4, samples_per_root: int = 24) -> EigenvalueList:
    """The ``count`` eigenvalues of smallest real part.

    Real eigenvalues come from sign changes of W_{-1,1}/i along the real axis; the
    argument principle over the window then certifies how many zeros exist in
    total, and any surplus is isolated by box bisection and refined by secant.
    ``hints`` (e.g. roots from a neighbouring parameter value) are refined first.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if not isinstance(spec, PotentialSpec):
        raise InvalidSpecError("find_eigenvalues needs a PotentialSpec with real coefficients")
    prob = _Problem(spec, ray)
    rect = window or default_window(spec, count)
    diagnostics: List[str] = []

    for attempt in range(max_expansions + 1):
        n = max(200, samples_per_root * (count + 2))
        h = rect.width / n
        xs, _, real_roots = _scan_real(prob, rect.x0, rect.x1 + 5 * h, n + 5)
        right = rect.x1
        inside = [r for r in real_roots if r < rect.x1]
        if len(inside) >= count:
            # enough real roots: the box only has to reach past the count-th one
            last = inside[count - 1]
            if len(inside) > count:
                gap = inside[count] - last
            elif count > 1:
                gap = last - inside[count - 2]
            else:
                gap = max(1.0, abs(last))
            right = min(rect.x1, last + 0.5 * gap)
            x1, slack = right, 0.4 * (right - last)
        else:
            x1, slack = _safe_edge(xs, real_roots, right, h), 0.5 * h
        x0 = _safe_edge(xs, real_roots, rect.x0, h)
        box, total = _count_zeros(prob.det, rootfind.Rect(x0, x1, rect.y0, rect.y1), slack, diagnostics)
        real_in = [r for r in real_roots if box.x0 < r < box.x1]
        found: List[complex] = [complex(r) for r in real_in]

        if total > len(found):
            for z in hints:
                if abs(z.imag) > REALITY_TOL * max(1.0, abs(z)) and box.contains(z):
                    res = _refine_complex(prob, complex(z), 1e-3 * max(1.0, abs(z)))
                    if res.converged and box.contains(res.root):
                        found.append(res.root)
            found = rootfind.dedupe(found, 1e-8)
        found = _zeros_in_box(prob.det, lambda z, h: _refine_complex(prob, z, h), box, total, found, diagnostics)
        if total != len(found):
            diagnostics.append(f"window count {total} but {len(found)} refined zeros")

        found.sort(key=_order_key)
        if len(found) >= count or attempt == max_expansions:
            break
        grow = 1.6
        rect = rootfind.Rect(rect.x0, rect.x0 + grow * rect.width, grow * rect.y0, grow * rect.y1)
        diagnostics.append(f"expanded window to {rect}")

    chosen = found[:count]
    eigs = [_make_eigen(prob, lam, i) for i, lam in enumerate(chosen)]
    complete = len(eigs) == count and total == len(found)
    return EigenvalueList(eigs, complete=complete, window=box, winding=total, diagnostics=diagnostics)


# --------------------------------------------------------------------------- root diagnostics


def refine_at_radius(spec: PotentialSpec, lam: complex, radius: float, ray: RaySpec = RaySpec()) -> complex:
    """Re-locate a root with the seeding radius pinned (radius-robustness check)."""
    prob = _Problem(spec, ray.with_radius(radius))
    step = 1e-4 * max(1.0, abs(lam))
    if is_real(lam):
        a, b = lam.real - step, lam.real + step
        fa, fb = prob.real_part_function(a), prob.real_part_function(b)
        if fa * fb < 0:
            return complex(_refine_real(prob, a, b))
    return _refine_complex(prob, complex(lam), step, rel_tol=1e-12).root


def determinant_derivative(spec: PotentialSpec, lam: complex, ray: RaySpec = RaySpec(),
                           h: Optional[float] = None) -> complex:
    """Centered difference of the normalized determinant."""
    h = h or 1e-4 * max(1.0, abs(lam))
    return (spectral_determinant(spec, lam + h, ray) - spectral_determinant(spec, lam - h, ray)) / (2 * h)


# --------------------------------------------------------------------------- associated problem


DIRICHLET = "Dirichlet"
NEUMANN = "Neumann"


@dataclass(frozen=True)
class AssociatedEigenvalue:
    E: complex
    bc: str
    signed_im: float
    residual: float
    m: int

    @property
    def rotated(self) -> complex:
        """omega^2 E."""
        return omega(self.m) ** 2 * self.E


def _associated_frame(spec: PotentialSpec) -> RotatedSpec:
    rot = rotate_frame(spec, -1)
    return RotatedSpec(spec.m, rot.coeffs, 1.0 + 0j, -1)


def _associated_raw(frame: RotatedSpec, E: complex, bc: str, ray: RaySpec):
    v, w, L, _, _ = shoot(frame, E, ray)
    return v, w, L, (v if bc == DIRICHLET else w)


def associated_function(spec: PotentialSpec, bc: str, ray: RaySpec = RaySpec()):
    """E -> f(0, G^{-1}(a), E) (Dirichlet) or f'(0, G^{-1}(a), E) (Neumann), up to a positive scale."""
    frame = _associated_frame(spec)
    if bc not in (DIRICHLET, NEUMANN):
        raise ValueError(f"bc must be {DIRICHLET!r} or {NEUMANN!r}")

    def fun(E: complex) -> complex:
        v, w, L, x = _associated_raw(frame, E, bc, ray)
        return x * cmath.exp(1j * L.imag) / _norm(v, w, math.sqrt(1.0 + abs(E)))

    return fun


def _associated_refiner(spec: PotentialSpec, bc: str, ray: RaySpec):
    """Secant on the analytic boundary value exp(L - Re L(z0)) x, with the scale frozen at the start."""
    frame = _associated_frame(spec)

    def refine(z0: complex, step: float):
        L0 = _associated_raw(frame, z0, bc, ray)[2].real

        def fun(E):
            _, _, L, x = _associated_raw(frame, E, bc, ray)
            return x * cmath.exp(L - L0)

        return rootfind.secant(fun, z0, z0 + step)

    return refine


def associated_spectrum(spec: PotentialSpec, bc: str, count: int, ray: RaySpec = RaySpec(),
                        window: Optional[rootfind.Rect] = None, max_expansions: int = 4) -> List[AssociatedEigenvalue]:
    """Zeros E of the associated half-line problem, ordered by |E|.

    The default window is a rectangle reaching along the negative real axis,
    where these zeros accumulate.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    m = spec.m
    fun = rootfind.CachedFunction(associated_function(spec, bc, ray))
    refine = _associated_refiner(spec, bc, ray)
    if window is None:
        s = coefficient_scale(spec.a)
        shift = sum(abs(x) * s ** (m - k) for k, x in enumerate(spec.a, start=1))
        X = 1.3 * (asymptotic_eigenvalue(m, 2 * count + 1) if m > 2 else 4.0 * count + 6) + shift
        window = rootfind.Rect(-X, 1.0 + shift, -0.5 * X, 0.5 * X)
    rect = window
    roots: List[complex] = []
    diagnostics: List[str] = []
    for attempt in range(max_expansions + 1):
        total = rootfind.winding_number(fun, rect)
        roots = _zeros_in_box(fun, refine, rect, total, [z for z in roots if rect.contains(z)], diagnostics)
        if (len(roots) >= count and len(roots) == total) or attempt == max_expansions:
            break
        grow = 1.6
        rect = rootfind.Rect(rect.x0 * grow, rect.x1, rect.y0 * grow, rect.y1 * grow)
    roots.sort(key=abs)
    w2 = omega(m) ** 2
    out = AssociatedList(complete=len(roots) >= count and len(roots) == total, diagnostics=diagnostics)
    for E in roots[:count]:
        out.append(AssociatedEigenvalue(E=E, bc=bc, signed_im=(w2 * E).imag, residual=abs(fun(E)), m=m))
    return out


class AssociatedList(list):
    def __init__(self, items=(), complete=True, diagnostics=None):
        super().__init__(items)
        self.complete = complete
        self.diagnostics = diagnostics or []


def product_residual(lam: complex, associated: Sequence[AssociatedEigenvalue], truncation: int) -> float:
    """|log prod_j |(omega^2 E_j - lam) / (omega^2 E_j - conj(lam))|| over the first ``truncation`` terms."""
    if truncation > len(associated):
        raise ValueError("truncation exceeds the number of associated eigenvalues")
    lam = complex(lam)
    total = 0.0
    for e in associated[:truncation]:
        p = e.rotated
        den = p - lam.conjugate()
        if abs(den) <= 1e-14 * max(1.0, abs(p)):
            raise PoleError(f"conj(lambda) coincides with omega^2 E = {p}")
        total += math.log(abs(p - lam)) - math.log(abs(den))
    return abs(total)


# --------------------------------------------------------------------------- sweeps


@dataclass
class SweepResult:
    parameter_values: np.ndarray
    trajectories: np.ndarray  # (steps, count) complex
    events: List[dict]
    incomplete_steps: List[int] = field(default_factory=list)


def with_coefficient(spec: PotentialSpec, index: int, value: float) -> PotentialSpec:
    a = list(spec.a)
    a[index - 1] = value
    return PotentialSpec(spec.m, a)


def _conjugates(z: complex, w: complex) -> bool:
    return not is_real(z) and abs(z - w.conjugate()) < 1e-6 * max(1.0, abs(z))


def _match(prev: np.ndarray, cands: np.ndarray) -> Tuple[np.ndarray, bool]:
    """Nearest-neighbour assignment; ambiguous when a rival candidate is nearly as close.

    A rival that is the conjugate partner of the chosen value does not count,
    since pair orientation is fixed separately.
    """
    cost = np.abs(prev[:, None] - cands[None, :])
    rows, cols = linear_sum_assignment(cost)
    order = np.empty(len(prev), dtype=int)
    order[rows] = cols
    chosen = cands[order]
    ambiguous = False
    for i, j in enumerate(order):
        for k in range(len(cands)):
            if k == j or _conjugates(cands[k], cands[j]) or abs(cands[k] - cands[j]) < 1e-9:
                continue
            if cost[i, k] < 1.5 * cost[i, j]:
                ambiguous = True
    return chosen, ambiguous


def sweep_coefficient(spec: PotentialSpec, coeff_index: int, value_range: Tuple[float, float], steps: int,
                      count: int, ray: RaySpec = RaySpec(), warm_start: bool = True, extra: int = 2) -> SweepResult:
    """Follow the ``count`` lowest eigenvalues while a_{coeff_index} runs over value_range."""
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if not 1 <= coeff_index <= spec.m - 1:
        raise ValueError(f"coefficient index must lie in 1..{spec.m - 1}")
    values = np.linspace(value_range[0], value_range[1], steps)
    traj = np.zeros((steps, count), dtype=complex)
    events: List[dict] = []
    incomplete: List[int] = []
    prev = None
    for i, val in enumerate(values):
        s = with_coefficient(spec, coeff_index, float(val))
        hints = prev if (warm_start and prev is not None) else ()
        eigs = find_eigenvalues(s, count + extra, ray=ray, hints=hints)
        if not eigs.complete or len(eigs) < count:
            incomplete.append(i)
        cands = eigs.values
        if prev is None:
            cur = cands[:count]
            ambiguous = False
        else:
            cur, ambiguous = _match(prev, cands)
            cur = _orient_pairs(prev, cur)
        traj[i] = cur
        if prev is not None:
            events.extend(_events_between(values[i - 1], val, prev, cur, ambiguous))
        prev = cur
    return SweepResult(values, traj, events, incomplete)


def _orient_pairs(prev: np.ndarray, cur: np.ndarray) -> np.ndarray:
    """When two trajectories form a conjugate pair, give the lower index the positive imaginary part."""
    cur = cur.copy()
    n = len(cur)
    for p in range(n):
        for q in range(p + 1, n):
            if (not is_real(cur[p]) and not is_real(cur[q])
                    and abs(cur[p] - cur[q].conjugate()) < 1e-6 * max(1.0, abs(cur[p]))):
                if cur[p].imag < 0:
                    cur[p], cur[q] = cur[q], cur[p]
    return cur


def _events_between(v0, v1, prev, cur, ambiguous):
    out = []
    n = len(cur)
    for p in range(n):
        for q in range(p + 1, n):
            pair_now = (not is_real(cur[p]) and not is_real(cur[q])
                        and abs(cur[p] - cur[q].conjugate()) < 1e-6 * max(1.0, abs(cur[p])))
            pair_before = (not is_real(prev[p]) and not is_real(prev[q])
                           and abs(prev[p] - prev[q].conjugate()) < 1e-6 * max(1.0, abs(prev[p])))
            both_real_before = is_real(prev[p]) and is_real(prev[q])
            both_real_now = is_real(cur[p]) and is_real(cur[q])
            if both_real_before and pair_now:
                out.append({"kind": "coalescence", "interval": [float(v0), float(v1)],
                            "pair": [p, q], "ambiguous": bool(ambiguous)})
            elif pair_before and both_real_now:
                out.append({"kind": "split", "interval": [float(v0), float(v1)],
                            "pair": [p, q], "ambiguous": bool(ambiguous)})
    return out
