"""Zero counting and refinement for analytic functions known only through noisy samples.

Counting uses the argument principle on rectangle boundaries with adaptive
sampling of the phase; isolation bisects rectangles until each holds one
unknown zero.  Functions passed in only need the correct *phase*: a positive
real normalization factor (even a non-analytic one) does not affect counting.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence

from .errors import EvaluationError


@dataclass(frozen=True)
class Rect:
    x0: float
    x1: float
    y0: float
    y1: float

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    def contains(self, z: complex, pad: float = 0.0) -> bool:
        return (self.x0 - pad <= z.real <= self.x1 + pad) and (self.y0 - pad <= z.imag <= self.y1 + pad)

    def corners(self):
        return (complex(self.x0, self.y0), complex(self.x1, self.y0),
                complex(self.x1, self.y1), complex(self.x0, self.y1))

    def split(self, frac: float = 0.5137):
        """Two halves across the longer side; the off-centre cut avoids symmetric zeros."""
        if self.width >= self.height:
            xm = self.x0 + frac * self.width
            return Rect(self.x0, xm, self.y0, self.y1), Rect(xm, self.x1, self.y0, self.y1)
        ym = self.y0 + frac * self.height
        return Rect(self.x0, self.x1, self.y0, ym), Rect(self.x0, self.x1, ym, self.y1)


class CachedFunction:
    """Memoizes a complex function so shared box edges are evaluated once."""

    def __init__(self, fun: Callable[[complex], complex]):
        self.fun = fun
        self.cache = {}
        self.calls = 0

    def __call__(self, z: complex) -> complex:
        z = complex(z)
        try:
            return self.cache[z]
        except KeyError:
            self.calls += 1
            val = complex(self.fun(z))
            self.cache[z] = val
            return val


def _wrap(x: float) -> float:
    return (x + math.pi) % (2 * math.pi) - math.pi


def _segment_phase(f, a: complex, b: complex, fa: complex, fb: complex,
                   max_step: float, min_len: float) -> float:
    """Phase change of f from a to b.

    A segment is accepted only when both halves turn by less than max_step and
    agree with the whole, so a change close to a multiple of 2 pi is not
    mistaken for no change.
    """
    if fa == 0 or fb == 0:
        raise EvaluationError(f"function vanishes on the contour near {a if fa == 0 else b}")
    mid = 0.5 * (a + b)
    fm = f(mid)
    if fm == 0:
        raise EvaluationError(f"function vanishes on the contour near {mid}")
    d = _wrap(cmath.phase(fb) - cmath.phase(fa))
    d1 = _wrap(cmath.phase(fm) - cmath.phase(fa))
    d2 = _wrap(cmath.phase(fb) - cmath.phase(fm))
    if abs(d1) < max_step and abs(d2) < max_step and abs(d1 + d2 - d) < 1e-9:
        return d1 + d2
    if abs(b - a) < min_len:
        raise EvaluationError(f"contour passes too close to a zero near {mid}")
    return (_segment_phase(f, a, mid, fa, fm, max_step, min_len)
            + _segment_phase(f, mid, b, fm, fb, max_step, min_len))


def winding_number(f, rect: Rect, max_step: float = 0.6, min_len: Optional[float] = None,
                   seg_len: float = 1.0) -> int:
    """Number of zeros of f inside rect (counterclockwise phase change / 2 pi).

    Each edge starts from samples at most ``seg_len`` apart, so a phase that
    turns by a full period between two samples is not mistaken for no change.
    """
    if min_len is None:
        min_len = 1e-9 * max(1.0, abs(rect.center), rect.width, rect.height)
    corners = rect.corners()
    total = 0.0
    for i in range(4):
        a, b = corners[i], corners[(i + 1) % 4]
        pieces = max(2, math.ceil(abs(b - a) / seg_len))
        pts = [a + (b - a) * t / pieces for t in range(pieces + 1)]
        vals = [f(p) for p in pts]
        for j in range(pieces):
            total += _segment_phase(f, pts[j], pts[j + 1], vals[j], vals[j + 1], max_step, min_len)
    n = total / (2 * math.pi)
    count = int(round(n))
    if abs(n - count) > 0.05:
        raise EvaluationError(f"non-integer winding {n:.4f} around {rect}")
    return count


@dataclass
class Box:
    rect: Rect
    count: int
    known: List[complex]


def isolate(f, rect: Rect, known: Sequence[complex] = (), count: Optional[int] = None,
            min_size: float = 1e-6, max_step: float = 0.6, max_size: float = math.inf) -> List[Box]:
    """Boxes that each contain zeros not in ``known``.

    Subdivision stops once a box holds exactly one unknown zero, no known ones
    and is no larger than ``max_size``; or when it shrinks below ``min_size``
    (then the box is returned with its full count so the caller can decide).
    """
    known = list(known)
    if count is None:
        count = winding_number(f, rect, max_step=max_step)
    inside = [z for z in known if rect.contains(z)]
    if count <= len(inside):
        return []
    if count == 1 and not inside and max(rect.width, rect.height) <= max_size:
        return [Box(rect, 1, [])]
    if max(rect.width, rect.height) < min_size:
        return [Box(rect, count, inside)]
    out = []
    for frac in (0.5137, 0.4711, 0.5623):
        halves = rect.split(frac)
        if any(_near_edge(z, h, 1e-7 * max(1.0, abs(z))) for h in halves for z in inside):
            continue
        try:
            counts = [winding_number(f, h, max_step=max_step) for h in halves]
        except EvaluationError:
            continue
        for h, c in zip(halves, counts):
            out.extend(isolate(f, h, inside, c, min_size, max_step, max_size))
        return out
    return [Box(rect, count, inside)]


def _near_edge(z: complex, r: Rect, tol: float) -> bool:
    return (min(abs(z.real - r.x0), abs(z.real - r.x1)) < tol and r.y0 - tol <= z.imag <= r.y1 + tol) or \
           (min(abs(z.imag - r.y0), abs(z.imag - r.y1)) < tol and r.x0 - tol <= z.real <= r.x1 + tol)


@dataclass
class SecantResult:
    root: complex
    converged: bool
    iterations: int
    value: complex


def secant(f, z0: complex, z1: complex, rel_tol: float = 1e-10, max_iter: int = 50) -> SecantResult:
    """Complex secant iteration; stops when |dz| < rel_tol * max(1, |z|)."""
    f0, f1 = f(z0), f(z1)
    for it in range(1, max_iter + 1):
        denom = f1 - f0
        if denom == 0:
            return SecantResult(z1, f1 == 0, it, f1)
        z2 = z1 - f1 * (z1 - z0) / denom
        if not cmath.isfinite(z2):
            return SecantResult(z1, False, it, f1)
        z0, f0 = z1, f1
        z1, f1 = z2, f(z2)
        if abs(z1 - z0) < rel_tol * max(1.0, abs(z1)):
            return SecantResult(z1, True, it, f1)
    return SecantResult(z1, False, max_iter, f1)


def sign_changes(xs: Sequence[float], ys: Sequence[float]) -> List[tuple]:
    """Brackets (x_i, x_{i+1}) where a real sampled function changes sign."""
    out = []
    for i in range(len(xs) - 1):
        if ys[i] == 0:
            out.append((xs[i], xs[i]))
        elif ys[i] * ys[i + 1] < 0:
            out.append((xs[i], xs[i + 1]))
    return out


def dedupe(roots: Iterable[complex], tol: float) -> List[complex]:
    out: List[complex] = []
    for z in roots:
        if all(abs(z - w) > tol * max(1.0, abs(z)) for w in out):
            out.append(z)
    return out
