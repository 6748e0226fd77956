"""Shooting along complex rays: WKB seeding at large radius, inward propagation, origin data."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import _kernels
from .errors import MaxStepsError, PropagationError, SectorError, StiffnessError
from .potential import PotentialSpec, SpecLike, _unit, qpoly, rotate_frame

DEFAULT_REL_TOL = 1e-10


@dataclass(frozen=True)
class RaySpec:
    """Integration path z = r e^{i angle}, r from ``radius`` down to 0.

    ``radius=None`` picks the smallest radius with Re F >= ``min_decay`` at which
    the asymptotic seed is accurate to ``seed_tol``.
    """

    angle: float = 0.0
    radius: Optional[float] = None
    rel_tol: float = DEFAULT_REL_TOL
    max_steps: int = 200_000
    min_decay: float = 25.0
    seed_tol: float = 1e-13

    def __post_init__(self):
        if not abs(self.angle) < math.pi:
            raise SectorError(f"ray angle {self.angle} outside (-pi, pi)")
        if self.radius is not None and not self.radius > 0:
            raise ValueError("radius must be positive")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")

    def with_radius(self, radius: Optional[float]) -> "RaySpec":
        return replace(self, radius=radius)


@dataclass(frozen=True)
class BoundaryFrame:
    """Solution state (v, dv) with the true value v * exp(log_scale)."""

    v: complex
    dv: complex
    log_scale: complex
    z: complex = 0j

    @property
    def value(self) -> complex:
        return self.v * cmath.exp(self.log_scale)

    @property
    def derivative(self) -> complex:
        return self.dv * cmath.exp(self.log_scale)

    def log_derivative(self) -> complex:
        return self.dv / self.v


@dataclass(frozen=True)
class OriginData:
    """f_k(0) and f_k'(0) as value * exp(log_scale), derivative * exp(log_scale)."""

    value: complex
    derivative: complex
    log_scale: complex
    k: int
    lam: complex
    radius: float
    steps: int = 0

    def normalized(self):
        """(value, derivative) scaled to unit max-norm; the phase of exp(log_scale) is kept."""
        s = max(abs(self.value), abs(self.derivative))
        ph = cmath.exp(1j * self.log_scale.imag)
        return self.value * ph / s, self.derivative * ph / s


@dataclass
class PathTrace:
    """Accepted-step record of a multi-column propagation."""

    r: np.ndarray
    v: np.ndarray
    dv: np.ndarray
    log_scale: np.ndarray = field(repr=False)

    def max_stored(self) -> float:
        return float(max(np.abs(self.v).max(), np.abs(self.dv).max()))


def _max_sector(m: int) -> float:
    return 3 * math.pi / (m + 2)


def wkb_seed(spec: SpecLike, lam: complex, z0: complex, order: Optional[int] = None) -> BoundaryFrame:
    """Seed the decaying solution at z0 from its asymptotic expansion.

    ``order=0`` is the bare leading form z^{r} exp(-F) with f' = -z^{m/2} f;
    ``order=None`` adds correction terms up to optimal truncation.
    """
    z0 = complex(z0)
    m = spec.m
    if z0 == 0 or not abs(cmath.phase(z0)) < _max_sector(m):
        raise SectorError(f"z0 = {z0} outside the sector |arg z| < 3 pi/(m+2)")
    c = _kernels.riccati_coeffs(qpoly(spec, lam), m, _kernels.SERIES_TERMS)
    if order == 0:
        # the leading-order derivative is -z^{r + m/2} e^{-F}, i.e. y = -z^{m/2}
        logf, _, _ = _kernels.seed_from_series(c, m, z0, 0)
        y = -cmath.exp(m / 2 * cmath.log(z0))
    else:
        logf, y, _ = _kernels.seed_from_series(c, m, z0, -1 if order is None else int(order))
    s = max(1.0, abs(y))
    return BoundaryFrame(v=1.0 / s, dv=y / s, log_scale=logf + math.log(s), z=z0)


def seed_radius(spec: SpecLike, lam: complex, ray: RaySpec = RaySpec()) -> float:
    if ray.radius is not None:
        return float(ray.radius)
    c = _kernels.riccati_coeffs(qpoly(spec, lam), spec.m, _kernels.SERIES_TERMS)
    R = _kernels.choose_radius(c, spec.m, ray.angle, ray.min_decay, ray.seed_tol, 1.0)
    if R < 0:
        raise PropagationError("no admissible seeding radius found")
    return R


def _raise_status(status: int, r_fail: float, k=None):
    if status == _kernels.STIFF:
        raise StiffnessError(f"step size underflow at |z| = {r_fail:.6g}", radius=r_fail, k=k)
    if status == _kernels.MAX_STEPS:
        raise MaxStepsError(f"step limit reached at |z| = {r_fail:.6g}", radius=r_fail, k=k)
    if status == _kernels.SEED_FAILED:
        raise PropagationError("no admissible seeding radius found", k=k)


def _run(spec, lam, ray, v0, dv0, r0, r1, record):
    res = _kernels.propagate(
        qpoly(spec, lam), 0j, float(ray.angle), float(r0), float(r1),
        np.asarray(v0, dtype=complex), np.asarray(dv0, dtype=complex),
        float(ray.rel_tol), int(ray.max_steps), bool(record),
        _kernels.A, _kernels.B, _kernels.C, _kernels.E3, _kernels.E5,
    )
    v, w, logs, nsteps, status, r_fail, rr, rv, rw, rl, nrec = res
    _raise_status(status, r_fail)
    return v, w, logs, nsteps, (rr[:nrec], rv[:nrec], rw[:nrec], rl[:nrec])


def propagate_inward(frame: BoundaryFrame, spec: SpecLike, lam: complex, ray: RaySpec,
                     to_radius: float = 0.0) -> BoundaryFrame:
    """Carry a frame sitting on the ray at |z| = |frame.z| inward to |z| = to_radius."""
    r0 = abs(frame.z) if frame.z != 0 else ray.radius
    if r0 is None:
        raise ValueError("frame has no position and ray has no radius")
    v, w, logs, _, _ = _run(spec, lam, ray, [frame.v], [frame.dv], r0, to_radius, False)
    z = to_radius * cmath.exp(1j * ray.angle)
    return BoundaryFrame(v=complex(v[0]), dv=complex(w[0]), log_scale=frame.log_scale + logs[0], z=z)


def propagate_trace(frames, spec: SpecLike, lam: complex, ray: RaySpec,
                    to_radius: float = 0.0) -> PathTrace:
    """Propagate several frames on a common step sequence, recording every accepted step."""
    r0 = abs(frames[0].z)
    v, w, logs, _, (rr, rv, rw, rl) = _run(
        spec, lam, ray, [f.v for f in frames], [f.dv for f in frames], r0, to_radius, True)
    base = np.array([f.log_scale for f in frames])
    return PathTrace(r=rr, v=rv, dv=rw, log_scale=base[None, :] + rl)


def wronskian_along(trace: PathTrace, i: int = 0, j: int = 1) -> np.ndarray:
    """True Wronskian f_i f_j' - f_i' f_j at each recorded step (log-scales restored)."""
    ws = trace.v[:, i] * trace.dv[:, j] - trace.dv[:, i] * trace.v[:, j]
    return ws * np.exp(trace.log_scale[:, i] + trace.log_scale[:, j])


def shoot(spec: SpecLike, lam: complex, ray: RaySpec = RaySpec()):
    """f(0) and f'(0) of the decaying solution of the given frame.

    Returns (value, derivative, log_scale, radius, steps) with the true values
    value * exp(log_scale) and derivative * exp(log_scale).
    """
    v, w, L, R, status, r_fail, nsteps = _kernels.shoot(
        qpoly(spec, lam), spec.m, float(ray.angle),
        float(ray.radius) if ray.radius is not None else 0.0,
        float(ray.min_decay), float(ray.seed_tol), float(ray.rel_tol), int(ray.max_steps),
        _kernels.A, _kernels.B, _kernels.C, _kernels.E3, _kernels.E5,
    )
    _raise_status(status, r_fail)
    return complex(v), complex(w), complex(L), float(R), int(nsteps)


def origin_data(spec: SpecLike, lam: complex, k: int = 0, ray: RaySpec = RaySpec()) -> OriginData:
    """f_k(0), f_k'(0) for f_k(z, a, lam) = f(omega^{-k} z, G^k(a), omega^{-mk} lam)."""
    rot = rotate_frame(spec, k)
    try:
        v, w, L, R, nsteps = shoot(rot, lam, ray)
    except PropagationError as exc:
        exc.k = k
        raise
    return OriginData(value=v, derivative=_unit(spec.m, -k) * w, log_scale=L, k=k,
                      lam=complex(lam), radius=R, steps=nsteps)


@dataclass(frozen=True)
class MatchData:
    """f_k and f_k' at the matching point z, as value * exp(log_scale)."""

    value: complex
    derivative: complex
    log_scale: complex
    k: int
    z: complex
    radius: float
    steps: int = 0


def matching_point(spec: PotentialSpec, lam: complex) -> float:
    """Real point between the turning points nearest the sectors of f_{-1} and f_1.

    There neither of the two WKB branches dominates, so f_{-1} and f_1 are far
    from parallel and their Wronskian is computed without cancellation.  The
    origin is used for m = 2, where the two rays are collinear.
    """
    m = spec.m
    if m == 2:
        return 0.0
    t = float(np.max(np.abs(np.roots(qpoly(spec, lam)))))
    return t * math.cos(math.pi / m)


def match_data(spec: PotentialSpec, lam: complex, k: int, zstar: float,
               ray: RaySpec = RaySpec()) -> MatchData:
    """f_k(zstar), f_k'(zstar) by shooting from sector k along its ray, then straight to zstar."""
    m = spec.m
    rot = rotate_frame(spec, k)
    theta = 2 * math.pi * k / (m + 2)
    c = math.cos(theta)
    rho = zstar / c if c > 1e-12 else 0.0
    v, w, L, R, status, r_fail, nsteps = _kernels.shoot_to(
        qpoly(rot, lam), qpoly(spec, lam), m, theta,
        float(ray.radius) if ray.radius is not None else 0.0, float(rho), complex(zstar),
        float(ray.min_decay), float(ray.seed_tol), float(ray.rel_tol), int(ray.max_steps),
        _kernels.A, _kernels.B, _kernels.C, _kernels.E3, _kernels.E5,
    )
    _raise_status(status, r_fail, k)
    return MatchData(complex(v), complex(w), complex(L), k, complex(zstar), float(R), int(nsteps))
