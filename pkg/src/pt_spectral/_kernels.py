"""Compiled inner loops: asymptotic log-derivative series, WKB seeding, DOP853 stepping.

The ODE is ``v'' = Q(z) v`` with ``Q(z) = z^m + c_1 z^{m-1} + ... + c_{m-1} z + mu``.
``qpoly`` always holds the coefficients of Q in descending powers, length m + 1.
"""

import math

import numpy as np
from numba import njit
from scipy.integrate._ivp import dop853_coefficients as _dop

N_STAGES = _dop.N_STAGES
A = np.ascontiguousarray(_dop.A[:N_STAGES, :N_STAGES])
B = np.ascontiguousarray(_dop.B)
C = np.ascontiguousarray(_dop.C[:N_STAGES])
E3 = np.ascontiguousarray(_dop.E3)
E5 = np.ascontiguousarray(_dop.E5)

SERIES_TERMS = 160

OK = 0
STIFF = 1
MAX_STEPS = 2
SEED_FAILED = 3


@njit(cache=True)
def horner(qpoly, z):
    acc = 0j
    for c in qpoly:
        acc = acc * z + c
    return acc


@njit(cache=True)
def riccati_coeffs(qpoly, m, nterms):
    """Coefficients c_n of the formal solution y = sum_n c_n z^{(m-n)/2} of y' + y^2 = Q.

    c_0 = -1 selects the branch that decays in the sector around the positive axis.
    """
    q = np.zeros(2 * m + 1, dtype=np.complex128)
    q[0] = 1.0
    for k in range(1, m + 1):
        q[2 * k] = qpoly[k]
    c = np.zeros(nterms, dtype=np.complex128)
    c[0] = -1.0
    for n in range(1, nterms):
        s = q[n] if n <= 2 * m else 0j
        for i in range(1, n):
            s -= c[i] * c[n - i]
        if n >= m + 2:
            s -= c[n - m - 2] * (2 * m + 2 - n) / 2.0
        c[n] = -s / 2.0
    return c


@njit(cache=True)
def zpow(logz, p):
    return np.exp(p * logz)


@njit(cache=True)
def leading_exponent(c, m, z):
    """Return F(z) built from the series (the terms that grow or stay bounded)."""
    logz = np.log(z)
    F = 0j
    for k in range(0, m + 2):
        F -= c[k] * 2.0 / (m + 2 - k) * zpow(logz, (m + 2 - k) / 2.0)
    return F


@njit(cache=True)
def seed_from_series(c, m, z, order):
    """Asymptotic (log f, f'/f) at z.

    order < 0 truncates the correction series just before its smallest term
    (magnitudes smoothed over a window of m + 2 indices, which covers the
    structural zeros); order = 0 keeps only z^{r} exp(-F); order = n > 0 keeps
    the first n correction terms. Returns (log f, y, size of the omitted part).
    """
    nterms = c.shape[0]
    logz = np.log(z)
    logf = c[m + 2] * logz
    y = 0j
    for k in range(0, m + 2):
        logf += c[k] * 2.0 / (m + 2 - k) * zpow(logz, (m + 2 - k) / 2.0)
    for k in range(0, m + 3):
        y += c[k] * zpow(logz, (m - k) / 2.0)
    ymag = abs(zpow(logz, m / 2.0))
    first = m + 3
    n = nterms - first
    tl = np.zeros(n, dtype=np.complex128)
    ty = np.zeros(n, dtype=np.complex128)
    mag = np.zeros(n)
    for i in range(n):
        k = first + i
        tl[i] = c[k] * 2.0 / (m + 2 - k) * zpow(logz, (m + 2 - k) / 2.0)
        ty[i] = c[k] * zpow(logz, (m - k) / 2.0)
        mag[i] = max(abs(tl[i]), abs(ty[i]) / ymag)
    if order >= 0:
        stop = min(order, n)
        omitted = 0.0
        for i in range(stop, min(stop + m + 2, n)):
            omitted = max(omitted, mag[i])
    else:
        width = m + 2
        stop = n - width
        omitted = np.inf
        for i in range(0, n - width):
            s = 0.0
            for j in range(i, i + width):
                s = max(s, mag[j])
            if s < omitted:
                omitted = s
                stop = i
            if s < 1e-18:
                break
    for i in range(stop):
        logf += tl[i]
        y += ty[i]
    return logf, y, omitted


@njit(cache=True)
def choose_radius(c, m, theta, min_decay, seed_tol, r_start):
    """Smallest radius (on a geometric ladder) meeting the decay and series-accuracy targets."""
    e = np.exp(1j * theta)
    R = max(r_start, 0.5)
    for _ in range(400):
        z = R * e
        F = leading_exponent(c, m, z)
        if F.real >= min_decay:
            _, _, omitted = seed_from_series(c, m, z, -1)
            if omitted <= seed_tol:
                return R
        R *= 1.1
    return -1.0


@njit(cache=True)
def _rhs(qpoly, base, e, r, v, w, dv, dw):
    z = base + r * e
    qz = horner(qpoly, z)
    for i in range(v.shape[0]):
        dv[i] = e * w[i]
        dw[i] = e * qz * v[i]


@njit(cache=True)
def propagate(qpoly, base, theta, r0, r1, v0, w0, rtol, max_steps, record, A, B, C, E3, E5):
    """Integrate columns (v, w=dv/dz) along z = base + r e^{i theta} from r0 to r1.

    Each column is renormalized to max(|v|, |w|) = 1 whenever that quantity leaves
    [1e-2, 1e2]; the logarithms of the removed factors are accumulated in ``logs``.
    Error control is relative to each column's size.
    """
    ncol = v0.shape[0]
    ns = B.shape[0]
    e = np.exp(1j * theta)
    v = v0.copy()
    w = w0.copy()
    logs = np.zeros(ncol)
    nrec = 0
    cap = max_steps + 1 if record else 1
    rec_r = np.zeros(cap)
    rec_v = np.zeros((cap, ncol), dtype=np.complex128)
    rec_w = np.zeros((cap, ncol), dtype=np.complex128)
    rec_l = np.zeros((cap, ncol))
    if record:
        rec_r[0] = r0
        rec_v[0] = v
        rec_w[0] = w
        nrec = 1

    direction = 1.0 if r1 > r0 else -1.0
    span = abs(r1 - r0)
    if span == 0.0:
        return v, w, logs, 0, OK, r0, rec_r, rec_v, rec_w, rec_l, nrec

    Kv = np.zeros((ns + 1, ncol), dtype=np.complex128)
    Kw = np.zeros((ns + 1, ncol), dtype=np.complex128)
    tv = np.zeros(ncol, dtype=np.complex128)
    tw = np.zeros(ncol, dtype=np.complex128)
    fv = np.zeros(ncol, dtype=np.complex128)
    fw = np.zeros(ncol, dtype=np.complex128)
    nv = np.zeros(ncol, dtype=np.complex128)
    nw = np.zeros(ncol, dtype=np.complex128)

    _rhs(qpoly, base, e, r0, v, w, fv, fw)
    qabs = abs(horner(qpoly, base + r0 * e))
    habs = min(span, 0.1 / (1.0 + math.sqrt(qabs)))
    r = r0
    nsteps = 0
    rejected = False
    while direction * (r1 - r) > 0:
        if nsteps >= max_steps:
            return v, w, logs, nsteps, MAX_STEPS, r, rec_r, rec_v, rec_w, rec_l, nrec
        if habs < 1e-13 * max(1.0, abs(r)):
            return v, w, logs, nsteps, STIFF, r, rec_r, rec_v, rec_w, rec_l, nrec
        if habs > abs(r1 - r):
            habs = abs(r1 - r)
        h = direction * habs

        for i in range(ncol):
            Kv[0, i] = fv[i]
            Kw[0, i] = fw[i]
        for s in range(1, ns):
            for i in range(ncol):
                av = 0j
                aw = 0j
                for j in range(s):
                    av += A[s, j] * Kv[j, i]
                    aw += A[s, j] * Kw[j, i]
                tv[i] = v[i] + h * av
                tw[i] = w[i] + h * aw
            _rhs(qpoly, base, e, r + C[s] * h, tv, tw, Kv[s], Kw[s])
        for i in range(ncol):
            bv = 0j
            bw = 0j
            for j in range(ns):
                bv += B[j] * Kv[j, i]
                bw += B[j] * Kw[j, i]
            nv[i] = v[i] + h * bv
            nw[i] = w[i] + h * bw
        _rhs(qpoly, base, e, r + h, nv, nw, Kv[ns], Kw[ns])

        e5 = 0.0
        e3 = 0.0
        for i in range(ncol):
            scale = rtol * max(max(abs(v[i]), abs(w[i])), max(abs(nv[i]), abs(nw[i])))
            if scale == 0.0:
                scale = rtol
            x5v = 0j
            x5w = 0j
            x3v = 0j
            x3w = 0j
            for j in range(ns + 1):
                x5v += E5[j] * Kv[j, i]
                x5w += E5[j] * Kw[j, i]
                x3v += E3[j] * Kv[j, i]
                x3w += E3[j] * Kw[j, i]
            e5 += (abs(x5v) / scale) ** 2 + (abs(x5w) / scale) ** 2
            e3 += (abs(x3v) / scale) ** 2 + (abs(x3w) / scale) ** 2
        if e5 == 0.0 and e3 == 0.0:
            err = 0.0
        else:
            err = habs * e5 / math.sqrt((e5 + 0.01 * e3) * 2 * ncol)

        if err < 1.0:
            if err == 0.0:
                factor = 10.0
            else:
                factor = min(10.0, 0.9 * err ** (-1.0 / 8.0))
            if rejected:
                factor = min(1.0, factor)
            rejected = False
            r = r + h
            nsteps += 1
            for i in range(ncol):
                v[i] = nv[i]
                w[i] = nw[i]
                fv[i] = Kv[ns, i]
                fw[i] = Kw[ns, i]
                cn = max(abs(v[i]), abs(w[i]))
                if cn > 1e2 or (cn < 1e-2 and cn > 0.0):
                    v[i] /= cn
                    w[i] /= cn
                    fv[i] /= cn
                    fw[i] /= cn
                    logs[i] += math.log(cn)
            if record and nrec < cap:
                rec_r[nrec] = r
                rec_v[nrec] = v
                rec_w[nrec] = w
                rec_l[nrec] = logs
                nrec += 1
            habs *= factor
        else:
            habs *= max(0.2, 0.9 * err ** (-1.0 / 8.0))
            rejected = True
    return v, w, logs, nsteps, OK, r, rec_r, rec_v, rec_w, rec_l, nrec


@njit(cache=True)
def shoot(qpoly, m, theta, radius, min_decay, seed_tol, rtol, max_steps, A, B, C, E3, E5):
    """Seed the decaying solution at radius (auto when <= 0) and carry it to the origin.

    Returns (v, w, log_scale, radius_used, status, r_fail, nsteps); the true
    solution value is v * exp(log_scale).
    """
    c = riccati_coeffs(qpoly, m, SERIES_TERMS)
    if radius <= 0.0:
        radius = choose_radius(c, m, theta, min_decay, seed_tol, 1.0)
        if radius < 0:
            return 0j, 0j, 0j, -1.0, SEED_FAILED, 0.0, 0
    z0 = radius * np.exp(1j * theta)
    logf, y, _ = seed_from_series(c, m, z0, -1)
    s = max(1.0, abs(y))
    v0 = np.empty(1, dtype=np.complex128)
    w0 = np.empty(1, dtype=np.complex128)
    v0[0] = 1.0 / s
    w0[0] = y / s
    out = propagate(qpoly, 0j, theta, radius, 0.0, v0, w0, rtol, max_steps, False, A, B, C, E3, E5)
    v, w, logs, nsteps, status, r_fail = out[0], out[1], out[2], out[3], out[4], out[5]
    L = logf + math.log(s) + logs[0]
    return v[0], w[0], L, radius, status, r_fail, nsteps


@njit(cache=True)
def shoot_to(qrot, qorig, m, theta, radius, rho, zstar, min_decay, seed_tol, rtol, max_steps, A, B, C, E3, E5):
    """Decaying solution of a rotated frame, carried to the point zstar of the original frame.

    The seed sits at radius on the rotated positive axis, which is the ray of
    angle theta in the original coordinates; the path runs along that ray down
    to rho and then straight to zstar.  Returns (v, dv/dz, log_scale,
    radius_used, status, r_fail, nsteps) in original coordinates.
    """
    c = riccati_coeffs(qrot, m, SERIES_TERMS)
    if radius <= 0.0:
        radius = choose_radius(c, m, 0.0, min_decay, seed_tol, 1.0)
        if radius < 0:
            return 0j, 0j, 0j, -1.0, SEED_FAILED, 0.0, 0
    logf, y, _ = seed_from_series(c, m, radius + 0j, -1)
    e = np.exp(1j * theta)
    s = max(1.0, abs(y))
    v0 = np.empty(1, dtype=np.complex128)
    w0 = np.empty(1, dtype=np.complex128)
    v0[0] = 1.0 / s
    w0[0] = y / (s * e)
    rho = min(rho, radius)
    out = propagate(qorig, 0j, theta, radius, rho, v0, w0, rtol, max_steps, False, A, B, C, E3, E5)
    nsteps = out[3]
    if out[4] != OK:
        return 0j, 0j, 0j, radius, out[4], out[5], nsteps
    L = logf + math.log(s) + out[2][0]
    start = rho * e
    d = zstar - start
    if abs(d) > 0.0:
        out = propagate(qorig, start, np.angle(d), 0.0, abs(d), out[0], out[1], rtol, max_steps - nsteps,
                        False, A, B, C, E3, E5)
        nsteps += out[3]
        if out[4] != OK:
            return 0j, 0j, 0j, radius, out[4], out[5], nsteps
        L += out[2][0]
    return out[0][0], out[1][0], L, radius, OK, 0.0, nsteps
