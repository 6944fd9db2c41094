# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scalar kernels.

Twin of kgflow._kernels_py with identical signatures, parameter layout and
semantics; see that module's docstring for the layout contract. The pure
twin is the reference: any behavioral difference here is a bug.
"""
import numpy as np

from libc.math cimport NAN, ceil, fabs, fmax, fmin, sqrt

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)

PARAMS_LEN = 34
LAYOUT_VERSION = 1

KIND_SCALAR = 0
KIND_ELECTROSTATIC = 1

LAW_SCHRODINGER = 0
LAW_DEBROGLIE = 1
LAW_EIGEN = 2

STATUS_OK = 0
STATUS_NODE = 1
STATUS_BOTH_NULL = 2
STATUS_COMPLEX_PAIR = 3

NODE_EPS = 1e-10
HALVE_FRACTION = 0.10
MAX_HALVE_DEPTH = 16
STAGNATION_EPS = 1e-8

cdef enum:
    _OK = 0
    _NODE = 1
    _BOTH_NULL = 2
    _COMPLEX_PAIR = 3

cdef double _NODE_EPS_C = 1e-10
cdef double _HALVE_FRACTION_C = 0.10
cdef double _STAGNATION_EPS_C = 1e-8


def backend_name():
    return "cython"


cdef inline int _region_c(double[::1] p, double x) nogil:
    if <int> p[3] == 1:
        return 0
    if x < p[4]:
        return 0
    if x <= p[5]:
        return 1
    return 2


cdef inline int _psi_c(double[::1] p, double x,
                       double complex* psi, double complex* dpsi) nogil:
    cdef int r = _region_c(p, x)
    cdef int b = 6 + 9 * r
    cdef double complex k = p[b] + 1j * p[b + 1]
    cdef double complex up = (p[b + 2] + 1j * p[b + 3]) * cexp(1j * k * (x - p[b + 6]))
    cdef double complex um = (p[b + 4] + 1j * p[b + 5]) * cexp(-1j * k * (x - p[b + 7]))
    psi[0] = up + um
    dpsi[0] = 1j * k * (up - um)
    return r


def psi_at(double[::1] p, double x):
    """(psi, psi', region) at x; derivatives analytic."""
    cdef double complex psi, dpsi
    cdef int r = _psi_c(p, x, &psi, &dpsi)
    return psi, dpsi, r


def abs2_at(double[::1] p, double x):
    cdef double complex psi, dpsi
    _psi_c(p, x, &psi, &dpsi)
    return psi.real * psi.real + psi.imag * psi.imag


def is_node(double[::1] p, double absphi2):
    return absphi2 < _NODE_EPS_C * p[33]


def current_at(double[::1] p, double x):
    """Conserved current j = Im(psi* psi')."""
    cdef double complex psi, dpsi
    _psi_c(p, x, &psi, &dpsi)
    return (psi.conjugate() * dpsi).imag


cdef inline int _grad_c(double[::1] p, double x,
                        double* px, double* sx, int* region) nogil:
    cdef double complex psi, dpsi, ld
    cdef double a2
    region[0] = _psi_c(p, x, &psi, &dpsi)
    a2 = psi.real * psi.real + psi.imag * psi.imag
    if a2 < _NODE_EPS_C * p[33]:
        px[0] = 0.0
        sx[0] = 0.0
        return 1
    ld = dpsi / psi
    px[0] = ld.real
    sx[0] = ld.imag
    return 0


def grad_at(double[::1] p, double x):
    """(P_x, S_x, region, node_flag): real/imag parts of psi'/psi."""
    cdef double px, sx
    cdef int r
    cdef int node = _grad_c(p, x, &px, &sx, &r)
    return px, sx, r, node


cdef inline double _vS_c(double[::1] p, double x, int* status) nogil:
    cdef double px, sx
    cdef int r
    if _grad_c(p, x, &px, &sx, &r):
        status[0] = _NODE
        return 0.0
    status[0] = _OK
    return sx


cdef inline double _vdB_c(double[::1] p, double x, int* status) nogil:
    cdef double px, sx, wkin
    cdef int r
    if _grad_c(p, x, &px, &sx, &r):
        status[0] = _NODE
        return 0.0
    wkin = p[1]
    if <int> p[2] == 1:
        wkin -= p[6 + 9 * r + 8]
    status[0] = _OK
    return sx / wkin


def vS_at(double[::1] p, double x):
    """Schrodinger-form velocity Im(psi'/psi); (value, status)."""
    cdef int status
    cdef double v = _vS_c(p, x, &status)
    if status != _OK:
        return float("nan"), status
    return v, status


def vdB_at(double[::1] p, double x):
    """de Broglie velocity S_x / (omega - V); (value, status)."""
    cdef int status
    cdef double v = _vdB_c(p, x, &status)
    if status != _OK:
        return float("nan"), status
    return v, status


cdef inline void _emt_c(double[::1] p, double x,
                        double* T00, double* T01, double* T10, double* T11) nogil:
    cdef double complex psi, dpsi, Dt, Dx
    cdef int r = _psi_c(p, x, &psi, &dpsi)
    cdef int b = 6 + 9 * r
    cdef double V = p[b + 8]
    cdef double m0 = p[0]
    cdef double meff, wkin, a2, at2, ax2, L, t01
    if <int> p[2] == 1:
        meff = m0
        wkin = p[1] - V
    else:
        meff = m0 + V
        wkin = p[1]
    Dt = -1j * wkin * psi
    Dx = dpsi
    a2 = psi.real * psi.real + psi.imag * psi.imag
    at2 = Dt.real * Dt.real + Dt.imag * Dt.imag
    ax2 = Dx.real * Dx.real + Dx.imag * Dx.imag
    L = meff * meff * a2 - (at2 - ax2)
    t01 = 2.0 * (Dt.conjugate() * Dx).real
    T00[0] = L + 2.0 * at2
    T01[0] = t01
    T10[0] = -t01
    T11[0] = L - 2.0 * ax2


def emt_at(double[::1] p, double x):
    """Mixed stress tensor (T00, T01, T10, T11) at x."""
    cdef double T00, T01, T10, T11
    _emt_c(p, x, &T00, &T01, &T10, &T11)
    return T00, T01, T10, T11


cdef int _eig2_c(double T00, double T01, double T10, double T11,
                 double* lam_t, double* lam_s,
                 double* wt0, double* wt1, double* ws0, double* ws1) nogil:
    """Closed-form 2x2 eigen split with Minkowski classification."""
    cdef double scale = T00 * T00 + T01 * T01 + T10 * T10 + T11 * T11
    cdef double tr = T00 + T11
    cdef double disc = (T00 - T11) * (T00 - T11) + 4.0 * T01 * T10
    cdef double rt, lam_p, lam_m, offscale, diag_tol
    cdef double v0, v1, n, size, rel, s, lam
    cdef int i, n_time = 0, n_space = 0
    if disc < 0.0:
        if disc > -1e-12 * scale:
            disc = 0.0
        else:
            return _COMPLEX_PAIR
    rt = sqrt(disc)
    lam_p = 0.5 * (tr + rt)
    lam_m = 0.5 * (tr - rt)
    offscale = sqrt(scale) if scale > 0.0 else 0.0
    diag_tol = 1e-15 * offscale
    lam_t[0] = NAN
    lam_s[0] = NAN
    for i in range(2):
        lam = lam_p if i == 0 else lam_m
        if fabs(T01) <= diag_tol and fabs(T10) <= diag_tol:
            if fabs(T00 - lam) <= fabs(T11 - lam):
                v0 = 1.0
                v1 = 0.0
            else:
                v0 = 0.0
                v1 = 1.0
        elif fabs(T01) >= fabs(T10):
            v0 = T01
            v1 = lam - T00
        else:
            v0 = lam - T11
            v1 = T10
        n = v0 * v0 - v1 * v1
        size = v0 * v0 + v1 * v1
        if size == 0.0:
            continue
        rel = n / size
        if rel > 1e-12:
            n_time += 1
            s = 1.0 / sqrt(n)
            if v0 < 0.0:
                s = -s
            wt0[0] = v0 * s
            wt1[0] = v1 * s
            lam_t[0] = lam
        elif rel < -1e-12:
            n_space += 1
            s = 1.0 / sqrt(-n)
            if v1 < 0.0 or (v1 == 0.0 and v0 < 0.0):
                s = -s
            ws0[0] = v0 * s
            ws1[0] = v1 * s
            lam_s[0] = lam
    if n_time == 1 and n_space == 1:
        return _OK
    lam_t[0] = lam_p
    lam_s[0] = lam_m
    return _BOTH_NULL


def eig2(double T00, double T01, double T10, double T11):
    """Eigen-decomposition of the mixed 2x2 tensor; see the pure twin."""
    cdef double lam_t, lam_s, wt0 = NAN, wt1 = NAN, ws0 = NAN, ws1 = NAN
    cdef int st = _eig2_c(T00, T01, T10, T11,
                          &lam_t, &lam_s, &wt0, &wt1, &ws0, &ws1)
    nan = float("nan")
    if st == _COMPLEX_PAIR:
        return nan, nan, nan, nan, nan, nan, st
    if st == _BOTH_NULL:
        return lam_t, lam_s, nan, nan, nan, nan, st
    return lam_t, lam_s, wt0, wt1, ws0, ws1, st


cdef inline double _vE_c(double[::1] p, double x, int* status) nogil:
    cdef double T00, T01, T10, T11
    cdef double lam_t, lam_s, wt0 = 0.0, wt1 = 0.0, ws0 = 0.0, ws1 = 0.0
    _emt_c(p, x, &T00, &T01, &T10, &T11)
    status[0] = _eig2_c(T00, T01, T10, T11,
                        &lam_t, &lam_s, &wt0, &wt1, &ws0, &ws1)
    if status[0] != _OK:
        return 0.0
    return wt1 / wt0


def vE_at(double[::1] p, double x):
    """Eigenvector-law velocity; (value, status)."""
    cdef int status
    cdef double v = _vE_c(p, x, &status)
    if status != _OK:
        return float("nan"), status
    return v, status


def lambda_at(double[::1] p, double x):
    """Time-like eigenvalue of the stress tensor. Node-safe."""
    cdef double T00, T01, T10, T11
    cdef double lam_t, lam_s, wt0 = 0.0, wt1 = 0.0, ws0 = 0.0, ws1 = 0.0
    _emt_c(p, x, &T00, &T01, &T10, &T11)
    cdef int st = _eig2_c(T00, T01, T10, T11,
                          &lam_t, &lam_s, &wt0, &wt1, &ws0, &ws1)
    if st == _COMPLEX_PAIR:
        return float("nan")
    return lam_t


cdef inline double _velocity_c(double[::1] p, int law, double x, int* status) nogil:
    if law == 0:
        return _vS_c(p, x, status)
    if law == 1:
        return _vdB_c(p, x, status)
    return _vE_c(p, x, status)


def velocity(double[::1] p, int law, double x):
    cdef int status
    cdef double v = _velocity_c(p, law, x, &status)
    if status != _OK:
        return float("nan"), status
    return v, status


def profile_point(double[::1] p, double x):
    """(absphi2, lambda, v_S, v_dB, v_E, node_flag) for field profiles."""
    cdef double complex psi, dpsi
    _psi_c(p, x, &psi, &dpsi)
    cdef double a2 = psi.real * psi.real + psi.imag * psi.imag
    cdef int node = 1 if a2 < _NODE_EPS_C * p[33] else 0
    cdef double lam = lambda_at(p, x)
    cdef double vs, vdb, ve
    cdef int st
    nan = float("nan")
    if node:
        vs = nan
        vdb = nan
    else:
        vs = _vS_c(p, x, &st)
        vdb = _vdB_c(p, x, &st)
    ve = _vE_c(p, x, &st)
    if st != _OK:
        ve = nan
    return a2, lam, vs, vdb, ve, node


def profile_grid(double[::1] p, xs):
    """Column arrays (absphi2, lambda, v_S, v_dB, v_E, node_flags) over xs."""
    cdef double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], i
    a2 = np.empty(n)
    lam = np.empty(n)
    vs = np.empty(n)
    vdb = np.empty(n)
    ve = np.empty(n)
    flags = np.empty(n, dtype=np.int64)
    cdef double[::1] a2v = a2, lamv = lam, vsv = vs, vdbv = vdb, vev = ve
    cdef long[::1] fv = flags
    for i in range(n):
        a2v[i], lamv[i], vsv[i], vdbv[i], vev[i], fv[i] = profile_point(p, xv[i])
    return a2, lam, vs, vdb, ve, flags


def direction_samples(double[::1] p, int law, xs):
    """(v array, defined mask) for one row of a direction field."""
    cdef double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], i
    v = np.empty(n)
    ok = np.empty(n, dtype=np.int64)
    cdef double[::1] vv = v
    cdef long[::1] okv = ok
    cdef int st
    cdef double vi
    for i in range(n):
        vi = _velocity_c(p, law, xv[i], &st)
        if st == _OK:
            vv[i] = vi
            okv[i] = 1
        else:
            vv[i] = NAN
            okv[i] = 0
    return v, ok


cdef double _advance_c(double[::1] p, int law, double x, double v0, double h,
                       int depth, int max_depth, int* status, int* halvings) nogil:
    """One RK4 step of dx/dt = v(x) with recursive halving."""
    cdef double k1, k2, k3, k4, x1, v1, xm, vm
    cdef int st
    k1 = v0
    k2 = _velocity_c(p, law, x + 0.5 * h * k1, &st)
    if st:
        status[0] = st
        return x
    k3 = _velocity_c(p, law, x + 0.5 * h * k2, &st)
    if st:
        status[0] = st
        return x
    k4 = _velocity_c(p, law, x + h * k3, &st)
    if st:
        status[0] = st
        return x
    x1 = x + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
    v1 = _velocity_c(p, law, x1, &st)
    if st:
        status[0] = st
        return x
    if depth < max_depth and fabs(v1 - v0) > _HALVE_FRACTION_C * (fabs(v0) + 1e-14):
        xm = _advance_c(p, law, x, v0, 0.5 * h, depth + 1, max_depth,
                        status, halvings)
        if status[0]:
            return x
        vm = _velocity_c(p, law, xm, &st)
        if st:
            status[0] = st
            return x
        x1 = _advance_c(p, law, xm, vm, 0.5 * h, depth + 1, max_depth,
                        status, halvings)
        if status[0]:
            return x
        halvings[0] += 1
        return x1
    status[0] = _OK
    return x1


def rk4_trajectory(double[::1] p, int law, double x0, double t0, double t_end,
                   double dt, int max_depth=MAX_HALVE_DEPTH):
    """Fixed-grid RK4 with local step halving; see the pure twin."""
    cdef int nsteps = <int> fmax(1.0, ceil((t_end - t0) / dt - 1e-12))
    ts_arr = np.empty(nsteps + 1)
    xs_arr = np.empty(nsteps + 1)
    cdef double[::1] ts = ts_arr
    cdef double[::1] xs = xs_arr
    cdef double x = x0, v0, t_next, h, x1
    cdef int i, st = _OK, status = _OK, halvings = 0, stag = 0, stag_max = 0
    cdef int npts = 1
    ts[0] = t0
    xs[0] = x0
    for i in range(nsteps):
        v0 = _velocity_c(p, law, x, &st)
        if st:
            status = st
            break
        if fabs(v0) < _STAGNATION_EPS_C:
            stag += 1
            if stag > stag_max:
                stag_max = stag
        else:
            stag = 0
        t_next = fmin(t0 + (i + 1) * dt, t_end)
        h = t_next - ts[npts - 1]
        x1 = _advance_c(p, law, x, v0, h, 0, max_depth, &st, &halvings)
        if st:
            status = st
            break
        x = x1
        ts[npts] = t_next
        xs[npts] = x
        npts += 1
    return ts_arr[:npts].copy(), xs_arr[:npts].copy(), status, halvings, stag_max
