"""Pure-Python scalar kernels.

Twin of the compiled core ``kgflow._kernels``: same functions, same
parameter-vector layout, plain cmath arithmetic. Selected by
``kgflow.backend`` when the compiled extension is unavailable or when
KGFLOW_FORCE_PY is set.

Parameter vector (numpy float64, length PARAMS_LEN):

    [0] m0    [1] omega    [2] kind (0 scalar / 1 electrostatic)
    [3] number of regions (1 or 3)
    [4] left interface    [5] right interface
    per region r, base B = 6 + 9*r:
        B+0 Re k     B+1 Im k
        B+2 Re amp+  B+3 Im amp+    multiplies exp(+i k (x - anchor+))
        B+4 Re amp-  B+5 Im amp-    multiplies exp(-i k (x - anchor-))
        B+6 anchor+  B+7 anchor-
        B+8 V
    [33] reference max |psi|^2 used by the node threshold

Units: hbar = c = 1, metric signature (+, -), stationary fields
phi(t, x) = psi(x) exp(-i omega t) with omega > 0. The t=0 slice is enough
for every kernel here: |psi|^2, velocities and the stress tensor are all
built from bilinears in which the global phase cancels.

Status codes: 0 ok, 1 node, 2 both eigenvectors null, 3 non-real eigenpair.
"""
import cmath
import math

import numpy as np

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

NODE_EPS = 1e-10        # |psi|^2 cutoff relative to params[33]
HALVE_FRACTION = 0.10   # per-step relative |v| change that triggers halving
MAX_HALVE_DEPTH = 16
STAGNATION_EPS = 1e-8


def backend_name():
    return "python"


def _region(p, x):
    if int(p[3]) == 1:
        return 0
    if x < p[4]:
        return 0
    if x <= p[5]:
        return 1
    return 2


def psi_at(p, x):
    """(psi, psi', region) at x; derivatives analytic."""
    r = _region(p, x)
    b = 6 + 9 * r
    k = complex(p[b], p[b + 1])
    up = complex(p[b + 2], p[b + 3]) * cmath.exp(1j * k * (x - p[b + 6]))
    um = complex(p[b + 4], p[b + 5]) * cmath.exp(-1j * k * (x - p[b + 7]))
    return up + um, 1j * k * (up - um), r


def abs2_at(p, x):
    psi, _, _ = psi_at(p, x)
    return abs(psi) ** 2


def is_node(p, absphi2):
    return absphi2 < NODE_EPS * p[33]


def current_at(p, x):
    """Conserved current j = Im(psi* psi'); x-independent for valid solutions."""
    psi, dpsi, _ = psi_at(p, x)
    return (psi.conjugate() * dpsi).imag


def grad_at(p, x):
    """(P_x, S_x, region, node_flag): real/imag parts of psi'/psi."""
    psi, dpsi, r = psi_at(p, x)
    a2 = abs(psi) ** 2
    if is_node(p, a2):
        return 0.0, 0.0, r, 1
    ld = dpsi / psi
    return ld.real, ld.imag, r, 0


def vS_at(p, x):
    """Schrodinger-form velocity Im(psi'/psi); (value, status)."""
    _, sx, _, node = grad_at(p, x)
    if node:
        return math.nan, STATUS_NODE
    return sx, STATUS_OK


def vdB_at(p, x):
    """de Broglie velocity S_x / (omega - V) with V active only electrostatically."""
    _, sx, r, node = grad_at(p, x)
    if node:
        return math.nan, STATUS_NODE
    wkin = p[1]
    if int(p[2]) == KIND_ELECTROSTATIC:
        wkin -= p[6 + 9 * r + 8]
    return sx / wkin, STATUS_OK


def emt_at(p, x):
    """Mixed stress tensor (T00, T01, T10, T11) at x, built from bilinears.

    Total (node-safe). Scalar coupling shifts the mass, electrostatic
    coupling shifts the time derivative: D_t phi = (d_t + iV) phi.
    """
    psi, dpsi, r = psi_at(p, x)
    b = 6 + 9 * r
    V = p[b + 8]
    m0 = p[0]
    if int(p[2]) == KIND_ELECTROSTATIC:
        meff = m0
        wkin = p[1] - V
    else:
        meff = m0 + V
        wkin = p[1]
    Dt = -1j * wkin * psi
    Dx = dpsi
    a2 = (psi.real * psi.real + psi.imag * psi.imag)
    at2 = (Dt.real * Dt.real + Dt.imag * Dt.imag)
    ax2 = (Dx.real * Dx.real + Dx.imag * Dx.imag)
    L = meff * meff * a2 - (at2 - ax2)
    T01 = 2.0 * (Dt.conjugate() * Dx).real
    return L + 2.0 * at2, T01, -T01, L - 2.0 * ax2


def eig2(T00, T01, T10, T11):
    """Eigen-decomposition of the mixed 2x2 tensor acting on (w^t, w^x).

    Returns (lam_time, lam_space, wt_t, wt_x, ws_t, ws_x, status). The
    time-like eigenvector is unit-normalized and future-pointing; the
    space-like one is normalized to w.w = -1 with w_x >= 0.
    """
    scale = T00 * T00 + T01 * T01 + T10 * T10 + T11 * T11
    tr = T00 + T11
    disc = (T00 - T11) ** 2 + 4.0 * T01 * T10
    if disc < 0.0:
        if disc > -1e-12 * scale:
            disc = 0.0
        else:
            return math.nan, math.nan, math.nan, math.nan, math.nan, math.nan, STATUS_COMPLEX_PAIR
    rt = math.sqrt(disc)
    lam_p = 0.5 * (tr + rt)
    lam_m = 0.5 * (tr - rt)

    offscale = math.sqrt(scale) if scale > 0.0 else 0.0
    diag_tol = 1e-15 * offscale
    vecs = []
    for lam in (lam_p, lam_m):
        if abs(T01) <= diag_tol and abs(T10) <= diag_tol:
            v = (1.0, 0.0) if abs(T00 - lam) <= abs(T11 - lam) else (0.0, 1.0)
        elif abs(T01) >= abs(T10):
            v = (T01, lam - T00)
        else:
            v = (lam - T11, T10)
        vecs.append(v)

    lam_t = lam_s = math.nan
    wt = ws = None
    n_time = n_space = 0
    for lam, (v0, v1) in zip((lam_p, lam_m), vecs):
        n = v0 * v0 - v1 * v1
        size = v0 * v0 + v1 * v1
        if size == 0.0:
            continue
        rel = n / size
        if rel > 1e-12:
            n_time += 1
            s = 1.0 / math.sqrt(n)
            if v0 < 0.0:
                s = -s
            wt = (v0 * s, v1 * s)
            lam_t = lam
        elif rel < -1e-12:
            n_space += 1
            s = 1.0 / math.sqrt(-n)
            if v1 < 0.0 or (v1 == 0.0 and v0 < 0.0):
                s = -s
            ws = (v0 * s, v1 * s)
            lam_s = lam
    if n_time == 1 and n_space == 1:
        return lam_t, lam_s, wt[0], wt[1], ws[0], ws[1], STATUS_OK
    return lam_p, lam_m, math.nan, math.nan, math.nan, math.nan, STATUS_BOTH_NULL


def vE_at(p, x):
    """Eigenvector-law velocity W^x / W^t from the time-like flow; (value, status)."""
    T00, T01, T10, T11 = emt_at(p, x)
    lam_t, lam_s, wt0, wt1, _, _, st = eig2(T00, T01, T10, T11)
    if st != STATUS_OK:
        return math.nan, st
    return wt1 / wt0, STATUS_OK


def lambda_at(p, x):
    """Time-like eigenvalue (energy-like flow density). Node-safe."""
    T00, T01, T10, T11 = emt_at(p, x)
    lam_t, lam_s, _, _, _, _, st = eig2(T00, T01, T10, T11)
    if st == STATUS_COMPLEX_PAIR:
        return math.nan
    return lam_t


def velocity(p, law, x):
    if law == LAW_SCHRODINGER:
        return vS_at(p, x)
    if law == LAW_DEBROGLIE:
        return vdB_at(p, x)
    return vE_at(p, x)


def profile_point(p, x):
    """(absphi2, lambda, v_S, v_dB, v_E, node_flag) for field profiles."""
    a2 = abs2_at(p, x)
    node = 1 if is_node(p, a2) else 0
    lam = lambda_at(p, x)
    if node:
        vs = vdb = math.nan
    else:
        vs, _ = vS_at(p, x)
        vdb, _ = vdB_at(p, x)
    ve, st = vE_at(p, x)
    return a2, lam, vs, vdb, ve, node


def profile_grid(p, xs):
    """Column arrays (absphi2, lambda, v_S, v_dB, v_E, node_flags) over xs."""
    n = len(xs)
    a2 = np.empty(n)
    lam = np.empty(n)
    vs = np.empty(n)
    vdb = np.empty(n)
    ve = np.empty(n)
    flags = np.empty(n, dtype=np.int64)
    for i, x in enumerate(xs):
        a2[i], lam[i], vs[i], vdb[i], ve[i], flags[i] = profile_point(p, float(x))
    return a2, lam, vs, vdb, ve, flags


def direction_samples(p, law, xs):
    """(v array, defined mask) for one row of a direction field."""
    n = len(xs)
    v = np.empty(n)
    ok = np.empty(n, dtype=np.int64)
    for i, x in enumerate(xs):
        vi, st = velocity(p, law, float(x))
        v[i] = vi
        ok[i] = 1 if st == STATUS_OK else 0
    return v, ok


def _advance(p, law, x, v0, h, depth, max_depth):
    """One RK4 step of dx/dt = v(x) with recursive halving.

    Returns (x_end, status, halvings). Halves when |v| changes by more than
    HALVE_FRACTION over the step, up to max_depth levels.
    """
    k1 = v0
    v, st = velocity(p, law, x + 0.5 * h * k1)
    if st:
        return x, st, 0
    k2 = v
    v, st = velocity(p, law, x + 0.5 * h * k2)
    if st:
        return x, st, 0
    k3 = v
    v, st = velocity(p, law, x + h * k3)
    if st:
        return x, st, 0
    k4 = v
    x1 = x + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
    v1, st = velocity(p, law, x1)
    if st:
        return x, st, 0
    if depth < max_depth and abs(v1 - v0) > HALVE_FRACTION * (abs(v0) + 1e-14):
        xm, st, n1 = _advance(p, law, x, v0, 0.5 * h, depth + 1, max_depth)
        if st:
            return x, st, n1
        vm, st = velocity(p, law, xm)
        if st:
            return x, st, n1
        x1, st, n2 = _advance(p, law, xm, vm, 0.5 * h, depth + 1, max_depth)
        if st:
            return x, st, n1 + n2
        return x1, STATUS_OK, n1 + n2 + 1
    return x1, STATUS_OK, 0


def rk4_trajectory(p, law, x0, t0, t_end, dt, max_depth=MAX_HALVE_DEPTH):
    """Integrate dx/dt = v(x) on a fixed t-grid with local step halving.

    Returns (t array, x array, status, halvings, longest stagnation run).
    status 0: reached t_end. status != 0: stopped early (arrays hold the
    points up to the last completed grid time).
    """
    nsteps = max(1, int(math.ceil((t_end - t0) / dt - 1e-12)))
    ts = [t0]
    xs = [x0]
    x = x0
    status = STATUS_OK
    halvings = 0
    stag = 0
    stag_max = 0
    for i in range(nsteps):
        v0, st = velocity(p, law, x)
        if st:
            status = st
            break
        if abs(v0) < STAGNATION_EPS:
            stag += 1
            stag_max = max(stag_max, stag)
        else:
            stag = 0
        t_next = min(t0 + (i + 1) * dt, t_end)
        h = t_next - ts[-1]
        x1, st, nh = _advance(p, law, x, v0, h, 0, max_depth)
        if st:
            status = st
            break
        halvings += nh
        x = x1
        ts.append(t_next)
        xs.append(x)
    return np.asarray(ts), np.asarray(xs), status, halvings, stag_max
