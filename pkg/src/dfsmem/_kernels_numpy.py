"""Pure-numpy kernels: the fallback path and the reference semantics.

The numba module mirrors these functions one for one; any change here must
be applied there as well.  Guard conventions shared by both paths:
0*ln(0) = 0, and a model fidelity pinned at 1 against a nonzero failure
count yields -inf.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp


def csr_rk4(indptr, indices, data, y0, total_t, n_steps, dim, trace_tol):
    """Fixed-step RK4 for y' = A y with A given in CSR arrays.

    y is a row-major vectorized density matrix; the running trace is
    monitored as a step-control check.  Returns (y, status, t_reached)
    with status 0 on success, 1 on trace drift beyond trace_tol.
    """
    a = sp.csr_matrix((data, indices, indptr), shape=(y0.size, y0.size))
    y = np.array(y0, dtype=np.complex128, copy=True)
    dt = total_t / n_steps
    tr_idx = np.arange(dim) * (dim + 1)
    for step in range(n_steps):
        k1 = a @ y
        k2 = a @ (y + (0.5 * dt) * k1)
        k3 = a @ (y + (0.5 * dt) * k2)
        k4 = a @ (y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        tr = float(y[tr_idx].real.sum())
        if abs(tr - 1.0) > trace_tol:
            return y, 1, (step + 1) * dt
    return y, 0, total_t


def loglik_point(family, t, R, S, A, x):
    """Binomial log-likelihood at one (A, ln tau) point, combinatorial term excluded.

    family 0 is exponential decay, 1 is Gaussian decay; t is pre-scaled so
    that x = ln(tau) in the same units.
    """
    u = math.exp(x)
    z = t / u
    decay = np.exp(-z) if family == 0 else np.exp(-z * z)
    fid = 0.5 * (1.0 + A * decay)
    om = 1.0 - fid
    out = 0.0
    for i in range(t.shape[0]):
        s = S[i]
        r = R[i]
        if s > 0.0:
            out += s * math.log(fid[i])
        if r - s > 0.0:
            if om[i] <= 0.0:
                return -math.inf
            out += (r - s) * math.log(om[i])
    return out


def loglik_grid(family, t, R, S, A_grid, x_grid):
    """Log-likelihood surface over an (A, ln tau) grid, shape (nA, nx)."""
    u = np.exp(x_grid)
    z = t[None, :] / u[:, None]
    decay = np.exp(-z) if family == 0 else np.exp(-z * z)
    fid = 0.5 * (1.0 + A_grid[:, None, None] * decay[None, :, :])
    om = 1.0 - fid
    with np.errstate(divide="ignore", invalid="ignore"):
        succ = np.where(S > 0.0, S * np.log(fid), 0.0)
        fail = np.where(R - S > 0.0, (R - S) * np.log(om), 0.0)
    return (succ + fail).sum(axis=2)


def refine_simplex(family, t, R, S, A0, x0, x_lo, x_hi,
                   step_a, step_x, tol_a, tol_x, max_iter):
    """Nelder-Mead maximization of loglik_point over the clipped (A, x) box.

    Returns (A, x, loglik) for the best vertex once the simplex spread is
    below (tol_a, tol_x) or max_iter is hit.
    """
    pa = np.empty(3)
    px = np.empty(3)
    pf = np.empty(3)
    pa[0], px[0] = A0, x0
    a1 = A0 + step_a if A0 + step_a <= 1.0 else A0 - step_a
    x2 = x0 + step_x if x0 + step_x <= x_hi else x0 - step_x
    pa[1], px[1] = a1, x0
    pa[2], px[2] = A0, x2
    for k in range(3):
        pf[k] = loglik_point(family, t, R, S, pa[k], px[k])

    it = 0
    while it < max_iter:
        order = np.argsort(-pf)
        pa, px, pf = pa[order], px[order], pf[order]
        if pa.max() - pa.min() < tol_a and px.max() - px.min() < tol_x:
            break
        ca = 0.5 * (pa[0] + pa[1])
        cx = 0.5 * (px[0] + px[1])
        # reflection
        ra = min(max(ca + (ca - pa[2]), 0.0), 1.0)
        rx = min(max(cx + (cx - px[2]), x_lo), x_hi)
        rf = loglik_point(family, t, R, S, ra, rx)
        if rf > pf[0]:
            ea = min(max(ca + 2.0 * (ca - pa[2]), 0.0), 1.0)
            ex = min(max(cx + 2.0 * (cx - px[2]), x_lo), x_hi)
            ef = loglik_point(family, t, R, S, ea, ex)
            if ef > rf:
                pa[2], px[2], pf[2] = ea, ex, ef
            else:
                pa[2], px[2], pf[2] = ra, rx, rf
        elif rf > pf[1]:
            pa[2], px[2], pf[2] = ra, rx, rf
        else:
            if rf > pf[2]:
                ka = min(max(ca + 0.5 * (ca - pa[2]), 0.0), 1.0)
                kx = min(max(cx + 0.5 * (cx - px[2]), x_lo), x_hi)
            else:
                ka = min(max(ca - 0.5 * (ca - pa[2]), 0.0), 1.0)
                kx = min(max(cx - 0.5 * (cx - px[2]), x_lo), x_hi)
            kf = loglik_point(family, t, R, S, ka, kx)
            if kf > min(rf, pf[2]):
                pa[2], px[2], pf[2] = ka, kx, kf
            else:
                for j in (1, 2):
                    pa[j] = pa[0] + 0.5 * (pa[j] - pa[0])
                    px[j] = px[0] + 0.5 * (px[j] - px[0])
                    pf[j] = loglik_point(family, t, R, S, pa[j], px[j])
        it += 1

    b = int(np.argmax(pf))
    return pa[b], px[b], pf[b]
