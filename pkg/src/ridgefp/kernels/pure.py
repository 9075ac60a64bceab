"""Numpy fallback for the per-iteration step kernels.

Signatures match ``ridgefp.kernels._core`` exactly: all arrays are
preallocated float64, ``tmp_n``/``tmp_d`` are scratch of length N and d,
and results land in ``w_out``/``alpha_out``.
"""

import numpy as np


def step_pdfp1(a, y, ay, lam_n, theta, w, alpha, w_out, alpha_out, tmp_n, tmp_d):
    np.dot(w, a, out=tmp_n)              # A^T w
    np.dot(a, tmp_n, out=tmp_d)          # A A^T w
    w_out[:] = (1.0 - theta) * w + (theta / lam_n) * (ay - tmp_d)
    np.dot(a, alpha, out=tmp_d)          # A alpha
    np.dot(tmp_d, a, out=tmp_n)          # A^T A alpha
    alpha_out[:] = (1.0 - theta) * alpha + theta * (y - tmp_n / lam_n)


def step_pdfp2(a, y, lam_n, theta, w, alpha, w_out, alpha_out, tmp_n, tmp_d):
    np.dot(a, alpha, out=tmp_d)
    w_out[:] = (1.0 - theta) * w + (theta / lam_n) * tmp_d
    np.dot(w, a, out=tmp_n)              # stale w: Jacobi-style update
    alpha_out[:] = (1.0 - theta) * alpha + theta * (y - tmp_n)


def step_qtz(a, y, lam_n, theta, w, alpha, w_out, alpha_out, tmp_n, tmp_d):
    np.dot(a, alpha, out=tmp_d)
    w_out[:] = (1.0 - theta) * w + (theta / lam_n) * tmp_d
    np.dot(w_out, a, out=tmp_n)          # fresh w: Gauss-Seidel update
    alpha_out[:] = (1.0 - theta) * alpha + theta * (y - tmp_n)


def step_nqtz(a, y, lam_n, theta, w, alpha, w_out, alpha_out, tmp_n, tmp_d):
    np.dot(w, a, out=tmp_n)
    alpha_out[:] = (1.0 - theta) * alpha + theta * (y - tmp_n)
    np.dot(a, alpha_out, out=tmp_d)      # fresh alpha
    w_out[:] = (1.0 - theta) * w + (theta / lam_n) * tmp_d


def step_mqtz(a, y, lam_n, theta, w, alpha, w_out, alpha_out, tmp_n, tmp_d):
    np.dot(a, alpha, out=tmp_d)
    w_out[:] = tmp_d / lam_n             # primal kept on the optimality relation
    np.dot(w_out, a, out=tmp_n)
    alpha_out[:] = (1.0 - theta) * alpha + theta * (y - tmp_n)


def step_mqtz2(a, y, lam_n, theta, w, alpha, w_out, alpha_out, tmp_n, tmp_d):
    np.dot(w, a, out=tmp_n)
    alpha_out[:] = y - tmp_n             # dual kept on the optimality relation
    np.dot(a, alpha_out, out=tmp_d)
    w_out[:] = (1.0 - theta) * w + (theta / lam_n) * tmp_d
