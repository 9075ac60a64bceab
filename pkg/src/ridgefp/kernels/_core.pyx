# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-iteration step kernels (hot loops of the fixed-point solvers).

Mirrors ``ridgefp.kernels.pure``; see that module for the calling
convention.
"""


cdef void _mv(const double[:, ::1] a, const double[::1] x, double[::1] out) noexcept nogil:
    # out = A x
    cdef Py_ssize_t d = a.shape[0], n = a.shape[1], i, j
    cdef double s
    for i in range(d):
        s = 0.0
        for j in range(n):
            s += a[i, j] * x[j]
        out[i] = s


cdef void _mtv(const double[:, ::1] a, const double[::1] x, double[::1] out) noexcept nogil:
    # out = A^T x, traversing A row-major
    cdef Py_ssize_t d = a.shape[0], n = a.shape[1], i, j
    cdef double xi
    for j in range(n):
        out[j] = 0.0
    for i in range(d):
        xi = x[i]
        for j in range(n):
            out[j] += a[i, j] * xi


def step_pdfp1(const double[:, ::1] a, const double[::1] y, const double[::1] ay,
               double lam_n, double theta,
               const double[::1] w, const double[::1] alpha,
               double[::1] w_out, double[::1] alpha_out,
               double[::1] tmp_n, double[::1] tmp_d):
    cdef Py_ssize_t d = a.shape[0], n = a.shape[1], i, j
    cdef double omt = 1.0 - theta, tln = theta / lam_n
    with nogil:
        _mtv(a, w, tmp_n)
        _mv(a, tmp_n, tmp_d)
        for i in range(d):
            w_out[i] = omt * w[i] + tln * (ay[i] - tmp_d[i])
        _mv(a, alpha, tmp_d)
        _mtv(a, tmp_d, tmp_n)
        for j in range(n):
            alpha_out[j] = omt * alpha[j] + theta * (y[j] - tmp_n[j] / lam_n)


def step_pdfp2(const double[:, ::1] a, const double[::1] y,
               double lam_n, double theta,
               const double[::1] w, const double[::1] alpha,
               double[::1] w_out, double[::1] alpha_out,
               double[::1] tmp_n, double[::1] tmp_d):
    cdef Py_ssize_t d = a.shape[0], n = a.shape[1], i, j
    cdef double omt = 1.0 - theta, tln = theta / lam_n
    with nogil:
        _mv(a, alpha, tmp_d)
        _mtv(a, w, tmp_n)
        for i in range(d):
            w_out[i] = omt * w[i] + tln * tmp_d[i]
        for j in range(n):
            alpha_out[j] = omt * alpha[j] + theta * (y[j] - tmp_n[j])


def step_qtz(const double[:, ::1] a, const double[::1] y,
             double lam_n, double theta,
             const double[::1] w, const double[::1] alpha,
             double[::1] w_out, double[::1] alpha_out,
             double[::1] tmp_n, double[::1] tmp_d):
    cdef Py_ssize_t d = a.shape[0], n = a.shape[1], i, j
    cdef double omt = 1.0 - theta, tln = theta / lam_n
    with nogil:
        _mv(a, alpha, tmp_d)
        for i in range(d):
            w_out[i] = omt * w[i] + tln * tmp_d[i]
        _mtv(a, w_out, tmp_n)
        for j in range(n):
            alpha_out[j] = omt * alpha[j] + theta * (y[j] - tmp_n[j])


def step_nqtz(const double[:, ::1] a, const double[::1] y,
              double lam_n, double theta,
              const double[::1] w, const double[::1] alpha,
              double[::1] w_out, double[::1] alpha_out,
              double[::1] tmp_n, double[::1] tmp_d):
    cdef Py_ssize_t d = a.shape[0], n = a.shape[1], i, j
    cdef double omt = 1.0 - theta, tln = theta / lam_n
    with nogil:
        _mtv(a, w, tmp_n)
        for j in range(n):
            alpha_out[j] = omt * alpha[j] + theta * (y[j] - tmp_n[j])
        _mv(a, alpha_out, tmp_d)
        for i in range(d):
            w_out[i] = omt * w[i] + tln * tmp_d[i]


def step_mqtz(const double[:, ::1] a, const double[::1] y,
              double lam_n, double theta,
              const double[::1] w, const double[::1] alpha,
              double[::1] w_out, double[::1] alpha_out,
              double[::1] tmp_n, double[::1] tmp_d):
    cdef Py_ssize_t d = a.shape[0], n = a.shape[1], i, j
    cdef double omt = 1.0 - theta
    with nogil:
        _mv(a, alpha, tmp_d)
        for i in range(d):
            w_out[i] = tmp_d[i] / lam_n
        _mtv(a, w_out, tmp_n)
        for j in range(n):
            alpha_out[j] = omt * alpha[j] + theta * (y[j] - tmp_n[j])


def step_mqtz2(const double[:, ::1] a, const double[::1] y,
               double lam_n, double theta,
               const double[::1] w, const double[::1] alpha,
               double[::1] w_out, double[::1] alpha_out,
               double[::1] tmp_n, double[::1] tmp_d):
    cdef Py_ssize_t d = a.shape[0], n = a.shape[1], i, j
    cdef double omt = 1.0 - theta, tln = theta / lam_n
    with nogil:
        _mtv(a, w, tmp_n)
        for j in range(n):
            alpha_out[j] = y[j] - tmp_n[j]
        _mv(a, alpha_out, tmp_d)
        for i in range(d):
            w_out[i] = omt * w[i] + tln * tmp_d[i]
