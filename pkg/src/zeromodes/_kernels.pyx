# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled RK4 shooting kernels for the real form of the zero-energy Dirac system.

With psi_A = u and psi_B = -i w the system is real::

    u' =  k u - V w
    w' =  V u - k w

``v_half`` holds V on the half-step grid: ``v_half[2j] = V(x_j)`` and
``v_half[2j + 1] = V(x_j + h/2)``.
"""
import numpy as np

from libc.math cimport fabs, log, sqrt

cdef double RENORM = 1e50


cdef inline void _step(double k, double v0, double vh, double v1, double h,
                       double* u, double* w) noexcept nogil:
    cdef double u0 = u[0], w0 = w[0]
    cdef double k1u = k * u0 - v0 * w0
    cdef double k1w = v0 * u0 - k * w0
    cdef double ut = u0 + 0.5 * h * k1u, wt = w0 + 0.5 * h * k1w
    cdef double k2u = k * ut - vh * wt
    cdef double k2w = vh * ut - k * wt
    ut = u0 + 0.5 * h * k2u
    wt = w0 + 0.5 * h * k2w
    cdef double k3u = k * ut - vh * wt
    cdef double k3w = vh * ut - k * wt
    ut = u0 + h * k3u
    wt = w0 + h * k3w
    cdef double k4u = k * ut - v1 * wt
    cdef double k4w = v1 * ut - k * wt
    u[0] = u0 + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
    w[0] = w0 + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)


cdef inline void _renorm(double* u, double* w) noexcept nogil:
    cdef double m = fabs(u[0]) if fabs(u[0]) > fabs(w[0]) else fabs(w[0])
    if m > RENORM:
        u[0] /= m
        w[0] /= m


cdef double _match_one(double k, const double[::1] v, double h, Py_ssize_t n_nodes,
                       Py_ssize_t i_match, double v_left, double v_right) noexcept nogil:
    cdef double kap_l = sqrt(k * k - v_left * v_left)
    cdef double kap_r = sqrt(k * k - v_right * v_right)
    cdef double ul = k + kap_l, wl = v_left
    cdef double ur = v_right, wr = k + kap_r
    cdef Py_ssize_t j
    for j in range(i_match):
        _step(k, v[2 * j], v[2 * j + 1], v[2 * j + 2], h, &ul, &wl)
        _renorm(&ul, &wl)
    for j in range(n_nodes - 1, i_match, -1):
        _step(k, v[2 * j], v[2 * j - 1], v[2 * j - 2], -h, &ur, &wr)
        _renorm(&ur, &wr)
    return (ul * wr - wl * ur) / (sqrt(ul * ul + wl * wl) * sqrt(ur * ur + wr * wr))


def matching_function(double[::1] ks, const double[::1] v_half, double h,
                      Py_ssize_t i_match, double v_left, double v_right):
    """Normalised matching determinant at node ``i_match`` for each k."""
    cdef Py_ssize_t n_nodes = (v_half.shape[0] + 1) // 2
    cdef Py_ssize_t i, m = ks.shape[0]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] res = out
    with nogil:
        for i in range(m):
            res[i] = _match_one(ks[i], v_half, h, n_nodes, i_match, v_left, v_right)
    return out


def integrate_path(double k, const double[::1] v_half, double h,
                   Py_ssize_t i_match, double v_left, double v_right):
    """Left and right shooting solutions on every node.

    Returns ``(u, w, log_scale, right_at_match)``. Nodes ``<= i_match`` hold
    the left solution, nodes ``> i_match`` the right one; the true amplitude at
    node j is ``(u[j], w[j]) * exp(log_scale[j])`` up to one constant per side.
    ``right_at_match`` is ``(u, w, log_scale)`` of the right solution at
    ``i_match``.
    """
    cdef Py_ssize_t n_nodes = (v_half.shape[0] + 1) // 2
    u_arr = np.empty(n_nodes)
    w_arr = np.empty(n_nodes)
    s_arr = np.zeros(n_nodes)
    cdef double[::1] uo = u_arr, wo = w_arr, so = s_arr
    cdef double kap_l = sqrt(k * k - v_left * v_left)
    cdef double kap_r = sqrt(k * k - v_right * v_right)
    cdef double u = k + kap_l, w = v_left, scale = 0.0, m
    cdef Py_ssize_t j
    with nogil:
        uo[0] = u
        wo[0] = w
        for j in range(i_match):
            _step(k, v_half[2 * j], v_half[2 * j + 1], v_half[2 * j + 2], h, &u, &w)
            m = fabs(u) if fabs(u) > fabs(w) else fabs(w)
            if m > RENORM:
                u /= m
                w /= m
                scale += log(m)
            uo[j + 1] = u
            wo[j + 1] = w
            so[j + 1] = scale
        u = v_right
        w = k + kap_r
        scale = 0.0
        uo[n_nodes - 1] = u
        wo[n_nodes - 1] = w
        for j in range(n_nodes - 1, i_match, -1):
            _step(k, v_half[2 * j], v_half[2 * j - 1], v_half[2 * j - 2], -h, &u, &w)
            m = fabs(u) if fabs(u) > fabs(w) else fabs(w)
            if m > RENORM:
                u /= m
                w /= m
                scale += log(m)
            if j - 1 > i_match:
                uo[j - 1] = u
                wo[j - 1] = w
                so[j - 1] = scale
    return u_arr, w_arr, s_arr, (u, w, scale)
