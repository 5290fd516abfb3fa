"""Pure-numpy fallback for :mod:`zeromodes._kernels` (same signatures).

``matching_function`` vectorises over k; ``integrate_path`` is a plain loop.
"""
import math

import numpy as np

RENORM = 1e50


def _step(k, v0, vh, v1, h, u, w):
    k1u = k * u - v0 * w
    k1w = v0 * u - k * w
    ut = u + 0.5 * h * k1u
    wt = w + 0.5 * h * k1w
    k2u = k * ut - vh * wt
    k2w = vh * ut - k * wt
    ut = u + 0.5 * h * k2u
    wt = w + 0.5 * h * k2w
    k3u = k * ut - vh * wt
    k3w = vh * ut - k * wt
    ut = u + h * k3u
    wt = w + h * k3w
    k4u = k * ut - v1 * wt
    k4w = v1 * ut - k * wt
    return (u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
            w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w))


def _renorm(u, w):
    m = np.maximum(np.abs(u), np.abs(w))
    big = m > RENORM
    if np.any(big):
        m = np.where(big, m, 1.0)
        u = u / m
        w = w / m
    return u, w


def matching_function(ks, v_half, h, i_match, v_left, v_right):
    ks = np.asarray(ks, dtype=float)
    v = np.asarray(v_half, dtype=float)
    n_nodes = (v.shape[0] + 1) // 2
    ul = ks + np.sqrt(ks * ks - v_left * v_left)
    wl = np.full_like(ks, v_left)
    for j in range(i_match):
        ul, wl = _step(ks, v[2 * j], v[2 * j + 1], v[2 * j + 2], h, ul, wl)
        ul, wl = _renorm(ul, wl)
    ur = np.full_like(ks, v_right)
    wr = ks + np.sqrt(ks * ks - v_right * v_right)
    for j in range(n_nodes - 1, i_match, -1):
        ur, wr = _step(ks, v[2 * j], v[2 * j - 1], v[2 * j - 2], -h, ur, wr)
        ur, wr = _renorm(ur, wr)
    return (ul * wr - wl * ur) / (np.hypot(ul, wl) * np.hypot(ur, wr))


def integrate_path(k, v_half, h, i_match, v_left, v_right):
    v = np.asarray(v_half, dtype=float).tolist()
    n_nodes = (len(v) + 1) // 2
    u_arr = np.empty(n_nodes)
    w_arr = np.empty(n_nodes)
    s_arr = np.zeros(n_nodes)
    u, w, scale = k + math.sqrt(k * k - v_left * v_left), v_left, 0.0
    u_arr[0], w_arr[0] = u, w
    for j in range(i_match):
        u, w = _step(k, v[2 * j], v[2 * j + 1], v[2 * j + 2], h, u, w)
        m = max(abs(u), abs(w))
        if m > RENORM:
            u, w, scale = u / m, w / m, scale + math.log(m)
        u_arr[j + 1], w_arr[j + 1], s_arr[j + 1] = u, w, scale
    u, w, scale = v_right, k + math.sqrt(k * k - v_right * v_right), 0.0
    u_arr[-1], w_arr[-1] = u, w
    for j in range(n_nodes - 1, i_match, -1):
        u, w = _step(k, v[2 * j], v[2 * j - 1], v[2 * j - 2], -h, u, w)
        m = max(abs(u), abs(w))
        if m > RENORM:
            u, w, scale = u / m, w / m, scale + math.log(m)
        if j - 1 > i_match:
            u_arr[j - 1], w_arr[j - 1], s_arr[j - 1] = u, w, scale
    return u_arr, w_arr, s_arr, (u, w, scale)
