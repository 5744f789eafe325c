"""Compiled inner loops for the geometry guard and the force model."""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _side(ox, oy, px, py, qx, qy, length, eps):
    c = (px - ox) * (qy - oy) - (py - oy) * (qx - ox)
    tol = eps * length
    if c > tol:
        return 1
    if c < -tol:
        return -1
    return 0


@njit(cache=True)
def _interior(px, py, qx, qy, length, rx, ry, eps):
    if length == 0.0:
        return False
    t = ((rx - px) * (qx - px) + (ry - py) * (qy - py)) / length
    return t > eps and t < length - eps


@njit(cache=True)
def seg_cross(a1x, a1y, a2x, a2y, b1x, b1y, b2x, b2y, eps):
    if max(a1x, a2x) < min(b1x, b2x) - eps or max(b1x, b2x) < min(a1x, a2x) - eps:
        return False
    if max(a1y, a2y) < min(b1y, b2y) - eps or max(b1y, b2y) < min(a1y, a2y) - eps:
        return False
    la = math.hypot(a2x - a1x, a2y - a1y)
    lb = math.hypot(b2x - b1x, b2y - b1y)
    if la == 0.0 and lb == 0.0:
        return False
    if la == 0.0:
        return _side(b1x, b1y, b2x, b2y, a1x, a1y, lb, eps) == 0 and _interior(b1x, b1y, b2x, b2y, lb, a1x, a1y, eps)
    if lb == 0.0:
        return _side(a1x, a1y, a2x, a2y, b1x, b1y, la, eps) == 0 and _interior(a1x, a1y, a2x, a2y, la, b1x, b1y, eps)
    s1 = _side(b1x, b1y, b2x, b2y, a1x, a1y, lb, eps)
    s2 = _side(b1x, b1y, b2x, b2y, a2x, a2y, lb, eps)
    s3 = _side(a1x, a1y, a2x, a2y, b1x, b1y, la, eps)
    s4 = _side(a1x, a1y, a2x, a2y, b2x, b2y, la, eps)
    if s1 * s2 < 0 and s3 * s4 < 0:
        return True
    if (s3 == 0 and s4 == 0) or (s1 == 0 and s2 == 0):
        ux = (a2x - a1x) / la
        uy = (a2y - a1y) / la
        t1 = (b1x - a1x) * ux + (b1y - a1y) * uy
        t2 = (b2x - a1x) * ux + (b2y - a1y) * uy
        overlap = min(la, max(t1, t2)) - max(0.0, min(t1, t2))
        return overlap > eps
    return (
        (s3 == 0 and _interior(a1x, a1y, a2x, a2y, la, b1x, b1y, eps))
        or (s4 == 0 and _interior(a1x, a1y, a2x, a2y, la, b2x, b2y, eps))
        or (s1 == 0 and _interior(b1x, b1y, b2x, b2y, lb, a1x, a1y, eps))
        or (s2 == 0 and _interior(b1x, b1y, b2x, b2y, lb, a2x, a2y, eps))
    )


@njit(cache=True)
def seg_cross_many(A1, A2, B1, B2, eps):
    k = A1.shape[0]
    out = np.zeros(k, dtype=np.bool_)
    for i in range(k):
        out[i] = seg_cross(A1[i, 0], A1[i, 1], A2[i, 0], A2[i, 1], B1[i, 0], B1[i, 1], B2[i, 0], B2[i, 1], eps)
    return out


# -- grid ----------------------------------------------------------------


@njit(cache=True)
def _cell(v, origin, cs, size):
    c = int(math.floor((v - origin) / cs))
    if c < 0:
        return 0
    if c >= size:
        return size - 1
    return c


@njit(cache=True)
def grid_build(P, S, margin, ox, oy, cs, nx, ny):
    m = S.shape[0]
    counts = np.zeros(nx * ny + 1, dtype=np.int64)
    for s in range(m):
        a, b = S[s, 0], S[s, 1]
        i0 = _cell(min(P[a, 0], P[b, 0]) - margin, ox, cs, nx)
        i1 = _cell(max(P[a, 0], P[b, 0]) + margin, ox, cs, nx)
        j0 = _cell(min(P[a, 1], P[b, 1]) - margin, oy, cs, ny)
        j1 = _cell(max(P[a, 1], P[b, 1]) + margin, oy, cs, ny)
        for i in range(i0, i1 + 1):
            for j in range(j0, j1 + 1):
                counts[i * ny + j + 1] += 1
    offsets = np.cumsum(counts)
    items = np.empty(offsets[-1], dtype=np.int64)
    cursor = offsets[:-1].copy()
    for s in range(m):
        a, b = S[s, 0], S[s, 1]
        i0 = _cell(min(P[a, 0], P[b, 0]) - margin, ox, cs, nx)
        i1 = _cell(max(P[a, 0], P[b, 0]) + margin, ox, cs, nx)
        j0 = _cell(min(P[a, 1], P[b, 1]) - margin, oy, cs, ny)
        j1 = _cell(max(P[a, 1], P[b, 1]) + margin, oy, cs, ny)
        for i in range(i0, i1 + 1):
            for j in range(j0, j1 + 1):
                c = i * ny + j
                items[cursor[c]] = s
                cursor[c] += 1
    return offsets, items


@njit(cache=True)
def touching(P, S, inc_ptr, inc_idx, i, x, y, offsets, items, ox, oy, cs, nx, ny, eps, stamp, token):
    """Does any edge of node i, with i placed at (x, y), cross a non-adjacent edge?"""
    for k in range(inc_ptr[i], inc_ptr[i + 1]):
        s = inc_idx[k]
        w = S[s, 1] if S[s, 0] == i else S[s, 0]
        wx = P[w, 0]
        wy = P[w, 1]
        token[0] += 1
        tk = token[0]
        i0 = _cell(min(x, wx), ox, cs, nx)
        i1 = _cell(max(x, wx), ox, cs, nx)
        j0 = _cell(min(y, wy), oy, cs, ny)
        j1 = _cell(max(y, wy), oy, cs, ny)
        for ci in range(i0, i1 + 1):
            for cj in range(j0, j1 + 1):
                c = ci * ny + cj
                for t in range(offsets[c], offsets[c + 1]):
                    s2 = items[t]
                    if stamp[s2] == tk:
                        continue
                    stamp[s2] = tk
                    a = S[s2, 0]
                    b = S[s2, 1]
                    if a == i or b == i or a == w or b == w:
                        continue
                    if seg_cross(x, y, wx, wy, P[a, 0], P[a, 1], P[b, 0], P[b, 1], eps):
                        return True
    return False


@njit(cache=True)
def apply_moves(P, D, S, inc_ptr, inc_idx, offsets, items, ox, oy, cs, nx, ny, eps, tries):
    """Move nodes in index order, skipping any move that would create a crossing.

    ``tries`` > 1 halves a rejected step and retries. Updates P in place and
    returns the number of accepted moves.
    """
    stamp = np.full(S.shape[0], -1, dtype=np.int64)
    token = np.zeros(1, dtype=np.int64)
    moved = 0
    for i in range(P.shape[0]):
        sx = D[i, 0]
        sy = D[i, 1]
        if sx == 0.0 and sy == 0.0:
            moved += 1
            continue
        for _ in range(tries):
            x = P[i, 0] + sx
            y = P[i, 1] + sy
            if not touching(P, S, inc_ptr, inc_idx, i, x, y, offsets, items, ox, oy, cs, nx, ny, eps, stamp, token):
                P[i, 0] = x
                P[i, 1] = y
                moved += 1
                break
            sx *= 0.5
            sy *= 0.5
    return moved


@njit(cache=True)
def crossing_pairs(P, S, offsets, items, ox, oy, cs, nx, ny, eps, out):
    """Crossing segment pairs; each pair is tested only in its reference cell.

    Writes up to ``len(out)`` pairs into ``out`` and returns the total count.
    """
    count = 0
    for ci in range(nx):
        for cj in range(ny):
            c = ci * ny + cj
            lo = offsets[c]
            hi = offsets[c + 1]
            for p in range(lo, hi):
                s = items[p]
                a, b = S[s, 0], S[s, 1]
                si0 = _cell(min(P[a, 0], P[b, 0]), ox, cs, nx)
                sj0 = _cell(min(P[a, 1], P[b, 1]), oy, cs, ny)
                for q in range(p + 1, hi):
                    t = items[q]
                    u, v = S[t, 0], S[t, 1]
                    if a == u or a == v or b == u or b == v:
                        continue
                    ti0 = _cell(min(P[u, 0], P[v, 0]), ox, cs, nx)
                    tj0 = _cell(min(P[u, 1], P[v, 1]), oy, cs, ny)
                    if max(si0, ti0) != ci or max(sj0, tj0) != cj:
                        continue
                    if seg_cross(P[a, 0], P[a, 1], P[b, 0], P[b, 1], P[u, 0], P[u, 1], P[v, 0], P[v, 1], eps):
                        if count < out.shape[0]:
                            out[count, 0] = min(s, t)
                            out[count, 1] = max(s, t)
                        count += 1
    return count


# -- forces --------------------------------------------------------------


@njit(cache=True)
def _pair_dir(i, j):
    # unit vector pushing i away from j when they coincide; antisymmetric
    lo = min(i, j)
    hi = max(i, j)
    h = ((lo * 73856093) ^ (hi * 19349663)) % 3600
    theta = h * (2.0 * math.pi / 3600.0)
    sgn = 1.0 if i < j else -1.0
    return sgn * math.cos(theta), sgn * math.sin(theta)


@njit(cache=True)
def forces(P, S, L, spring_k, radius, collision_k, repulse_k):
    n = P.shape[0]
    F = np.zeros((n, 2))
    if spring_k > 0.0:
        for s in range(S.shape[0]):
            a = S[s, 0]
            b = S[s, 1]
            dx = P[b, 0] - P[a, 0]
            dy = P[b, 1] - P[a, 1]
            d = math.hypot(dx, dy)
            if d > 0.0:
                ux = dx / d
                uy = dy / d
            else:
                px, py = _pair_dir(a, b)
                ux = -px
                uy = -py
            f = spring_k * (d - L[s]) / L[s]
            F[a, 0] += f * ux
            F[a, 1] += f * uy
            F[b, 0] -= f * ux
            F[b, 1] -= f * uy
    if repulse_k > 0.0 or collision_k > 0.0:
        for i in range(n):
            for j in range(i + 1, n):
                dx = P[i, 0] - P[j, 0]
                dy = P[i, 1] - P[j, 1]
                d = math.hypot(dx, dy)
                if d > 0.0:
                    ux = dx / d
                    uy = dy / d
                else:
                    ux, uy = _pair_dir(i, j)
                mag = 0.0
                if repulse_k > 0.0:
                    dd = max(d, 1e-9)
                    mag += repulse_k / (dd * dd)
                if collision_k > 0.0 and d < radius:
                    mag += collision_k * (radius - d) / radius
                F[i, 0] += mag * ux
                F[i, 1] += mag * uy
                F[j, 0] -= mag * ux
                F[j, 1] -= mag * uy
    return F
