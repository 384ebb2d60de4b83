"""Exact areas for unions and convex hulls of planar disks.

Both areas come from Green's theorem applied to boundaries made of circular arcs
and (for the hull) common tangent segments.
"""
from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi


def _arc_integral(c, r, t0, t1) -> float:
    """(1/2) * integral of (x dy - y dx) along c + r*(cos t, sin t), t0 -> t1."""
    return 0.5 * (r * (c[0] * (np.sin(t1) - np.sin(t0)) + c[1] * (np.cos(t0) - np.cos(t1))) + r * r * (t1 - t0))


def _merge(intervals):
    intervals = sorted(intervals)
    out: list[list[float]] = []
    for a, b in intervals:
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return out


def disk_union_area(centers, radii) -> float:
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    radii = np.asarray(radii, dtype=float).reshape(-1)
    n = len(radii)
    total = 0.0
    for i in range(n):
        ci, ri = centers[i], radii[i]
        covered = []
        hidden = False
        for j in range(n):
            if j == i:
                continue
            cj, rj = centers[j], radii[j]
            d = float(np.hypot(*(cj - ci)))
            if d + ri <= rj and (d + ri < rj or d > 0 or j < i):
                # disk i inside disk j (identical disks: keep the lowest index)
                hidden = True
                break
            if d >= ri + rj or d + rj <= ri:
                continue
            phi = np.arctan2(cj[1] - ci[1], cj[0] - ci[0])
            alpha = np.arccos(np.clip((ri * ri + d * d - rj * rj) / (2 * ri * d), -1.0, 1.0))
            a, b = np.mod(phi - alpha, TWO_PI), np.mod(phi - alpha, TWO_PI) + 2 * alpha
            if b > TWO_PI:
                covered += [(a, TWO_PI), (0.0, b - TWO_PI)]
            else:
                covered.append((a, b))
        if hidden:
            continue
        t = 0.0
        for a, b in _merge(covered):
            if a > t:
                total += _arc_integral(ci, ri, t, a)
            t = max(t, b)
        if t < TWO_PI:
            total += _arc_integral(ci, ri, t, TWO_PI)
    return float(total)


def disk_hull_support(centers, radii, theta) -> np.ndarray:
    """Support function of conv(union of disks) at angle(s) ``theta``."""
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    radii = np.asarray(radii, dtype=float).reshape(-1)
    u = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    return (np.atleast_2d(u) @ centers.T + radii).max(axis=1)


def disk_hull_area(centers, radii) -> float:
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    radii = np.asarray(radii, dtype=float).reshape(-1)
    n = len(radii)
    breaks = [0.0, TWO_PI]
    for i in range(n):
        for j in range(i + 1, n):
            d = centers[i] - centers[j]
            nd = float(np.hypot(*d))
            c = radii[j] - radii[i]
            if nd == 0.0 or abs(c) > nd:
                continue
            phi = np.arctan2(d[1], d[0])
            al = np.arccos(np.clip(c / nd, -1.0, 1.0))
            breaks += [np.mod(phi + al, TWO_PI), np.mod(phi - al, TWO_PI)]
    breaks = np.unique(np.array(breaks))
    mids = 0.5 * (breaks[:-1] + breaks[1:])
    u = np.stack([np.cos(mids), np.sin(mids)], axis=1)
    owner = np.argmax(u @ centers.T + radii, axis=1)
    # merge consecutive pieces owned by the same disk
    pieces = []
    for a, b, k in zip(breaks[:-1], breaks[1:], owner):
        if pieces and pieces[-1][2] == k:
            pieces[-1][1] = b
        else:
            pieces.append([a, b, k])
    if len(pieces) > 1 and pieces[0][2] == pieces[-1][2]:
        first = pieces.pop(0)
        pieces[-1][1] = first[1] + TWO_PI
    total = 0.0
    m = len(pieces)
    for idx, (a, b, k) in enumerate(pieces):
        total += _arc_integral(centers[k], radii[k], a, b)
        if m > 1:
            k2 = pieces[(idx + 1) % m][2]
            ub = np.array([np.cos(b), np.sin(b)])
            p = centers[k] + radii[k] * ub
            q = centers[k2] + radii[k2] * ub
            total += 0.5 * (p[0] * q[1] - p[1] * q[0])
    return float(total)
