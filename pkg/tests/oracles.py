"""Independent reference implementations used as test oracles.

Written in plain scalar Python (no numpy, no package helpers) so they do
not share code paths with the implementation under test.
"""

import math


def inertia(t, w_max, w_min, T):
    if t >= T:
        return w_min
    return w_max - (w_max - w_min) * (t / T)


def pso_velocity(w, v, x, pbest, social, c1, c2, r1, r2):
    return tuple(w * v[a] + c1 * r1 * (pbest[a] - x[a]) + c2 * r2 * (social[a] - x[a]) for a in range(2))


def mean_point(points):
    n = len(points)
    return (sum(p[0] for p in points) / n, sum(p[1] for p in points) / n)


def knn_brute(i, points, k):
    cand = []
    for j, p in enumerate(points):
        if j == i:
            continue
        d = (p[0] - points[i][0]) ** 2 + (p[1] - points[i][1]) ** 2
        cand.append((d, j))
    cand.sort()
    return [j for _, j in cand[:k]]


def covered_cells(n, lo, hi, usvs):
    """Set of (ix, iy) cells whose centre lies in some (x, y, r) disk."""
    w = (hi - lo) / n
    out = set()
    for ix in range(n):
        for iy in range(n):
            cx = lo + (ix + 0.5) * w
            cy = lo + (iy + 0.5) * w
            for x, y, r in usvs:
                if (cx - x) ** 2 + (cy - y) ** 2 <= r * r:
                    out.add((ix, iy))
                    break
    return out


def flee_step(target, pursuers, alpha):
    best, bd = 0, math.inf
    for j, p in enumerate(pursuers):
        d = math.hypot(target[0] - p[0], target[1] - p[1])
        if d < bd:
            best, bd = j, d
    p = pursuers[best]
    dx, dy = target[0] - p[0], target[1] - p[1]
    return (target[0] + alpha * dx / bd, target[1] + alpha * dy / bd)


def rank(xs):
    """Average ranks (1-based) with ties sharing the mean rank."""
    order = sorted(range(len(xs)), key=lambda i: xs[i])
    r = [0.0] * len(xs)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and xs[order[j + 1]] == xs[order[i]]:
            j += 1
        for m in range(i, j + 1):
            r[order[m]] = (i + j) / 2 + 1
        i = j + 1
    return r


def spearman(x, y):
    rx, ry = rank(x), rank(y)
    mx, my = sum(rx) / len(rx), sum(ry) / len(ry)
    num = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    den = math.sqrt(sum((a - mx) ** 2 for a in rx) * sum((b - my) ** 2 for b in ry))
    return 0.0 if den == 0 else num / den
