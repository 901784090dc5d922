"""Independent reference implementations used only by the tests."""

import math

import numpy as np


def simpson_adaptive(f, a, b, tol=1e-15, depth=60):
    """Plain recursive adaptive Simpson rule with Richardson correction."""

    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return rec(a, m, fa, flm, fm, left, tol / 2, depth - 1) + rec(m, b, fm, frm, fb, right, tol / 2, depth - 1)

    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    return rec(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, depth)


def erf_simpson(x):
    if x == 0:
        return 0.0
    s = simpson_adaptive(lambda u: math.exp(-u * u), 0.0, abs(x), tol=1e-16)
    return math.copysign(2.0 / math.sqrt(math.pi) * s, x)


def channel_mutual_info(p):
    """I(D; X) from the explicit 2x2 joint table of a uniform-input symmetric channel."""
    joint = np.array([[p / 2, (1 - p) / 2], [(1 - p) / 2, p / 2]])
    px = joint.sum(axis=1)
    py = joint.sum(axis=0)
    total = 0.0
    for i in range(2):
        for j in range(2):
            if joint[i, j] > 0:
                total += joint[i, j] * math.log(joint[i, j] / (px[i] * py[j]))
    return total
