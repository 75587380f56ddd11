"""Dense-scan root bracketing with even-order (tangential) zero detection."""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq, minimize_scalar

# A local minimum of |f| below DIP_FACTOR * scale triggers refinement; the
# refined minimum counts as a double root if below TOUCH_FACTOR * scale.
DIP_FACTOR = 1e-6
TOUCH_FACTOR = 1e-9
XTOL = 1e-12


def _refine_touch(fn, a: float, b: float, xm: float, sgn: float) -> float:
    """Sharpen a tangential root: minimizing |f| localizes the argmin only to
    ~sqrt(eps), so bracket the sign change of a central-difference derivative
    instead, which recovers ~1e-12 accuracy. The stencil width balances the
    O(h^2) cubic-term bias against the eps/h rounding noise."""
    h = (b - a) / 4096.0

    def g(x):
        return sgn * (fn(x + h) - fn(x - h))

    ga, gb = g(a), g(b)
    if ga < 0.0 < gb:
        return float(brentq(g, a, b, xtol=XTOL))
    return xm


def scan_roots(fn, lo: float, hi: float, n_points: int, values=None):
    """All roots of fn on [lo, hi] with multiplicity 1 (crossing) or 2 (touch).

    fn must accept scalars and ndarrays. Roots closer than ~1e-9 of the span
    are merged. Assumes at most two roots per scan cell (the cell size is the
    caller's resolution contract).
    """
    xs = np.linspace(lo, hi, n_points + 1)
    ys = np.asarray(fn(xs), dtype=float) if values is None else np.asarray(values, dtype=float)
    scale = float(np.max(np.abs(ys)))
    if scale == 0.0:
        raise ValueError("function is identically zero on the scan grid")
    roots: list[tuple[float, int]] = []

    def add(root: float, mult: int):
        for i, (r, m) in enumerate(roots):
            if abs(r - root) <= 1e-9 * max(1.0, hi - lo):
                roots[i] = (r, max(m, mult))
                return
        roots.append((root, mult))

    for i in range(n_points):
        a, b, fa, fb = xs[i], xs[i + 1], ys[i], ys[i + 1]
        if fa == 0.0:
            # Exact grid hit: tangential if the nonzero neighbors agree in sign.
            left = ys[i - 1] if i >= 1 else 0.0
            touch = left != 0.0 and fb != 0.0 and np.sign(left) == np.sign(fb)
            add(float(a), 2 if touch else 1)
            continue
        if fb == 0.0:
            continue  # picked up as the left endpoint of the next cell
        if fa * fb < 0.0:
            add(float(brentq(fn, a, b, xtol=XTOL)), 1)
    if ys[-1] == 0.0:
        add(float(xs[-1]), 1)

    # Tangential zeros and sub-cell root pairs: local minima of |f| with no
    # sign change across the three-point stencil.
    for i in range(1, n_points):
        f0, f1, f2 = ys[i - 1], ys[i], ys[i + 1]
        if f0 == 0.0 or f1 == 0.0 or f2 == 0.0:
            continue
        if not (np.sign(f0) == np.sign(f1) == np.sign(f2)):
            continue
        if not (abs(f1) <= abs(f0) and abs(f1) <= abs(f2)):
            continue
        # A tangential zero at offset <= step/2 from the stencil center dips to
        # |f| <= curvature * step^2 / 8; the second difference estimates that
        # curvature scale, so the test stays valid for any step size.
        curvature_bound = 0.75 * abs(f0 - 2.0 * f1 + f2)
        if abs(f1) > max(DIP_FACTOR * scale, curvature_bound):
            continue
        sgn = np.sign(f1)
        res = minimize_scalar(
            lambda x: sgn * fn(x),
            bounds=(float(xs[i - 1]), float(xs[i + 1])),
            method="bounded",
            options={"xatol": XTOL},
        )
        xm, fm = float(res.x), float(sgn * res.fun)
        if fm <= -TOUCH_FACTOR * scale:
            # Two simple roots hiding inside the stencil.
            add(float(brentq(fn, xs[i - 1], xm, xtol=XTOL)), 1)
            add(float(brentq(fn, xm, xs[i + 1], xtol=XTOL)), 1)
        elif abs(fm) <= TOUCH_FACTOR * scale:
            add(_refine_touch(fn, float(xs[i - 1]), float(xs[i + 1]), xm, sgn), 2)
    roots.sort(key=lambda rm: rm[0])
    return roots, scale
