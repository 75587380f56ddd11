"""Exact propagation of fundamental solutions over piecewise-constant sigma.

The equation -(y')' + sigma' y = lambda y with quasi-derivative u = y' - sigma y
is the first-order system (y, u)' = A (y, u), A = [[sigma, 1], [-sigma^2-lambda,
-sigma]]. Since A^2 = -lambda I, the propagator over a constant-sigma segment of
length h is exactly phi0(lambda, h) I + phi1(lambda, h) A, where phi0, phi1 are
the entire-in-lambda cosine/sinc pair. Multiplying segment propagators gives the
endpoint values of the fundamental solutions C (state (1,0) at x=0) and S
(state (0,1)) with no discretization error beyond rounding.

All functions accept a scalar or ndarray lambda and are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import EdgeSpec

# Below this |lambda| h^2 the closed forms lose digits to the removable
# singularity of sin(rho h)/rho; a 5-term Taylor series is exact to ~1e-16.
SERIES_SWITCH = 1e-4


def phi_pair(lam, h: float):
    """The pair (phi0, phi1) with phi0 = cos(rho h), phi1 = sin(rho h)/rho.

    Here lambda = rho^2; negative lambda continues to cosh/sinh, and the
    lambda -> 0 limit is (1, h). Entire in lambda, hence even in rho.
    """
    lam_arr = np.asarray(lam, dtype=float)
    scalar = lam_arr.ndim == 0
    lam_arr = np.atleast_1d(lam_arr)
    z = lam_arr * (h * h)
    phi0 = np.empty_like(lam_arr)
    phi1 = np.empty_like(lam_arr)

    small = np.abs(z) <= SERIES_SWITCH
    pos = ~small & (lam_arr > 0)
    neg = ~small & (lam_arr < 0)

    rho = np.sqrt(lam_arr[pos])
    phi0[pos] = np.cos(rho * h)
    phi1[pos] = np.sin(rho * h) / rho
    kappa = np.sqrt(-lam_arr[neg])
    with np.errstate(over="ignore"):  # beyond kappa*h ~ 709 the honest value is inf
        phi0[neg] = np.cosh(kappa * h)
        phi1[neg] = np.sinh(kappa * h) / kappa
    zs = z[small]
    phi0[small] = 1.0 + zs * (-1.0 / 2 + zs * (1.0 / 24 + zs * (-1.0 / 720 + zs / 40320)))
    phi1[small] = h * (
        1.0 + zs * (-1.0 / 6 + zs * (1.0 / 120 + zs * (-1.0 / 5040 + zs / 362880)))
    )

    if scalar:
        return float(phi0[0]), float(phi1[0])
    return phi0, phi1


@dataclass(frozen=True)
class StateMatrix:
    """2x2 propagator acting on the state (y, y' - sigma y); det = 1."""

    a: object  # row 1: [a, b]
    b: object
    c: object  # row 2: [c, d]
    d: object

    def __matmul__(self, other: "StateMatrix") -> "StateMatrix":
        return StateMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def det(self):
        return self.a * self.d - self.b * self.c

    @staticmethod
    def identity() -> "StateMatrix":
        return StateMatrix(1.0, 0.0, 0.0, 1.0)


def step_matrix(sigma: float, h: float, lam) -> StateMatrix:
    """Propagator over one constant-sigma segment: phi0 I + phi1 A."""
    lam_arr = np.asarray(lam, dtype=float)
    lam_val = float(lam_arr) if lam_arr.ndim == 0 else lam_arr
    phi0, phi1 = phi_pair(lam_val, h)
    return StateMatrix(
        phi0 + phi1 * sigma,
        phi1,
        -phi1 * (sigma * sigma + lam_val),
        phi0 - phi1 * sigma,
    )


@dataclass(frozen=True)
class FundamentalSolution:
    """Endpoint values C, C^{[1]}, S, S^{[1]} at x = |e| for a given lambda."""

    C: object
    C1: object
    S: object
    S1: object

    def wronskian(self):
        return self.C * self.S1 - self.C1 * self.S


def fundamental_matrix(edge: EdgeSpec, lam, unit: float = 1.0) -> StateMatrix:
    """Ordered product of segment propagators; columns are (C, C1) and (S, S1)."""
    m = StateMatrix.identity()
    bp = edge.potential.breakpoints
    for sigma, lo, hi in zip(edge.potential.values, bp, bp[1:]):
        h = float(hi - lo) * unit
        m = step_matrix(sigma, h, lam) @ m
    return m


def fundamental_solutions(edge: EdgeSpec, lam, unit: float = 1.0) -> FundamentalSolution:
    m = fundamental_matrix(edge, lam, unit)
    return FundamentalSolution(C=m.a, C1=m.c, S=m.b, S1=m.d)
