"""Recovery of characteristic functions from spectra alone.

The infinite product over the catalog is evaluated in the ratio form

    recovered(lambda) = d0(lambda) * prod (lambda_nk - lambda) / (lambda0_nk - lambda),

which multiplies the free characteristic function by one factor per catalog
entry. Each truncated tail factor is 1 + O(eps/n), so finite truncations are
stable, and the lambda -> -infinity normalization is inherited from d0. The
raw product with 1/lambda0_nk normalization is algebraically the same in the
full limit but its partial products diverge; it is not used.

Entries whose perturbed eigenvalue equals its grid point contribute exactly 1,
so the zero of order mu0 at lambda = 0 (and every unmoved doubled lattice
eigenvalue) is carried by d0 itself. Grid points within tolerance of a grid
eigenvalue lambda0_nk are flagged and skipped: the factor is singular there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLeadingTerm, InsufficientCatalog
from .spectrum import SpectrumCatalog
from .trigpoly import AsymptoticFrame

# Spec'd snaps: eigenvalues within SNAP_ZERO of 0 count as the zero eigenvalue;
# grid points within GRID_EIG_TOL of a lambda0_nk are flagged singular.
SNAP_ZERO = 1e-12
GRID_EIG_TOL = 1e-10


def regularize_eigenvalue(lam: float) -> float:
    """lambda itself, or 1 for the (snapped) zero eigenvalue."""
    return 1.0 if abs(lam) < SNAP_ZERO else float(lam)


def leading_constant(frame: AsymptoticFrame) -> float:
    """(-1)^mu0 times the mu0-th lambda-derivative of d0 at 0 (nonzero by mu0)."""
    val = frame.lambda_deriv_at_zero(frame.mu0)
    scale = max(frame.poly.deriv_scale(0), 1e-300)
    if abs(val) < 1e-12 * scale:
        raise DegenerateLeadingTerm(
            f"mu0-th derivative {val} vanishes at lambda = 0; mu0 = {frame.mu0} is wrong upstream"
        )
    return (-1.0) ** frame.mu0 * val


@dataclass(frozen=True)
class ReconstructionResult:
    grid: np.ndarray
    values: np.ndarray  # NaN at flagged points
    flagged: np.ndarray  # True where the grid point sits on the unperturbed grid
    n_max: int
    leading_const: float
    error_vs_direct: np.ndarray | None = None


def _truncation_entries(catalog: SpectrumCatalog, frame: AsymptoticFrame, n_max: int):
    if not catalog.covers_truncation(n_max):
        raise InsufficientCatalog(
            f"catalog (rho_max = {catalog.rho_max}) does not cover |n| <= {n_max}"
        )
    wanted = {}
    for fam in frame.families:
        for n in fam.n_values_truncation(n_max):
            wanted[(fam.index, n)] = True
    picked = [e for e in catalog.entries if (e.k, e.n) in wanted]
    # Near-cancelling factor pairs first: ascending |n|, families interleaved.
    picked.sort(key=lambda e: (abs(e.n), e.k, e.n))
    return picked


def hadamard_reconstruct(
    catalog: SpectrumCatalog,
    grid,
    n_max: int,
    frame: AsymptoticFrame | None = None,
) -> ReconstructionResult:
    """Evaluate the ratio-form product over all catalog entries with |n| <= n_max."""
    frame = frame or catalog.frame
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    entries = _truncation_entries(catalog, frame, n_max)

    values = np.asarray(frame.eval_lambda(grid), dtype=float).copy()
    flagged = np.zeros(grid.shape, dtype=bool)
    for e in entries:
        lam0 = e.rho0 * e.rho0
        flagged |= np.abs(grid - lam0) < GRID_EIG_TOL
    for e in entries:
        if abs(e.lam - e.rho0 * e.rho0) <= SNAP_ZERO:
            continue  # unmoved eigenvalue: factor is exactly 1
        lam0 = e.rho0 * e.rho0
        with np.errstate(divide="ignore", invalid="ignore"):
            values *= (e.lam - grid) / (lam0 - grid)
    values[flagged] = np.nan
    return ReconstructionResult(
        grid=grid,
        values=values,
        flagged=flagged,
        n_max=n_max,
        leading_const=leading_constant(frame),
    )


def reconstruction_ratio(
    catalog: SpectrumCatalog,
    lam,
    n_max: int,
    frame: AsymptoticFrame | None = None,
):
    """The bare factor product: recovered over free characteristic function.

    Unlike evaluating the two functions separately, the ratio stays inside
    float range at deeply negative lambda, where each function alone grows
    like exp(sqrt(|lambda|) * total length).
    """
    frame = frame or catalog.frame
    entries = _truncation_entries(catalog, frame, n_max)
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=float))
    out = np.ones_like(lam_arr)
    for e in entries:
        lam0 = e.rho0 * e.rho0
        if abs(e.lam - lam0) <= SNAP_ZERO:
            continue
        out *= (e.lam - lam_arr) / (lam0 - lam_arr)
    if np.ndim(lam) == 0:
        return float(out[0])
    return out


@dataclass(frozen=True)
class ErrorReport:
    grid: np.ndarray
    recovered: np.ndarray
    direct: np.ndarray
    rel_error: np.ndarray  # NaN at flagged/skipped points
    max_rel: float
    median_rel: float

    def to_csv(self) -> str:
        lines = ["lambda,delta_hat,delta_direct,rel_error"]
        for lam, rec, dr, err in zip(self.grid, self.recovered, self.direct, self.rel_error):
            lines.append(f"{float(lam)!r},{float(rec)!r},{float(dr)!r},{float(err)!r}")
        return "\n".join(lines) + "\n"


def compare(result: ReconstructionResult, direct) -> ErrorReport:
    """Per-point relative error of the reconstruction against a direct evaluation."""
    direct_vals = np.asarray(
        direct(result.grid) if callable(direct) else direct, dtype=float
    )
    rel = np.full(result.grid.shape, np.nan)
    ok = ~result.flagged & np.isfinite(result.values) & (np.abs(direct_vals) > 0)
    rel[ok] = np.abs(result.values[ok] - direct_vals[ok]) / np.abs(direct_vals[ok])
    finite = rel[np.isfinite(rel)]
    max_rel = float(np.max(finite)) if finite.size else float("nan")
    median_rel = float(np.median(finite)) if finite.size else float("nan")
    return ErrorReport(result.grid, result.values, direct_vals, rel, max_rel, median_rel)


def convergence_table(
    catalog: SpectrumCatalog,
    grid,
    direct,
    n_maxes=(25, 50, 100, 200),
    frame: AsymptoticFrame | None = None,
) -> list[tuple[int, float]]:
    """Max relative error for each truncation depth (diagnosing convergence)."""
    out = []
    for n_max in n_maxes:
        report = compare(hadamard_reconstruct(catalog, grid, n_max, frame), direct)
        out.append((n_max, report.max_rel))
    return out


def result_to_csv(result: ReconstructionResult, direct=None) -> str:
    if direct is None:
        lines = ["lambda,delta_hat"]
        for lam, rec in zip(result.grid, result.values):
            lines.append(f"{float(lam)!r},{float(rec)!r}")
        return "\n".join(lines) + "\n"
    report = compare(result, direct)
    return report.to_csv()
