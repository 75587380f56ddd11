"""Eigenvalue extraction and the (n, k) catalog against the unperturbed grid.

Eigenvalues are zeros of d(rho) = charfn(rho^2, problem), found by dense scan
with sign-change bracketing plus tangential-zero detection. A zero of d at
rho = 0 (even order 2m in rho) is the lambda = 0 eigenvalue of multiplicity m.
Perturbations can push the lambda ~ 0 group below zero where no real rho
exists, so a separate sweep locates negative eigenvalues directly in lambda.

Cataloging assigns every root (counted with multiplicity) to the nearest
unperturbed grid point within half the minimal grid gap; the assignment must
be a bijection onto the grid restricted to rho <= rho_max, otherwise the scan
or the assignment is reported as failed rather than silently patched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ._rootscan import scan_roots
from .charfn import charfn_for
from .errors import AssignmentAmbiguity, ScanResolutionTooCoarse, UnresolvedMultiplicity
from .graph import Problem, ValidatedGraph, validate
from .trigpoly import AsymptoticFrame, build_frame

# |d(0)| below this fraction of the scan scale marks rho = 0 as a root.
ZERO_VALUE_TOL = 1e-9
SCAN_POINTS_PER_PERIOD = 200
# |rho - rho0| below the refiners' localization accuracy counts as exact.
EPS_SNAP = 1e-9


def _scan_step(frame: AsymptoticFrame) -> float:
    fmax = frame.poly.max_freq()
    return min(frame.tau / SCAN_POINTS_PER_PERIOD, math.pi / (8.0 * fmax))


def _zero_root_multiplicity(d, step: float, scale: float) -> int:
    """Even rho-order of d at 0 by log-ratio of d on a shrinking stencil."""
    h1, h2 = step / 2.0, step / 4.0
    v1, v2 = d(h1), d(h2)
    if v2 == 0.0 or v1 / v2 <= 0.0:
        raise UnresolvedMultiplicity("cannot estimate the order of the zero at rho = 0")
    est = math.log2(abs(v1 / v2))
    mult = round(est)
    if abs(est - mult) > 0.35 or mult < 2 or mult % 2:
        raise UnresolvedMultiplicity(
            f"order estimate {est:.3f} at rho = 0 is not a clean even integer"
        )
    return mult


def find_eigenvalues(graph, problem: Problem, rho_max: float, frame: AsymptoticFrame | None = None):
    """All zeros of d(rho) on [0, rho_max] as (rho, multiplicity) pairs.

    Multiplicity is the rho-order: sign-change roots are simple, tangential
    roots double, and a root at rho = 0 carries its even order (twice the
    lambda-multiplicity of the zero eigenvalue).
    """
    graph = validate(graph)
    problem.check(graph)
    if rho_max <= 0:
        return []
    if frame is None:
        frame = build_frame(graph, problem)

    def d(rho):
        return charfn_for(graph, problem, np.asarray(rho, dtype=float) ** 2)

    step = _scan_step(frame)
    n_points = int(math.ceil(rho_max / step))
    roots, scale = scan_roots(d, 0.0, rho_max, n_points)

    out = []
    margin = 1e-8 * max(1.0, rho_max)
    if abs(d(0.0)) <= ZERO_VALUE_TOL * scale:
        out.append((0.0, _zero_root_multiplicity(d, step, scale)))
    for rho, mult in roots:
        if rho <= margin:
            continue  # the rho = 0 zero is classified above, in lambda terms
        out.append((float(rho), mult))
    return out


def negative_eigenvalues(graph, problem: Problem, lam_floor: float | None = None):
    """Zeros of the characteristic function on [lam_floor, 0), ascending."""
    graph = validate(graph)
    problem.check(graph)
    if lam_floor is None:
        s = graph.max_abs_sigma
        lam_floor = -4.0 * (1.0 + 2.0 * s) ** 2

    def f(lam):
        return charfn_for(graph, problem, lam)

    # Uniform coverage of the well depth plus log refinement toward 0.
    grid = np.concatenate(
        [
            np.linspace(lam_floor, lam_floor * 1e-3, 600),
            -np.logspace(math.log10(-lam_floor * 1e-3), -12, 200),
        ]
    )
    grid = np.sort(grid)
    vals = f(grid)
    roots = []
    for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
        if fa == 0.0:
            roots.append(float(a))
        elif fa * fb < 0.0:
            roots.append(float(brentq(f, a, b, xtol=1e-14, rtol=8.9e-16)))
    return roots


@dataclass(frozen=True)
class CatalogEntry:
    n: int
    k: int
    lam: float
    rho: float
    rho0: float
    eps: float
    multiplicity: int


@dataclass(frozen=True)
class SpectrumCatalog:
    """Roots assigned to the (n, k) grid, with deviations eps = rho - rho0.

    window_violations lists low-spectrum entries whose deviation exceeds the
    assignment window; the bijective count keeps their pairing well-defined.
    """

    entries: tuple[CatalogEntry, ...]
    frame: AsymptoticFrame
    rho_max: float
    problem_label: str = "L"
    window_violations: tuple[CatalogEntry, ...] = ()

    def family(self, k: int) -> list[CatalogEntry]:
        sub = [e for e in self.entries if e.k == k]
        sub.sort(key=lambda e: (abs(e.n), e.n))
        return sub

    def lambdas(self) -> list[float]:
        return sorted(e.lam for e in self.entries)

    def covers_truncation(self, n_max: int) -> bool:
        have = {(e.k, e.n) for e in self.entries}
        for fam in self.frame.families:
            for n in fam.n_values_truncation(n_max):
                if (fam.index, n) not in have:
                    return False
        return True


def catalog_spectrum(
    graph,
    eigs,
    frame: AsymptoticFrame,
    rho_max: float,
    negatives=(),
    problem_label: str = "L",
) -> SpectrumCatalog:
    """Bijectively assign roots (with multiplicity) to grid slots rho0 <= rho_max.

    eigs must cover [0, rho_max + window]; negatives are lambda < 0 roots,
    entering at rho = sqrt(max(lambda, 0)) = 0 toward the n = 0 zero-family
    slots. Raises ScanResolutionTooCoarse on missing roots and
    AssignmentAmbiguity when a root falls outside every window.
    """
    slots = frame.slots(rho_max)
    window = frame.window()

    items: list[tuple[float, float, int]] = []  # (rho_for_matching, lambda, root mult)
    for lam in sorted(negatives):
        items.append((0.0, float(lam), 1))
    for rho, mult in eigs:
        if rho == 0.0:
            if mult % 2:
                raise UnresolvedMultiplicity(f"odd rho-order {mult} at rho = 0")
            for _ in range(mult // 2):
                items.append((0.0, 0.0, mult))
        else:
            for _ in range(mult):
                items.append((float(rho), float(rho) ** 2, mult))
    items.sort(key=lambda t: (t[0], t[1]))

    if slots:
        cutoff = slots[-1][2] + window
        items = [it for it in items if it[0] <= cutoff]
    if len(items) < len(slots):
        raise ScanResolutionTooCoarse(
            f"found {len(items)} roots for {len(slots)} grid points on [0, {rho_max}]"
        )
    if len(items) > len(slots):
        extra = [round(it[0], 6) for it in items[len(slots):]]
        raise AssignmentAmbiguity(
            f"{len(items)} roots for {len(slots)} grid points; unmatched roots near {extra}"
        )

    entries = []
    violations = []
    # Deviations shrink like (potential scale) / rho, so the strict window is
    # only meaningful beyond rho ~ sigma_max / window; below that, deviations
    # at the window scale are genuine perturbation effects, not scan failures.
    sigma_max = validate(graph).max_abs_sigma
    low_spectrum = max(2.0 * frame.tau, 2.0 * sigma_max / max(window, 1e-12))
    for (k, n, rho0), (rho, lam, mult) in zip(slots, items):
        outside = lam >= 0.0 and abs(rho - rho0) > window
        if outside and rho0 > low_spectrum:
            raise AssignmentAmbiguity(
                f"root rho = {rho} is {abs(rho - rho0):.3e} from its nearest grid point "
                f"rho0 = {rho0} (window {window:.3e})"
            )
        # Negative roots continue the lowest grid branches below lambda = 0
        # where no rho-window applies; for them and for low-spectrum outliers
        # the count bijection and the sorted pairing are the guard.
        if lam >= 0.0 and abs(rho - rho0) <= EPS_SNAP:
            # Deviations below root-localization precision snap to the grid.
            rho, lam = rho0, rho0 * rho0
        entry = CatalogEntry(
            n=n, k=k, lam=lam, rho=rho, rho0=rho0, eps=rho - rho0, multiplicity=mult
        )
        entries.append(entry)
        if outside:
            violations.append(entry)
    entries.sort(key=lambda e: (e.rho0, e.k, e.n))
    return SpectrumCatalog(tuple(entries), frame, rho_max, problem_label, tuple(violations))


def compute_catalog(graph, problem: Problem, rho_max: float) -> SpectrumCatalog:
    """Full pipeline: frame, scan with margin, negative sweep, assignment."""
    graph = validate(graph)
    frame = build_frame(graph, problem)
    eigs = find_eigenvalues(graph, problem, rho_max + frame.window(), frame)
    negs = negative_eigenvalues(graph, problem)
    return catalog_spectrum(graph, eigs, frame, rho_max, negs, problem.label())


@dataclass(frozen=True)
class FamilyDiagnostic:
    k: int
    mu: int
    eps: tuple[float, ...]  # ordered by |n|
    partial_sums: tuple[float, ...]  # cumulative sum of |eps|^(2 mu)
    bounded: bool


@dataclass(frozen=True)
class EpsilonReport:
    families: tuple[FamilyDiagnostic, ...]

    def family(self, k: int) -> FamilyDiagnostic:
        for f in self.families:
            if f.k == k:
                return f
        raise KeyError(k)

    def all_bounded(self) -> bool:
        return all(f.bounded for f in self.families)


def epsilon_diagnostics(catalog: SpectrumCatalog) -> EpsilonReport:
    """Partial sums of |eps|^(2 mu_k) per family with an empirical plateau flag.

    The flag is true when the sums grow by less than 10% over the second half
    of the computed range; it is reported, never asserted.
    """
    fams = []
    for fam in catalog.frame.families:
        sub = catalog.family(fam.index)
        eps = tuple(e.eps for e in sub)
        exponent = 2 * max(fam.mu, 1)
        sums = []
        acc = 0.0
        for e in eps:
            acc += abs(e) ** exponent
            sums.append(acc)
        if sums:
            half = sums[len(sums) // 2]
            bounded = (sums[-1] - half) < 0.1 * max(half, 1e-30)
        else:
            bounded = True
        fams.append(FamilyDiagnostic(fam.index, fam.mu, eps, tuple(sums), bounded))
    return EpsilonReport(tuple(fams))


def partial_sum(catalog: SpectrumCatalog, k: int, n_cap: int) -> float:
    """Sum of |eps_nk|^(2 mu_k) over |n| <= n_cap for family k."""
    fam = next(f for f in catalog.frame.families if f.index == k)
    exponent = 2 * max(fam.mu, 1)
    return sum(abs(e.eps) ** exponent for e in catalog.family(k) if abs(e.n) <= n_cap)


def catalog_to_csv(catalog: SpectrumCatalog) -> str:
    lines = ["n,k,lambda,rho,rho0,eps,multiplicity"]
    for e in catalog.entries:
        lines.append(
            f"{e.n},{e.k},{e.lam!r},{e.rho!r},{e.rho0!r},{e.eps!r},{e.multiplicity}"
        )
    return "\n".join(lines) + "\n"


def entries_from_csv(text: str) -> tuple[CatalogEntry, ...]:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "n,k,lambda,rho,rho0,eps,multiplicity":
        raise ValueError("not a spectrum catalog CSV (bad header)")
    entries = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 7:
            raise ValueError(f"bad catalog row: {ln!r}")
        n, k = int(parts[0]), int(parts[1])
        lam, rho, rho0, eps = (float(x) for x in parts[2:6])
        entries.append(CatalogEntry(n, k, lam, rho, rho0, eps, int(parts[6])))
    return tuple(entries)
