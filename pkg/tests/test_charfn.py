import math

import numpy as np
import pytest

from lasso_spectra.charfn import (
    charfn,
    charfn_dirichlet,
    charfn_for,
    cycle_charfn,
    free_charfn,
    free_charfn_dirichlet,
    star_charfn,
    star_charfn_dirichlet,
    weyl,
)
from lasso_spectra.errors import BadIndex, NearPole
from lasso_spectra.graph import Problem, delta_potential, lasso_graph


def test_cycle_charfn_free(unit_lasso_p1):
    assert abs(cycle_charfn(unit_lasso_p1, (2 * math.pi) ** 2)) < 1e-12
    assert cycle_charfn(unit_lasso_p1, 0.0) == 0.0
    assert abs(cycle_charfn(unit_lasso_p1, math.pi**2) + 4.0) < 1e-12


def test_star_charfn_closed_forms(unit_lasso_p1):
    g2 = lasso_graph(1, [1, 1])
    rho = 1.234
    # p = 2: sum of two C' C terms collapses to -rho sin(2 rho).
    assert abs(star_charfn(g2, rho**2) - (-rho * math.sin(2 * rho))) < 1e-12
    # p = 1: single term rho sin(rho).
    assert abs(star_charfn(unit_lasso_p1, rho**2) - rho * math.sin(rho)) < 1e-12
    assert star_charfn(g2, 0.0) == 0.0


def test_charfn_p2_frozen_value():
    g2 = lasso_graph(1, [1, 1])
    want = math.sin(1) * (-math.sin(2)) + 2 * (math.cos(1) - 1) * math.cos(1) ** 2
    assert abs(charfn(g2, 1.0) - want) < 1e-13


def test_charfn_vanishes_at_zero_for_free_graph():
    for g in (lasso_graph(1, [1, 1]), lasso_graph("1/2", ["3/4", 1, 2])):
        assert abs(charfn(g, 0.0)) < 1e-14


def test_charfn_p1_closed_form(unit_lasso_p1):
    rho = np.linspace(0.0, 30.0, 301)
    c = np.cos(rho)
    want = (1 - c) * (3 * c + 1)
    got = charfn(unit_lasso_p1, rho**2)
    assert np.max(np.abs(got - want)) < 1e-11


def test_charfn_dirichlet_p1_closed_form(unit_lasso_p1):
    # Hand-derived secular determinant: zeros at sin(rho) = 0 and cos(rho) = 2/3.
    rho = np.linspace(0.1, 30.0, 301)
    want = -(np.sin(rho) / rho) * (3 * np.cos(rho) - 2)
    got = charfn_dirichlet(unit_lasso_p1, 1, rho**2)
    assert np.max(np.abs(got - want)) < 1e-11


def test_charfn_dirichlet_nonzero_at_lambda_zero(unit_lasso_p1):
    # Dirichlet at the pendant end excludes constants: 0 is not an eigenvalue.
    assert abs(charfn_dirichlet(unit_lasso_p1, 1, 0.0) + 1.0) < 1e-14


def test_assembly_identity_for_dirichlet():
    g = lasso_graph(1, [1, 1, 2], potentials=None)
    from lasso_spectra.propagate import fundamental_solutions

    lam = 3.7
    fs = [fundamental_solutions(e, lam) for e in g.edges]
    cyc = fs[0].C + fs[0].S1 - 2.0
    j = 2
    prod = math.prod(fs[k].C for k in range(1, 4) if k != j)
    star_d = star_charfn_dirichlet(g, j, lam)
    want = fs[0].S * star_d + (-1.0) ** 3 * cyc * fs[j].S * prod
    assert abs(charfn_dirichlet(g, j, lam) - want) < 1e-13


def test_bad_index():
    g = lasso_graph(1, [1, 1])
    with pytest.raises(BadIndex):
        charfn_dirichlet(g, 3, 1.0)
    with pytest.raises(BadIndex):
        star_charfn_dirichlet(g, 0, 1.0)
    with pytest.raises(BadIndex):
        weyl(g, -1, 1.0)


def test_free_charfn_pi_lasso_value(pi_lasso):
    # All lengths pi, rho = 1: 2(cos pi - 1) cos^2 pi - 0 = -4.
    assert abs(free_charfn(pi_lasso, 1.0) + 4.0) < 1e-12
    assert free_charfn(pi_lasso, 0.0) == 0.0


def test_free_charfn_matches_assembled_on_zero_potential(pi_lasso):
    rng = np.random.default_rng(3)
    rho = rng.uniform(0.0, 50.0, size=100)
    direct = charfn(pi_lasso, rho**2)
    closed = free_charfn(pi_lasso, rho)
    assert np.max(np.abs(direct - closed)) <= 1e-12 * np.max(np.abs(closed))


def test_free_charfn_dirichlet_matches_assembled(pi_lasso):
    rng = np.random.default_rng(4)
    rho = rng.uniform(0.0, 40.0, size=100)
    direct = charfn_dirichlet(pi_lasso, 1, rho**2)
    closed = free_charfn_dirichlet(pi_lasso, 1, rho)
    assert np.max(np.abs(direct - closed)) <= 1e-12 * np.max(np.abs(closed))


def test_evenness_in_rho(pi_lasso):
    rho = np.linspace(0.0, 12.0, 57)
    assert np.array_equal(free_charfn(pi_lasso, rho), free_charfn(pi_lasso, -rho))
    assert np.array_equal(
        free_charfn_dirichlet(pi_lasso, 2, rho), free_charfn_dirichlet(pi_lasso, 2, -rho)
    )


def test_sign_convention_p_even():
    g = lasso_graph(1, [1, 1])
    assert charfn(g, -50.0) > 0.0  # (-1)^p = +1 dominates as lambda -> -inf


@pytest.mark.parametrize("lam,tol", [(-1e3, 1e-2), (-1e4, 1e-3)])
def test_ratio_to_free_tends_to_one(lam, tol):
    # Deviation decays like c / (4 sqrt(|lambda|)): c = 0.25 sits inside the
    # 1e-3 budget at lambda = -1e4 (c = 0.5 would land at 1.25e-3).
    g = lasso_graph(
        1, [1, 1], potentials=[None, delta_potential(1, "1/2", 0.25), None]
    )
    free_twin = g.with_zero_potential()
    ratio = charfn(g, lam) / charfn(free_twin, lam)
    assert abs(ratio - 1.0) <= tol


def test_weyl_far_below_spectrum(unit_lasso_p1):
    lam = -100.0
    k = 10.0
    num = -(math.sinh(k) / k) * (3 * math.cosh(k) - 2)
    den = (1 - math.cosh(k)) * (3 * math.cosh(k) + 1)
    assert abs(weyl(unit_lasso_p1, 1, lam) - num / den) < 1e-12


def test_weyl_near_pole(unit_lasso_p1):
    with pytest.raises(NearPole):
        weyl(unit_lasso_p1, 1, (2 * math.pi) ** 2)


def test_charfn_for_dispatch(pi_lasso):
    lam = 2.2
    assert charfn_for(pi_lasso, Problem.neumann(), lam) == charfn(pi_lasso, lam)
    assert charfn_for(pi_lasso, Problem.dirichlet(2), lam) == charfn_dirichlet(pi_lasso, 2, lam)
