"""Ratio-equation roots, amplitude algebra, and synchronized assembly."""

import numpy as np
import pytest

from sinesolve import (
    BoxDomain,
    SineBasis,
    SolverConfig,
    SystemParams,
    amplitudes,
    find_roots,
    make_sync_root,
    ratio_function,
    scalar_ground_state,
    synchronized_solution,
    unit_coefficient_profile,
)
from sinesolve.errors import PreconditionError
from sinesolve.synchronized import amplitude_identities, root_guaranteed


def params_with(**kw):
    base = dict(kappa1=0.0, kappa2=0.0, mu1=1.0, mu2=1.0, lam=1.0, alpha=2.0, beta=2.0, dim=1)
    base.update(kw)
    return SystemParams(**base)


def test_ratio_symmetric_cancellation():
    assert ratio_function(1.0, params_with(mu1=2.0, mu2=2.0, lam=3.0)) == 0.0


def test_ratio_quadratic_closed_form():
    # alpha = beta = 2: h(r) = (mu1 - 2 lam) r^2 + (2 lam - mu2)
    pr = params_with(mu1=1.0, mu2=2.0, lam=2.0)
    r = 0.7
    assert ratio_function(r, pr) == pytest.approx((1.0 - 4.0) * r**2 + (4.0 - 2.0), rel=1e-14)


def test_roots_quadratic_case():
    scan = find_roots(params_with(mu1=1.0, mu2=2.0, lam=2.0))
    assert len(scan.roots) == 1
    assert scan.roots[0] == pytest.approx(np.sqrt(2.0 / 3.0), abs=1e-10)
    assert abs(ratio_function(scan.roots[0], params_with(mu1=1.0, mu2=2.0, lam=2.0))) < 1e-12


def test_roots_absent_case():
    # h(r) = r^2 + 1 > 0 everywhere
    scan = find_roots(params_with(mu1=3.0, mu2=1.0, lam=1.0))
    assert scan.roots == ()


def test_roots_symmetric_contains_one():
    scan = find_roots(params_with())
    assert any(abs(r - 1.0) < 1e-10 for r in scan.roots)


def test_guaranteed_flag_and_probes():
    # alpha, beta < 2 guarantee sign changes at both ends
    pr = params_with(alpha=1.5, beta=1.5, mu2=2.0, lam=0.7)
    scan = find_roots(pr)
    assert scan.guaranteed
    assert len(scan.roots) >= 1
    assert ratio_function(1e-8, pr) > 0.0
    assert ratio_function(1e8, pr) < 0.0
    # alpha = 2 requires lam > mu2/2 for the small-r sign
    assert root_guaranteed(params_with(lam=0.6, mu2=1.0))
    assert not root_guaranteed(params_with(lam=0.4, mu2=1.0))


def test_amplitudes_closed_form():
    s, t = amplitudes(1.0, params_with())
    assert t == pytest.approx(3.0 ** (-0.5), rel=1e-14)
    assert s == pytest.approx(t, rel=1e-14)


def test_amplitudes_identities_everywhere():
    for pr in (
        params_with(mu1=1.0, mu2=2.0, lam=2.0),
        params_with(alpha=1.5, beta=1.5, mu2=2.0, lam=0.7),
        params_with(alpha=1.75, beta=2.25, mu1=0.8, mu2=1.3, lam=1.1),
    ):
        for r in find_roots(pr).roots:
            s, t = amplitudes(r, pr)
            id1, id2 = amplitude_identities(s, t, pr)
            assert id1 == pytest.approx(1.0, abs=1e-10)
            assert id2 == pytest.approx(1.0, abs=1e-10)


def test_amplitudes_rejects_nonroot():
    with pytest.raises(PreconditionError):
        amplitudes(0.5, params_with(mu1=1.0, mu2=2.0, lam=2.0))


@pytest.fixture(scope="module")
def solved_profile():
    basis = SineBasis(BoxDomain((1.0,)), (20,))
    cfg = SolverConfig()
    grid = cfg.make_grid(basis)
    pr = params_with()
    state = scalar_ground_state(pr, 1, basis, grid, cfg, mu=1.0)
    return basis, grid, cfg, pr, state


def test_unit_coefficient_rescaling(solved_profile):
    basis, grid, cfg, pr, state = solved_profile
    # solving with coefficient mu and rescaling reproduces the unit-coefficient profile
    state_mu = scalar_ground_state(params_with(mu1=4.0), 1, basis, grid, cfg)
    rescaled = unit_coefficient_profile(state_mu.w, 4.0, pr.p)
    d = min(
        np.linalg.norm(rescaled.coeffs - state.w.coeffs),
        np.linalg.norm(rescaled.coeffs + state.w.coeffs),
    )
    assert d < 1e-7


def test_synchronized_assembly(solved_profile):
    basis, grid, cfg, pr, state = solved_profile
    root = make_sync_root(1.0, pr)
    pt, scalar_res = synchronized_solution(state.w, root, pr, grid, cfg)
    # rounding floor keeps the 10x bound meaningful at machine-converged profiles
    assert pt.grad_norm < 10.0 * max(scalar_res, 1e-13)
    assert pt.classification == "fully-nontrivial"
    assert pt.energy == pytest.approx((0.5 - 1.0 / pr.p) * pt.b_value, rel=1e-6)


def test_synchronized_requires_equal_kappas(solved_profile):
    basis, grid, cfg, pr, state = solved_profile
    bad = params_with(kappa1=1.0, kappa2=2.0)
    root = make_sync_root(1.0, params_with())
    with pytest.raises(PreconditionError):
        synchronized_solution(state.w, root, bad, grid, cfg)
