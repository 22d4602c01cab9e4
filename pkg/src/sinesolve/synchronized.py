"""Synchronized solutions (s w, t w) built from one scalar profile.

When both linear shifts coincide, substituting u = (s w, t w) with w a
solution of the unit-coefficient scalar equation

    -Lap w - kappa w = |w|^{p-2} w

reduces the coupled system to two algebraic amplitude equations.  Their
solvability is equivalent to a positive root of the scalar function

    h(r) = mu_1 r^{p-2} + lam alpha r^{alpha-2} - lam beta r^alpha - mu_2,

in which case t = (mu_2 + lam beta r^alpha)^(-1/(p-2)) and s = r t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import QuadratureGrid, ScalarField
from .energy import GalerkinSystem, ScalarProblem, SystemParams
from .errors import PreconditionError
from .nehari import CriticalPoint, SolverConfig, evaluate_point


@dataclass(frozen=True)
class SyncRoot:
    """A validated root of h with its amplitude pair."""

    r: float
    s: float
    t: float
    h_residual: float


@dataclass(frozen=True)
class RootScan:
    """Roots found by the sign-change scan, plus the sufficient-condition flag."""

    roots: tuple[float, ...]
    guaranteed: bool


def ratio_function(r: float, params: SystemParams) -> float:
    """h(r) = mu1 r^{p-2} + lam alpha r^{alpha-2} - lam beta r^alpha - mu2."""
    if r <= 0:
        raise PreconditionError("r must be positive")
    pr = params
    return float(
        pr.mu1 * r ** (pr.p - 2.0)
        + pr.lam * pr.alpha * r ** (pr.alpha - 2.0)
        - pr.lam * pr.beta * r**pr.alpha
        - pr.mu2
    )


def _ratio_derivative(r: float, params: SystemParams) -> float:
    pr = params
    return float(
        pr.mu1 * (pr.p - 2.0) * r ** (pr.p - 3.0)
        + pr.lam * pr.alpha * (pr.alpha - 2.0) * r ** (pr.alpha - 3.0)
        - pr.lam * pr.beta * pr.alpha * r ** (pr.alpha - 1.0)
    )


def root_guaranteed(params: SystemParams) -> bool:
    """Sufficient condition for a positive root of h.

    h > 0 near 0 when alpha < 2, or alpha = 2 with lam > mu2/2; h < 0 at
    infinity when beta < 2, or beta = 2 with lam > mu1/2.
    """
    small = params.alpha < 2.0 or (params.alpha == 2.0 and params.lam > params.mu2 / 2.0)
    large = params.beta < 2.0 or (params.beta == 2.0 and params.lam > params.mu1 / 2.0)
    return small and large


def find_roots(
    params: SystemParams,
    r_lo: float = 1e-8,
    r_hi: float = 1e8,
    n_scan: int = 4001,
) -> RootScan:
    """All simple positive roots of h located by sign changes on a log grid.

    Each bracket is bisected and then Newton-polished to |h| <= 1e-13;
    tangential roots without a sign change are not searched for.
    """
    if r_lo <= 0 or r_hi <= r_lo:
        raise PreconditionError("need 0 < r_lo < r_hi")
    grid = np.geomspace(r_lo, r_hi, n_scan)
    vals = np.array([ratio_function(r, params) for r in grid])
    roots = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            roots.append(float(a))
            continue
        if fa * fb >= 0.0:
            continue
        lo, hi, flo = a, b, fa
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = ratio_function(mid, params)
            if fm == 0.0:
                lo = hi = mid
                break
            if flo * fm < 0:
                hi = mid
            else:
                lo, flo = mid, fm
            if hi - lo < 1e-15 * hi:
                break
        r = 0.5 * (lo + hi)
        for _ in range(8):  # Newton polish
            h = ratio_function(r, params)
            if abs(h) <= 1e-13:
                break
            dh = _ratio_derivative(r, params)
            if dh == 0.0:
                break
            r = r - h / dh
        if r > 0 and abs(ratio_function(r, params)) <= 1e-12:
            roots.append(float(r))
    if vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    return RootScan(roots=tuple(sorted(set(roots))), guaranteed=root_guaranteed(params))


def amplitudes(r: float, params: SystemParams, h_tol: float = 1e-10) -> tuple[float, float]:
    """Amplitude pair (s, t) for a root r of h.

    Assumes the scalar profile solves the unit-coefficient equation; both
    component amplitude identities then evaluate to 1 within 1e-10.
    """
    h = ratio_function(r, params)
    if abs(h) > h_tol:
        raise PreconditionError(f"h({r}) = {h:g} is not a root within {h_tol:g}")
    pr = params
    t = (pr.mu2 + pr.lam * pr.beta * r**pr.alpha) ** (-1.0 / (pr.p - 2.0))
    return float(r * t), float(t)


def amplitude_identities(s: float, t: float, params: SystemParams) -> tuple[float, float]:
    """The two algebraic amplitude equations; both equal 1 at a valid pair."""
    pr = params
    id1 = pr.mu1 * s ** (pr.p - 2.0) + pr.lam * pr.alpha * s ** (pr.alpha - 2.0) * t**pr.beta
    id2 = pr.mu2 * t ** (pr.p - 2.0) + pr.lam * pr.beta * s**pr.alpha * t ** (pr.beta - 2.0)
    return float(id1), float(id2)


def make_sync_root(r: float, params: SystemParams) -> SyncRoot:
    s, t = amplitudes(r, params)
    return SyncRoot(r=float(r), s=s, t=t, h_residual=ratio_function(r, params))


def unit_coefficient_profile(w: ScalarField, mu: float, p: float) -> ScalarField:
    """Rescale a solution of the mu-coefficient scalar equation to unit coefficient."""
    return ScalarField(w.basis, mu ** (1.0 / (p - 2.0)) * w.coeffs)


def synchronized_solution(
    w: ScalarField,
    root: SyncRoot,
    params: SystemParams,
    grid: QuadratureGrid | None = None,
    config: SolverConfig = SolverConfig(),
) -> tuple[CriticalPoint, float]:
    """Assemble u = (s w, t w) and report (point, scalar residual norm).

    Requires kappa1 = kappa2 and w a converged Galerkin solution of the
    unit-coefficient scalar equation; the coupled gradient norm at u is then
    a bounded multiple of the scalar residual.
    """
    if params.kappa1 != params.kappa2:
        raise PreconditionError("synchronized solutions need kappa1 = kappa2")
    engine = GalerkinSystem(params, w.basis, grid)
    prob = ScalarProblem(params, 1, w.basis, engine.grid, mu=1.0)
    scalar_res = float(np.linalg.norm(prob.gradient(w.coeffs)))
    z = np.concatenate([root.s * w.coeffs, root.t * w.coeffs])
    point = evaluate_point(engine, z, config)
    return point, scalar_res
