"""Kinetics of the two-component reduction: nonlinearities, nullclines,
hysteresis branches, equilibria and the saddle's stable manifold.

The reduced system is

    u_t = (1/gamma) u_xx + f(u, v),      v_t = g(u, v),

with f(u,v) = v - mu3*u - m1*mu2*b*u / (mu1*(mu2+d) + mu2*b*u) and
g(u,v) = -delta*v + u*S(v), where S(v) = m4 / (1 + sigma*v^2 - beta_l*v).
The g-nullcline u = Psi(v) is a cubic in v; when 3*sigma < beta_l^2 < 4*sigma
it folds, and g(u,v)=0 defines three branches h0 <= hm <= h1 over the overlap
interval (u_minus, u_plus).
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq, minimize_scalar

from .errors import (
    BranchDomainError,
    DegenerateEquilibriaError,
    IncompleteManifoldError,
    InvalidParametersError,
    NoFoldError,
)

__all__ = [
    "ModelParams",
    "BranchTable",
    "Equilibrium",
    "PhasePortrait",
    "baseline_params",
    "eval_S",
    "eval_f",
    "eval_g",
    "nullcline_phi",
    "nullcline_psi",
    "fold_points",
    "branch_table",
    "branch_h",
    "mu3_window",
    "equilibria",
    "jacobian",
    "stable_manifold",
    "classify_region",
    "quasi_steady_receptors",
]


@dataclass(frozen=True)
class ModelParams:
    """All rate constants of the model; gamma is the inverse diffusion 1/D."""

    mu1: float
    mu2: float
    mu3: float
    m1: float
    m4: float
    sigma: float
    beta_l: float
    delta: float
    b: float
    d: float
    gamma: float = 1.0

    def __post_init__(self):
        for name in ("mu1", "mu2", "mu3", "m1", "m4", "sigma", "beta_l",
                     "delta", "b", "d", "gamma"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidParametersError(f"{name} must be strictly positive, got {value!r}")
        if self.beta_l ** 2 >= 4.0 * self.sigma:
            raise InvalidParametersError(
                "positivity of S requires beta_l^2 < 4*sigma "
                f"(got beta_l^2 = {self.beta_l**2:.6g}, 4*sigma = {4*self.sigma:.6g})"
            )

    @property
    def c0(self) -> float:
        """min over v of (1 + sigma*v^2 - beta_l*v); positive by construction."""
        return 1.0 - self.beta_l ** 2 / (4.0 * self.sigma)

    @property
    def has_folds(self) -> bool:
        """Cubic condition: 3*sigma < beta_l^2 (combined with the positivity bound)."""
        return self.beta_l ** 2 > 3.0 * self.sigma

    def satisfies_a3(self) -> bool:
        """Whether mu3 lies inside the three-equilibria window."""
        if not self.has_folds:
            return False
        lo, hi = mu3_window(self)
        return lo < self.mu3 < hi

    def with_gamma(self, gamma: float) -> "ModelParams":
        return ModelParams(self.mu1, self.mu2, self.mu3, self.m1, self.m4,
                           self.sigma, self.beta_l, self.delta, self.b, self.d, gamma)


def baseline_params(gamma: float = 1.0 / 0.100044) -> ModelParams:
    """Reference parameter set used by the bundled experiments and tests."""
    return ModelParams(mu1=1.0, mu2=1.0, mu3=1.5, m1=1.5, m4=0.75,
                       sigma=0.01, beta_l=0.195, delta=2.5, b=2.0, d=1.0,
                       gamma=gamma)


# ---------------------------------------------------------------------------
# nonlinearities and nullclines
# ---------------------------------------------------------------------------

def eval_S(v, p: ModelParams):
    """Transcript-synthesis control S(v) = m4 / (1 + sigma*v^2 - beta_l*v)."""
    den = 1.0 + p.sigma * np.square(v) - p.beta_l * np.asarray(v, dtype=float)
    return p.m4 / den


def eval_f(u, v, p: ModelParams):
    """u-kinetics of the reduced system."""
    u = np.asarray(u, dtype=float)
    return v - p.mu3 * u - p.m1 * p.mu2 * p.b * u / (p.mu1 * (p.mu2 + p.d) + p.mu2 * p.b * u)


def eval_g(u, v, p: ModelParams):
    """v-kinetics of the reduced system."""
    return -p.delta * np.asarray(v, dtype=float) + u * eval_S(v, p)


def nullcline_phi(u, p: ModelParams):
    """f = 0 solved for v: Phi(u) = mu3*u + m1*mu2*b*u/(mu1*(mu2+d) + mu2*b*u)."""
    u = np.asarray(u, dtype=float)
    return p.mu3 * u + p.m1 * p.mu2 * p.b * u / (p.mu1 * (p.mu2 + p.d) + p.mu2 * p.b * u)


def nullcline_phi_prime(u, p: ModelParams):
    u = np.asarray(u, dtype=float)
    den = p.mu1 * (p.mu2 + p.d) + p.mu2 * p.b * u
    return p.mu3 + p.m1 * p.mu2 * p.b * p.mu1 * (p.mu2 + p.d) / np.square(den)


def nullcline_psi(v, p: ModelParams):
    """g = 0 solved for u: Psi(v) = delta*v*(1 + sigma*v^2 - beta_l*v)/m4."""
    v = np.asarray(v, dtype=float)
    return p.delta * v * (1.0 + p.sigma * np.square(v) - p.beta_l * v) / p.m4


# ---------------------------------------------------------------------------
# folds and branches
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BranchTable:
    """Fold data of Psi and evaluators for the three roots of g(u, .) = 0.

    h0 lives on [0, u_plus] with v in [0, v_minus]; hm on [u_minus, u_plus]
    with v in [v_minus, v_plus]; h1 on [u_minus, inf) with v >= v_plus.
    """

    params: ModelParams
    v_minus: float
    v_plus: float
    u_plus: float
    u_minus: float

    def h(self, j, u):
        return branch_h(j, u, self.params, table=self)

    def h_prime(self, j, u):
        """dv/du along branch j, from implicit differentiation of g = 0."""
        v = self.h(j, u)
        J = jacobian(u, v, self.params)
        return -J[..., 1, 0] / J[..., 1, 1]


def fold_points(p: ModelParams):
    """Locations of the local max/min of Psi: roots of 3*sigma*v^2 - 2*beta_l*v + 1.

    Returns (v_minus, v_plus, u_plus, u_minus) with u_plus = Psi(v_minus),
    u_minus = Psi(v_plus).
    """
    disc = p.beta_l ** 2 - 3.0 * p.sigma
    if disc <= 0:
        raise NoFoldError(
            "Psi is monotone: requires 3*sigma < beta_l^2 "
            f"(got 3*sigma = {3*p.sigma:.6g}, beta_l^2 = {p.beta_l**2:.6g})"
        )
    root = np.sqrt(disc)
    v_minus = (p.beta_l - root) / (3.0 * p.sigma)
    v_plus = (p.beta_l + root) / (3.0 * p.sigma)
    return v_minus, v_plus, float(nullcline_psi(v_minus, p)), float(nullcline_psi(v_plus, p))


@functools.lru_cache(maxsize=64)
def branch_table(p: ModelParams) -> BranchTable:
    v_minus, v_plus, u_plus, u_minus = fold_points(p)
    return BranchTable(p, v_minus, v_plus, u_plus, u_minus)


_BRANCH_KEYS = {0: 0, "0": 0, "m": 1, 1: 2, "1": 2}


def branch_h(j, u, p: ModelParams, table: BranchTable | None = None):
    """Root v of g(u, v) = 0 on branch j in {0, 'm', 1}; vectorized in u.

    Solves delta*sigma*v^3 - delta*beta_l*v^2 + delta*v - m4*u = 0 by
    safeguarded Newton inside the branch's v-bracket.
    """
    if j not in _BRANCH_KEYS:
        raise ValueError(f"branch index must be one of 0, 'm', 1; got {j!r}")
    jj = _BRANCH_KEYS[j]
    tab = table or branch_table(p)
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    tol = 1e-13

    if jj == 0:
        bad = (u_arr < -tol) | (u_arr > tab.u_plus * (1 + 1e-12))
        lo = np.zeros_like(u_arr)
        hi = np.full_like(u_arr, tab.v_minus)
        guess = np.minimum(u_arr * p.m4 / p.delta, tab.v_minus)
    elif jj == 1:
        bad = (u_arr < tab.u_minus * (1 - 1e-12)) | (u_arr > tab.u_plus * (1 + 1e-12))
        lo = np.full_like(u_arr, tab.v_minus)
        hi = np.full_like(u_arr, tab.v_plus)
        guess = 0.5 * (lo + hi)
    else:
        bad = u_arr < tab.u_minus * (1 - 1e-12)
        lo = np.full_like(u_arr, tab.v_plus)
        # upper bracket: grow until Psi(hi) >= u
        hi = np.maximum(tab.v_plus * 1.5,
                        np.cbrt(p.m4 * np.maximum(u_arr, 0.0) / (p.delta * p.sigma))
                        + p.beta_l / p.sigma)
        for _ in range(200):
            need = nullcline_psi(hi, p) < u_arr
            if not np.any(need):
                break
            hi = np.where(need, hi * 2.0, hi)
        guess = np.maximum(lo * (1 + 1e-9), np.cbrt(p.m4 * np.maximum(u_arr, 1e-300)
                                                    / (p.delta * p.sigma)))
    if np.any(bad):
        u_bad = float(u_arr[bad][0])
        near = tab.u_plus if abs(u_bad - tab.u_plus) < abs(u_bad - tab.u_minus) else tab.u_minus
        raise BranchDomainError(
            f"u = {u_bad:.6g} outside domain of branch {j} "
            f"(nearest fold at u = {near:.6g})", nearest_fold=near)

    ds, dbl, dd, m4 = p.delta * p.sigma, p.delta * p.beta_l, p.delta, p.m4

    def cubic(v):
        return ((ds * v - dbl) * v + dd) * v - m4 * u_arr

    def cubic_prime(v):
        return (3.0 * ds * v - 2.0 * dbl) * v + dd

    # exact roots at bracket endpoints (u = 0 on the lower branch) would defeat
    # the bisection safeguard, so snap them up front
    exact_lo = cubic(lo) == 0.0
    exact_hi = cubic(hi) == 0.0
    lo0, hi0 = lo.copy(), hi.copy()
    v = np.clip(guess, lo, hi)
    for _ in range(100):
        fv = cubic(v)
        pos = fv > 0
        # cubic is increasing on outer branches, decreasing on the middle one
        if jj == 1:
            lo = np.where(pos, v, lo)
            hi = np.where(pos, hi, v)
        else:
            hi = np.where(pos, v, hi)
            lo = np.where(pos, lo, v)
        with np.errstate(divide="ignore", invalid="ignore"):
            v_new = v - fv / cubic_prime(v)   # derivative vanishes at exact folds
        outside = ~np.isfinite(v_new) | (v_new <= lo) | (v_new >= hi)
        v_new = np.where(outside, 0.5 * (lo + hi), v_new)
        if np.all(np.abs(v_new - v) <= 1e-16 * (1.0 + np.abs(v))):
            v = v_new
            break
        v = v_new
    v = np.where(exact_lo, lo0, v)
    v = np.where(exact_hi, hi0, v)
    return v[0] if np.isscalar(u) or np.ndim(u) == 0 else v


# ---------------------------------------------------------------------------
# equilibria and classification
# ---------------------------------------------------------------------------

def jacobian(u, v, p: ModelParams):
    """Closed-form Jacobian [[f_u, f_v], [g_u, g_v]]; vectorized, shape (..., 2, 2)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    den = p.mu1 * (p.mu2 + p.d) + p.mu2 * p.b * u
    f_u = -p.mu3 - p.m1 * p.mu2 * p.b * p.mu1 * (p.mu2 + p.d) / np.square(den)
    f_v = np.ones_like(np.broadcast_arrays(u, v)[0])
    q = 1.0 + p.sigma * np.square(v) - p.beta_l * v
    g_u = p.m4 / q
    g_v = -p.delta - u * p.m4 * (2.0 * p.sigma * v - p.beta_l) / np.square(q)
    out = np.stack([np.stack([f_u + 0 * v, f_v], axis=-1),
                    np.stack([g_u + 0 * u, g_v], axis=-1)], axis=-2)
    return out


@dataclass(frozen=True)
class Equilibrium:
    u: float
    v: float
    classification: str  # 'stable-node', 'stable-focus', 'saddle', 'unstable'
    eigenvalues: tuple


def _classify(J) -> tuple[str, tuple]:
    w = np.linalg.eigvals(J)
    if np.all(np.isreal(w)):
        w = np.real(w)
        if w[0] * w[1] < 0:
            kind = "saddle"
        elif np.max(w) < 0:
            kind = "stable-node"
        else:
            kind = "unstable"
    else:
        kind = "stable-focus" if np.max(np.real(w)) < 0 else "unstable"
    return kind, tuple(w)


def equilibria(p: ModelParams) -> list[Equilibrium]:
    """All nonnegative equilibria: (0,0) plus positive nullcline intersections.

    Positive roots are bracketed per branch of g = 0; coalescing roots
    (within 1e-8 in u) raise DegenerateEquilibriaError.
    """
    tab = branch_table(p)
    out_u: list[float] = []

    def resid(u, j):
        return float(nullcline_phi(u, p) - branch_h(j, u, p, table=tab))

    # h0 branch: scan (0, u_plus] for sign changes of Phi - h0
    us = np.linspace(1e-9 * tab.u_plus, tab.u_plus, 600)
    vals = nullcline_phi(us, p) - branch_h(0, us, p, table=tab)
    sign_flip = np.nonzero(np.diff(np.sign(vals)) != 0)[0]
    for i in sign_flip:
        out_u.append(brentq(resid, us[i], us[i + 1], args=(0,), xtol=1e-14, rtol=8.9e-16))

    # hm branch: Phi increasing, hm decreasing -> at most one root
    lo, hi = tab.u_minus * (1 + 1e-12), tab.u_plus * (1 - 1e-12)
    if resid(lo, "m") * resid(hi, "m") < 0:
        out_u.append(brentq(resid, lo, hi, args=("m",), xtol=1e-14, rtol=8.9e-16))

    # h1 branch: bracket upward until Phi - h1 > 0 (Phi grows linearly, h1 like u^(1/3))
    hi1 = tab.u_plus * 2
    for _ in range(200):
        if resid(hi1, 1) > 0:
            break
        hi1 *= 2.0
    else:
        hi1 = None
    if hi1 is not None and resid(lo, 1) < 0:
        us1 = np.linspace(lo, hi1, 600)
        vals1 = nullcline_phi(us1, p) - branch_h(1, us1, p, table=tab)
        for i in np.nonzero(np.diff(np.sign(vals1)) != 0)[0]:
            out_u.append(brentq(resid, us1[i], us1[i + 1], args=(1,), xtol=1e-14, rtol=8.9e-16))

    out_u = sorted(set(out_u))
    merged: list[float] = []
    for u in out_u:
        if merged and abs(u - merged[-1]) < 1e-8:
            raise DegenerateEquilibriaError(
                f"two positive equilibria coalesce near u = {u:.8g}; "
                "parameters sit on an (A3) window boundary")
        merged.append(u)

    eqs = [Equilibrium(0.0, 0.0, *_classify(jacobian(0.0, 0.0, p)))]
    for u in merged:
        v = float(nullcline_phi(u, p))
        eqs.append(Equilibrium(float(u), v, *_classify(jacobian(u, v, p))))
    return eqs


def _saddle(p: ModelParams) -> Equilibrium:
    for eq in equilibria(p):
        if eq.classification == "saddle" and eq.u > 0:
            return eq
    raise InvalidParametersError("no positive saddle equilibrium for this parameter set")


# ---------------------------------------------------------------------------
# mu3 window (A3)
# ---------------------------------------------------------------------------

def _phi_with_mu3(u, p: ModelParams, mu3):
    u = np.asarray(u, dtype=float)
    return mu3 * u + p.m1 * p.mu2 * p.b * u / (p.mu1 * (p.mu2 + p.d) + p.mu2 * p.b * u)


def _min_gap_h0(p: ModelParams, mu3, tab: BranchTable) -> float:
    """min over (0, u_plus] of (Phi - h0)/u; negative iff Phi crosses h0."""
    us = np.linspace(1e-6 * tab.u_plus, tab.u_plus, 500)
    gaps = (_phi_with_mu3(us, p, mu3) - branch_h(0, us, p, table=tab)) / us
    i = int(np.argmin(gaps))
    lo, hi = us[max(i - 1, 0)], us[min(i + 1, len(us) - 1)]
    res = minimize_scalar(lambda u: float((_phi_with_mu3(u, p, mu3)
                                           - branch_h(0, u, p, table=tab)) / u),
                          bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    return float(min(res.fun, gaps[i]))


def _min_gap_h1(p: ModelParams, mu3, tab: BranchTable) -> float:
    """min over the h1 domain of Phi - h1; negative iff the large equilibrium exists."""
    hi1 = tab.u_plus * 2
    for _ in range(200):
        if _phi_with_mu3(hi1, p, mu3) > branch_h(1, hi1, p, table=tab):
            break
        hi1 *= 2.0
    us = np.linspace(tab.u_minus * (1 + 1e-9), hi1, 800)
    gaps = _phi_with_mu3(us, p, mu3) - branch_h(1, us, p, table=tab)
    i = int(np.argmin(gaps))
    lo, hi = us[max(i - 1, 0)], us[min(i + 1, len(us) - 1)]
    res = minimize_scalar(lambda u: float(_phi_with_mu3(u, p, mu3)
                                          - branch_h(1, u, p, table=tab)),
                          bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    return float(min(res.fun, gaps[i]))


@functools.lru_cache(maxsize=64)
def mu3_window(p: ModelParams) -> tuple[float, float]:
    """Open interval of mu3 for which Phi has exactly two strictly positive
    intersections with the g-nullcline (no equilibrium on the lower branch and
    the large equilibrium still present).

    Returned as (mu_lo, mu_hi); empty windows come back as (nan, nan), never
    as an exception. Bisection tolerance 1e-8 in mu3.
    """
    tab = branch_table(p)

    # lower edge: smallest mu3 with Phi staying above h0 (min gap monotone up in mu3)
    def gap0(mu3):
        return _min_gap_h0(p, mu3, tab)

    # upper edge: largest mu3 for which Phi still crosses h1
    def gap1(mu3):
        return _min_gap_h1(p, mu3, tab)

    lo_floor = 1e-12
    if gap0(lo_floor) >= 0:
        mu_lo = 0.0
    else:
        hi = max(1.0, p.mu3)
        for _ in range(200):
            if gap0(hi) > 0:
                break
            hi *= 2.0
        else:
            return (np.nan, np.nan)
        mu_lo = brentq(gap0, lo_floor, hi, xtol=1e-8)

    start = max(mu_lo * 1.01 + 1e-9, 1e-6)
    if gap1(start) >= 0:
        return (np.nan, np.nan)
    hi = max(1.0, start * 2)
    for _ in range(200):
        if gap1(hi) > 0:
            break
        hi *= 2.0
    else:
        return (np.nan, np.nan)
    mu_hi = brentq(gap1, start, hi, xtol=1e-8)
    if not (mu_lo < mu_hi):
        return (np.nan, np.nan)
    return (float(mu_lo), float(mu_hi))


# ---------------------------------------------------------------------------
# stable manifold of the saddle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhasePortrait:
    """Equilibria plus the saddle's stable manifold as a u-ordered polyline."""

    params: ModelParams
    equilibria: tuple
    manifold_u: np.ndarray = field(repr=False)
    manifold_v: np.ndarray = field(repr=False)
    U_s: float = np.nan
    V_s: float = np.nan

    @property
    def saddle(self) -> Equilibrium:
        for eq in self.equilibria:
            if eq.classification == "saddle" and eq.u > 0:
                return eq
        raise InvalidParametersError("portrait has no positive saddle")

    def manifold_value(self, u):
        """v-value of the stable manifold at abscissa u (interpolated)."""
        return np.interp(u, self.manifold_u, self.manifold_v)


def stable_manifold(p: ModelParams, arclength_budget: float = 500.0,
                    tol: float = 1e-8, eps_scale: float = 1e-6) -> PhasePortrait:
    """Trace W^s by integrating the time-reversed kinetics from the saddle.

    Both branches are seeded at +/- eps along the stable eigenvector and run
    until they hit an axis; raises IncompleteManifoldError (with the partial
    polyline) if the arclength budget is exhausted first.
    """
    eqs = equilibria(p)
    saddle = next(eq for eq in eqs if eq.classification == "saddle" and eq.u > 0)
    J = jacobian(saddle.u, saddle.v, p)
    w, V = np.linalg.eig(J)
    i_stable = int(np.argmin(np.real(w)))
    vec = np.real(V[:, i_stable])
    vec /= np.linalg.norm(vec)
    if vec[0] < 0:
        vec = -vec
    # stable eigenvector has components of opposite sign
    assert vec[0] * vec[1] < 0

    def rhs(s, z):
        # arclength-parametrized time-reversed flow
        du = -eval_f(z[0], z[1], p)
        dv = -eval_g(z[0], z[1], p)
        norm = np.hypot(du, dv)
        return [du / norm, dv / norm]

    eps = eps_scale * max(saddle.u, saddle.v)

    def trace(direction):
        z0 = np.array([saddle.u, saddle.v]) + direction * eps * vec
        hit_u = lambda s, z: z[0]
        hit_v = lambda s, z: z[1]
        hit_u.terminal = hit_v.terminal = True
        hit_u.direction = hit_v.direction = -1
        sol = solve_ivp(rhs, (0.0, arclength_budget), z0, events=[hit_u, hit_v],
                        rtol=1e-9, atol=1e-12, max_step=arclength_budget / 50,
                        dense_output=False)
        pts = sol.y.T.copy()
        if sol.status != 1:
            raise IncompleteManifoldError(
                f"manifold branch did not reach an axis within arclength "
                f"{arclength_budget}", partial_polyline=pts)
        # snap the terminal (event) point onto its axis exactly
        if len(sol.t_events[0]):
            pts[-1] = (0.0, sol.y_events[0][0][1])
        else:
            pts[-1] = (sol.y_events[1][0][0], 0.0)
        return pts

    down = trace(+1.0 if vec[1] < 0 else -1.0)   # toward the u-axis
    up = trace(-1.0 if vec[1] < 0 else +1.0)     # toward the v-axis
    U_s = float(down[-1, 0])
    V_s = float(up[-1, 1])

    poly = np.vstack([up[::-1], [[saddle.u, saddle.v]], down])
    # enforce strictly increasing u for interpolation queries
    order = np.argsort(poly[:, 0], kind="stable")
    poly = poly[order]
    keep = np.concatenate([[True], np.diff(poly[:, 0]) > 0])
    poly = poly[keep]
    return PhasePortrait(params=p, equilibria=tuple(eqs),
                         manifold_u=poly[:, 0], manifold_v=poly[:, 1],
                         U_s=U_s, V_s=V_s)


def classify_region(u: float, v: float, portrait: PhasePortrait,
                    tol: float = 1e-9) -> str:
    """Which basin component a first-quadrant point belongs to.

    'S1' is the component whose closure contains the origin, 'S2' the other;
    points within tol of the polyline report 'on-manifold'.
    """
    if not (u > 0 and v > 0):
        raise ValueError("classify_region expects a point in the open first quadrant")
    if u >= portrait.U_s:
        return "S2"
    v_curve = float(portrait.manifold_value(u))
    gap = v - v_curve
    scale = max(1.0, abs(v_curve))
    if abs(gap) <= tol * scale:
        return "on-manifold"
    return "S2" if gap > 0 else "S1"


# ---------------------------------------------------------------------------
# quasi-steady receptor maps
# ---------------------------------------------------------------------------

def quasi_steady_receptors(u3, p: ModelParams):
    """Fast-variable elimination: free/bound receptor levels for a given ligand.

    u1 = m1*(d+mu2) / (mu1*(d+mu2) + mu2*b*u3),
    u2 = m1*b*u3   / (mu1*(d+mu2) + mu2*b*u3).
    """
    u3 = np.asarray(u3, dtype=float)
    den = p.mu1 * (p.d + p.mu2) + p.mu2 * p.b * u3
    return p.m1 * (p.d + p.mu2) / den, p.m1 * p.b * u3 / den
