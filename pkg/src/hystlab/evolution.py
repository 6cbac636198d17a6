"""Method-of-lines simulation of the full 4-component system and the reduced
2-component system on [0, 1], plus harnesses for the qualitative theory:
invariant rectangles, the comparison principle, basin convergence and an
empirical pattern-stability probe.

Space is discretized by cell-centered second-order finite differences with
no-flux (ghost-cell reflection) closure for the diffusing field. Two time
steppers are provided: an IMEX scheme (Crank-Nicolson diffusion, Adams-
Bashforth-2 reaction) and classic RK4 under a diffusive CFL bound, the latter
for the positivity/ordering-sensitive harnesses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded
from scipy.optimize import brentq

from .errors import BlowUpError
from .kinetics import (
    ModelParams,
    PhasePortrait,
    classify_region,
    eval_S,
    eval_f,
    eval_g,
    jacobian,
    nullcline_psi,
)

__all__ = [
    "Grid1D",
    "SimState",
    "Trajectory",
    "TimeStepControl",
    "InvariantRectangle",
    "ComparisonReport",
    "BasinVerdict",
    "DriftReport",
    "state_from_profile",
    "simulate_full",
    "simulate_reduced",
    "invariant_rectangle",
    "comparison_harness",
    "basin_convergence",
    "stability_probe",
]

REDUCED_FIELDS = ("u", "v")
FULL_FIELDS = ("u1", "u2", "u3", "u4")


@dataclass(frozen=True)
class Grid1D:
    """Uniform cell-centered grid on [0, 1]."""

    n_cells: int

    def __post_init__(self):
        if self.n_cells < 16:
            raise ValueError("grid needs at least 16 cells")

    @property
    def spacing(self) -> float:
        return 1.0 / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        h = self.spacing
        return (np.arange(self.n_cells) + 0.5) * h


@dataclass
class SimState:
    """Discretized fields at one time with scheme metadata."""

    time: float
    grid: Grid1D
    fields: dict[str, np.ndarray]
    dt: float = float("nan")
    step: int = 0
    scheme: str = ""

    @classmethod
    def constant(cls, grid: Grid1D, values: dict[str, float], time: float = 0.0):
        return cls(time=time, grid=grid,
                   fields={k: np.full(grid.n_cells, float(v)) for k, v in values.items()})

    @property
    def names(self) -> tuple:
        return tuple(self.fields)

    def copy(self) -> "SimState":
        return SimState(self.time, self.grid,
                        {k: v.copy() for k, v in self.fields.items()},
                        self.dt, self.step, self.scheme)


def state_from_profile(profile, grid: Grid1D, time: float = 0.0) -> SimState:
    """Reduced-system state sampling a stationary layer at the cell centers.

    v is taken as given (its jump is a feature of the model class, and u
    stays continuously differentiable); no smoothing is applied.
    """
    x = grid.centers
    return SimState(time=time, grid=grid,
                    fields={"u": profile.u_of(x), "v": profile.v_of(x)})


@dataclass
class Trajectory:
    states: list[SimState]
    min_value: float           # min over all fields, space and steps
    max_mass: float = float("nan")   # max over space/steps of u1+u2 (full system)
    bounds_ok: bool = True     # stayed inside the monitored rectangle, if any

    @property
    def final(self) -> SimState:
        return self.states[-1]


@dataclass(frozen=True)
class TimeStepControl:
    dt: float | None = None
    scheme: str = "imex"      # 'imex' (CN diffusion + AB2 reaction) or 'rk4'
    safety: float = 0.35
    adapt_every: int = 20     # steps between stiffness re-estimates (auto dt only)

    def resolve(self, p: ModelParams, grid: Grid1D, fields: dict) -> float:
        if self.dt is not None:
            if self.dt <= 0:
                raise ValueError("dt must be positive")
            return self.dt
        dt = self.safety / _reaction_stiffness(p, fields)
        if self.scheme == "rk4":
            dt = min(dt, 0.5 * grid.spacing ** 2 * p.gamma)
        return dt


def _reaction_stiffness(p: ModelParams, fields: dict) -> float:
    """Max pointwise row sum of the reaction Jacobian at the current state."""
    if "u" in fields:
        J = jacobian(fields["u"], fields["v"], p)
        rows = np.abs(J).sum(axis=-1).max(axis=-1)
        return float(np.max(rows)) * 1.5
    u1, u3, u4 = fields["u1"], fields["u3"], fields["u4"]
    q = 1.0 + p.sigma * u4 * u4 - p.beta_l * u4
    S = p.m4 / q
    dS = np.abs(p.m4 * (2.0 * p.sigma * u4 - p.beta_l) / (q * q))
    r1 = p.mu1 + p.b * u3 + p.d + p.b * u1
    r2 = p.mu2 + p.b * u3 + p.d + p.b * u1
    r3 = p.mu3 + p.b * u3 + p.d + p.b * u1 + 1.0
    r4 = p.delta + S + u3 * dS
    return float(max(np.max(r1), np.max(r2), np.max(r3), np.max(r4))) * 1.5


def _neumann_laplacian(u: np.ndarray, h: float) -> np.ndarray:
    out = np.empty_like(u)
    out[1:-1] = u[:-2] - 2.0 * u[1:-1] + u[2:]
    out[0] = u[1] - u[0]
    out[-1] = u[-2] - u[-1]
    out /= h * h
    return out


def _reduced_rhs(p: ModelParams, h: float, u, v, diffuse: bool = True):
    du = eval_f(u, v, p)
    if diffuse:
        du = du + _neumann_laplacian(u, h) / p.gamma
    return du, eval_g(u, v, p)


def _full_rhs(p: ModelParams, h: float, u1, u2, u3, u4, diffuse: bool = True):
    B = p.b * u1 * u3 - p.d * u2
    P = u3 * eval_S(u4, p)
    d1 = -p.mu1 * u1 - B + p.m1
    d2 = -p.mu2 * u2 + B
    d3 = -p.mu3 * u3 - B + u4
    if diffuse:
        d3 = d3 + _neumann_laplacian(u3, h) / p.gamma
    d4 = -p.delta * u4 + P
    return d1, d2, d3, d4


def _cn_bands(n: int, c: float) -> np.ndarray:
    """Banded (I - c*L) for the Neumann Laplacian (L includes the 1/h^2)."""
    ab = np.zeros((3, n))
    ab[0, 1:] = -c
    ab[2, :-1] = -c
    ab[1, :] = 1.0 + 2.0 * c
    ab[1, 0] = 1.0 + c
    ab[1, -1] = 1.0 + c
    return ab


class _Stepper:
    """Advances one state with a fixed dt; reaction terms are explicit."""

    def __init__(self, p: ModelParams, grid: Grid1D, names: tuple, scheme: str, dt: float):
        self.p, self.grid, self.names, self.scheme, self.dt = p, grid, names, scheme, dt
        self.h = grid.spacing
        self.diff_name = "u" if "u" in names else "u3"
        if scheme == "imex":
            self.bands = _cn_bands(grid.n_cells, dt / (2.0 * p.gamma * self.h ** 2))
        elif scheme != "rk4":
            raise ValueError(f"unknown scheme {scheme!r}")
        self._prev_rhs = None

    def reset_dt(self, dt: float) -> None:
        """Adopt a new base step; restarts the multistep history."""
        self.dt = dt
        if self.scheme == "imex":
            self.bands = _cn_bands(self.grid.n_cells,
                                   dt / (2.0 * self.p.gamma * self.h ** 2))
        self._prev_rhs = None

    def _rhs(self, fields: dict, diffuse: bool = True):
        if "u" in self.names:
            du, dv = _reduced_rhs(self.p, self.h, fields["u"], fields["v"], diffuse)
            return {"u": du, "v": dv}
        d1, d2, d3, d4 = _full_rhs(self.p, self.h, fields["u1"], fields["u2"],
                                   fields["u3"], fields["u4"], diffuse)
        return {"u1": d1, "u2": d2, "u3": d3, "u4": d4}

    def step(self, fields: dict, dt: float) -> dict:
        if self.scheme == "rk4":
            return self._rk4(fields, dt)
        return self._imex(fields, dt)

    def _rk4(self, fields: dict, dt: float) -> dict:
        k1 = self._rhs(fields)
        s2 = {n: fields[n] + 0.5 * dt * k1[n] for n in self.names}
        k2 = self._rhs(s2)
        s3 = {n: fields[n] + 0.5 * dt * k2[n] for n in self.names}
        k3 = self._rhs(s3)
        s4 = {n: fields[n] + dt * k3[n] for n in self.names}
        k4 = self._rhs(s4)
        return {n: fields[n] + (dt / 6.0) * (k1[n] + 2 * k2[n] + 2 * k3[n] + k4[n])
                for n in self.names}

    def _imex(self, fields: dict, dt: float) -> dict:
        dn = self.diff_name
        react = self._rhs(fields, diffuse=False)
        if self._prev_rhs is None:
            # Heun-style startup keeps the overall scheme second order
            pred = {n: fields[n] + dt * react[n] for n in self.names if n != dn}
            pred[dn] = self._cn_solve(fields[dn], react[dn], dt)
            react_pred = self._rhs(pred, diffuse=False)
            expl = {n: 0.5 * (react[n] + react_pred[n]) for n in self.names}
        else:
            expl = {n: 1.5 * react[n] - 0.5 * self._prev_rhs[n] for n in self.names}
        out = {n: fields[n] + dt * expl[n] for n in self.names if n != dn}
        out[dn] = self._cn_solve(fields[dn], expl[dn], dt)
        self._prev_rhs = react
        return out

    def _cn_solve(self, w: np.ndarray, explicit: np.ndarray, dt: float) -> np.ndarray:
        c = dt / (2.0 * self.p.gamma * self.h ** 2)
        lap = _neumann_laplacian(w, self.h) * self.h ** 2   # undo 1/h^2 for banded form
        rhs = w + c * lap + dt * explicit
        bands = self.bands if dt == self.dt else _cn_bands(self.grid.n_cells, c)
        return solve_banded((1, 1), bands, rhs)


def _run(init: SimState, p: ModelParams, t_end: float,
         dt_control: TimeStepControl | None, snapshot_times=(),
         monitor=None) -> Trajectory:
    ctrl = dt_control or TimeStepControl()
    grid = init.grid
    dt = ctrl.resolve(p, grid, init.fields)
    stepper = _Stepper(p, grid, init.names, ctrl.scheme, dt)

    landmarks = sorted({float(t) for t in snapshot_times if init.time < t <= t_end}
                       | {t_end})
    states = [init.copy()]
    states[0].dt, states[0].scheme = dt, ctrl.scheme
    fields = {k: v.copy() for k, v in init.fields.items()}
    t, step = init.time, 0
    min_val = min(float(np.min(a)) for a in fields.values())
    mass = float(np.max(fields["u1"] + fields["u2"])) if "u1" in fields else float("nan")
    bounds_ok = monitor(fields) if monitor else True
    dt_cap = 0.5 * grid.spacing ** 2 * p.gamma if ctrl.scheme == "rk4" else np.inf

    for t_stop in landmarks:
        while t < t_stop - 1e-13 * max(1.0, t_stop):
            if ctrl.dt is None and step % ctrl.adapt_every == 0 and step > 0:
                dt_new = min(ctrl.safety / _reaction_stiffness(p, fields), dt_cap)
                if abs(dt_new - dt) > 0.05 * dt:
                    dt = min(dt_new, 1.25 * dt)
                    stepper.reset_dt(dt)
            sub_dt = min(dt, t_stop - t)
            fields = stepper.step(fields, sub_dt)
            t += sub_dt
            step += 1
            for arr in fields.values():
                if not np.all(np.isfinite(arr)):
                    last = states[-1]
                    raise BlowUpError(
                        f"non-finite value at t = {t:.6g} (step {step}); the continuous "
                        "theory forbids blow-up for smooth data, so reduce dt",
                        last_state=last)
            min_val = min(min_val, min(float(np.min(a)) for a in fields.values()))
            if "u1" in fields:
                mass = max(mass, float(np.max(fields["u1"] + fields["u2"])))
            if monitor and bounds_ok:
                bounds_ok = monitor(fields)
        t = t_stop
        states.append(SimState(time=t, grid=grid,
                               fields={k: v.copy() for k, v in fields.items()},
                               dt=dt, step=step, scheme=ctrl.scheme))
    return Trajectory(states=states, min_value=min_val, max_mass=mass,
                      bounds_ok=bounds_ok)


def simulate_reduced(init: SimState, p: ModelParams, t_end: float,
                     dt_control: TimeStepControl | None = None,
                     snapshot_times=()) -> Trajectory:
    """Advance the reduced (u, v) system to t_end; u diffuses with 1/gamma."""
    if set(init.names) != set(REDUCED_FIELDS):
        raise ValueError("reduced state needs fields 'u' and 'v'")
    return _run(init, p, t_end, dt_control, snapshot_times)


def simulate_full(init: SimState, p: ModelParams, t_end: float,
                  dt_control: TimeStepControl | None = None,
                  snapshot_times=(), rectangle: "InvariantRectangle | None" = None
                  ) -> Trajectory:
    """Advance the 4-component system to t_end; u3 diffuses with 1/gamma.

    When `rectangle` is given, every step checks that (u3, u4) stays inside it
    and that u1 + u2 respects the mass bound; the verdict lands in
    Trajectory.bounds_ok.
    """
    if set(init.names) != set(FULL_FIELDS):
        raise ValueError("full state needs fields 'u1', 'u2', 'u3', 'u4'")
    monitor = None
    if rectangle is not None:
        def monitor(fields):
            return bool(np.max(fields["u3"]) < rectangle.rho3
                        and np.max(fields["u4"]) < rectangle.rho4
                        and np.max(fields["u1"] + fields["u2"]) <= rectangle.mass_bound + 1e-9)
    return _run(init, p, t_end, dt_control, monitor=monitor)


# ---------------------------------------------------------------------------
# invariant rectangle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InvariantRectangle:
    """Trapping box (0, rho3) x (0, rho4) for (u3, u4), with the receptor mass
    bound it relies on."""

    rho3: float
    rho4: float
    mass_bound: float   # m1/mu_B + max initial receptor level
    m_prime: float      # enlarged mass constant fixing the cutting line
    mu_b: float
    rho_star: float     # u3-coordinate of the single line/nullcline crossing

    def contains(self, u3, u4) -> bool:
        return bool(np.all(u3 < self.rho3) and np.all(u4 < self.rho4)
                    and np.all(u3 > 0) and np.all(u4 > 0))


def _line_crossings(p: ModelParams, m_prime: float, u4_hi: float) -> np.ndarray:
    """u4-values where the line u3 = (u4 + d*M')/mu3 meets the g-nullcline."""
    def gap(u4):
        return nullcline_psi(u4, p) - (u4 + p.d * m_prime) / p.mu3

    us = np.linspace(0.0, u4_hi, 4000)
    vals = gap(us)
    roots = []
    for i in np.nonzero(np.diff(np.sign(vals)) != 0)[0]:
        roots.append(brentq(gap, us[i], us[i + 1], xtol=1e-12))
    return np.asarray(roots)


def invariant_rectangle(init: SimState, p: ModelParams,
                        margin: float = 1.10) -> InvariantRectangle:
    """Construct a rectangle that traps (u3, u4), sized to the initial data.

    mu_B = min(mu1, mu2) bounds u1 + u2 by M = m1/mu_B + max(initial levels);
    M' >= M is enlarged until the line u4 = mu3*u3 - d*M' meets the
    g-nullcline exactly once in the first quadrant, then rho3 > rho* grows
    until the box contains the initial range, with rho4 = mu3*rho3 - d*M'.
    """
    mu_b = min(p.mu1, p.mu2)
    if "u1" in init.fields:
        # max over x of the receptor sum; the sum (not the larger field) is
        # what the decay estimate for u1 + u2 actually controls
        init_rec = float(np.max(init.fields["u1"] + init.fields["u2"]))
        u3_0 = float(np.max(init.fields["u3"]))
        u4_0 = float(np.max(init.fields["u4"]))
    else:
        init_rec = p.m1 / mu_b
        u3_0 = float(np.max(init.fields["u"]))
        u4_0 = float(np.max(init.fields["v"]))
    mass = p.m1 / mu_b + init_rec

    v_hi = 4.0 * (p.beta_l / p.sigma + u4_0 + 1.0)

    def n_crossings(m_prime):
        return len(_line_crossings(p, m_prime, v_hi))

    m_prime = mass * 1.01 + 0.1
    if n_crossings(m_prime) > 1:
        hi = m_prime
        for _ in range(200):
            hi *= 2.0
            if n_crossings(hi) == 1:
                break
        lo = m_prime
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if n_crossings(mid) == 1:
                hi = mid
            else:
                lo = mid
            if hi - lo <= 1e-8 * hi:
                break
        m_prime = hi * 1.02

    crossings = _line_crossings(p, m_prime, v_hi)
    u4_star = float(crossings[-1])
    rho_star = (u4_star + p.d * m_prime) / p.mu3

    rho3 = max(margin * rho_star, margin * u3_0,
               (margin * u4_0 + p.d * m_prime) / p.mu3)
    for _ in range(200):
        rho4 = p.mu3 * rho3 - p.d * m_prime
        if rho4 > margin * u4_0 and rho3 > u3_0:
            break
        rho3 *= 1.5
    return InvariantRectangle(rho3=float(rho3), rho4=float(rho4),
                              mass_bound=mass, m_prime=float(m_prime),
                              mu_b=mu_b, rho_star=rho_star)


def inward_margins(rect: InvariantRectangle, p: ModelParams,
                   n_samples: int = 1000) -> dict:
    """Worst-case inward components of the (F, G) field on the four edges.

    F is sampled with the receptor terms at their extremes (u1 >= 0,
    u2 <= mass bound); all four margins must be positive for trapping.
    """
    u4 = np.linspace(1e-6 * rect.rho4, rect.rho4, n_samples)
    # right edge u3 = rho3: need F < 0; F <= -mu3*rho3 + d*mass + u4
    f_right = -(-p.mu3 * rect.rho3 + p.d * rect.mass_bound + u4)
    u3 = np.linspace(1e-6 * rect.rho3, rect.rho3, n_samples)
    # top edge u4 = rho4: need G < 0
    g_top = -eval_g(u3, np.full_like(u3, rect.rho4), p)
    # bottom edge u4 = 0: need G >= 0 (G = m4*u3 > 0 for u3 > 0)
    g_bottom = eval_g(u3, np.zeros_like(u3), p)
    # left edge u3 = 0: need F >= 0; F = d*u2 + u4 >= u4
    f_left = u4
    return {"right": float(np.min(f_right)), "top": float(np.min(g_top)),
            "bottom": float(np.min(g_bottom)), "left": float(np.min(f_left))}


# ---------------------------------------------------------------------------
# comparison, basins, stability probe
# ---------------------------------------------------------------------------

@dataclass
class ComparisonReport:
    min_gap_u: float
    min_gap_v: float
    t_end: float
    passed: bool


def comparison_harness(init_low: SimState, init_high: SimState, p: ModelParams,
                       t_end: float, dt_control: TimeStepControl | None = None,
                       tol: float = 1e-9) -> ComparisonReport:
    """Run ordered initial data side by side and report the worst gap.

    Ordering of the inputs is a precondition; the reduced system's comparison
    structure (f_v > 0, g_u > 0) then keeps the gap nonnegative up to scheme
    tolerance.
    """
    if init_low.grid != init_high.grid:
        raise ValueError("comparison runs need a common grid")
    for n in REDUCED_FIELDS:
        if np.any(init_high.fields[n] < init_low.fields[n]):
            raise ValueError(f"init_high must dominate init_low componentwise ({n})")
    ctrl = dt_control or TimeStepControl(scheme="rk4")
    grid = init_low.grid
    dt = min(ctrl.resolve(p, grid, init_low.fields),
             ctrl.resolve(p, grid, init_high.fields))
    step_lo = _Stepper(p, grid, REDUCED_FIELDS, ctrl.scheme, dt)
    step_hi = _Stepper(p, grid, REDUCED_FIELDS, ctrl.scheme, dt)
    lo = {k: v.copy() for k, v in init_low.fields.items()}
    hi = {k: v.copy() for k, v in init_high.fields.items()}
    n_steps = max(1, int(math.ceil(t_end / dt)))
    sub = t_end / n_steps
    gap_u = float(np.min(hi["u"] - lo["u"]))
    gap_v = float(np.min(hi["v"] - lo["v"]))
    for _ in range(n_steps):
        lo = step_lo.step(lo, sub)
        hi = step_hi.step(hi, sub)
        gap_u = min(gap_u, float(np.min(hi["u"] - lo["u"])))
        gap_v = min(gap_v, float(np.min(hi["v"] - lo["v"])))
    return ComparisonReport(min_gap_u=gap_u, min_gap_v=gap_v, t_end=t_end,
                            passed=bool(gap_u >= -tol and gap_v >= -tol))


@dataclass
class BasinVerdict:
    verdict: str           # 'to-origin' | 'to-(u1,v1)' | 'undecided'
    case: str              # which theorem geometry applied ('S2', 'S1', 'straddle')
    final_distance: float
    target: tuple


def basin_convergence(init: SimState, portrait: PhasePortrait, p: ModelParams,
                      t_end: float = 200.0, tol: float = 1e-6,
                      dt_control: TimeStepControl | None = None) -> BasinVerdict:
    """Check convergence to a constant steady state per the basin geometry.

    The initial range is compared against the stable manifold through its
    componentwise extremes: if even the minima sit strictly above/right of a
    manifold point the whole range does (case S2), and mirrored for S1.
    Ranges straddling the manifold are the pattern-forming regime and come
    back 'undecided' without a convergence claim.
    """
    u_min = float(np.min(init.fields["u"]))
    v_min = float(np.min(init.fields["v"]))
    u_max = float(np.max(init.fields["u"]))
    v_max = float(np.max(init.fields["v"]))
    low_class = classify_region(u_min, v_min, portrait)
    high_class = classify_region(u_max, v_max, portrait)

    stable = [eq for eq in portrait.equilibria
              if eq.classification.startswith("stable") and eq.u > 0]
    attractor = (stable[0].u, stable[0].v) if stable else (float("nan"),) * 2

    if low_class == "S2":
        case, target = "S2", attractor
    elif high_class == "S1":
        case, target = "S1", (0.0, 0.0)
    else:
        traj = simulate_reduced(init, p, t_end, dt_control)
        return BasinVerdict(verdict="undecided", case="straddle",
                            final_distance=float("nan"),
                            target=(float("nan"), float("nan")))

    traj = simulate_reduced(init, p, t_end, dt_control)
    fin = traj.final
    dist = max(float(np.max(np.abs(fin.fields["u"] - target[0]))),
               float(np.max(np.abs(fin.fields["v"] - target[1]))))
    if dist < tol:
        verdict = "to-origin" if case == "S1" else "to-(u1,v1)"
    else:
        verdict = "undecided"
    return BasinVerdict(verdict=verdict, case=case, final_distance=dist, target=target)


@dataclass
class DriftReport:
    times: np.ndarray
    sup_drift_u: np.ndarray     # sup-norm drift of u from the unperturbed profile
    jump_location: np.ndarray   # argmax |du/dx| over time (jump proxy)
    amplitude: float


def stability_probe(profile, p: ModelParams, perturbation_amplitude: float,
                    t_end: float = 20.0, n_snapshots: int = 11,
                    grid: Grid1D | None = None, seed: int = 0,
                    dt_control: TimeStepControl | None = None) -> DriftReport:
    """Perturb a stationary layer by smooth noise and watch it drift.

    Observational only: reports sup-norm drift of u and the motion of the
    jump-location proxy argmax|du/dx|; no pass/fail is attached.
    """
    grid = grid or Grid1D(128)
    if abs(profile.gamma - p.gamma) > 1e-8 * max(1.0, p.gamma):
        raise ValueError("profile gamma and params gamma disagree")
    rng = np.random.default_rng(seed)
    x = grid.centers
    noise = np.zeros_like(x)
    for j in range(1, 5):
        noise += rng.normal() * np.cos(j * np.pi * x)
    if np.max(np.abs(noise)) > 0:
        noise *= perturbation_amplitude / np.max(np.abs(noise))
    base = state_from_profile(profile, grid)
    init = SimState(time=0.0, grid=grid,
                    fields={"u": np.maximum(base.fields["u"] + noise, 1e-12),
                            "v": np.maximum(base.fields["v"] + noise, 1e-12)})
    times = np.linspace(0.0, t_end, n_snapshots)
    traj = simulate_reduced(init, p, t_end, dt_control, snapshot_times=times[1:])
    h = grid.spacing
    drifts, jumps = [], []
    for s in traj.states:
        drifts.append(float(np.max(np.abs(s.fields["u"] - base.fields["u"]))))
        du = np.abs(np.diff(s.fields["u"]))
        jumps.append(float(x[np.argmax(du)] + 0.5 * h))
    return DriftReport(times=np.array([s.time for s in traj.states]),
                       sup_drift_u=np.array(drifts),
                       jump_location=np.array(jumps),
                       amplitude=perturbation_amplitude)
