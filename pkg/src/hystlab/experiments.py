"""Config-driven experiments and the built-in presets.

Each experiment consumes a ModelParams plus a flat option dict and returns an
ExperimentResult: CSV-ready tables, a scalar summary (for sweeps), optional
SVG plot requests and a list of assertions. The presets bundle the parameter
choices under which every quantitative claim of the acceptance suite is
checked; `all-presets` chains them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import asymptotics as asy
from . import evolution as ev
from . import stationary as st
from .errors import ConfigError
from .kinetics import (
    ModelParams,
    baseline_params,
    branch_h,
    branch_table,
    equilibria,
    eval_f,
    eval_g,
    jacobian,
    stable_manifold,
)

__all__ = ["Assertion", "ExperimentResult", "run_experiment", "EXPERIMENTS",
           "PRESETS", "preset_config", "EXPERIMENT_OPTIONS"]

# Reference readings for the headline reproduction: the published caption is
# internally inconsistent (its beta drops a digit of the balanced amplitude),
# so the declared configuration pins beta to the balanced value at caption
# precision and gamma to the inverse of the printed diffusion coefficient.
CAPTION_L = 0.46973
CAPTION_BETA_LITERAL = 3.731132
DECLARED_BETA = 3.7331132
CAPTION_D = 0.100044
DECLARED_GAMMA = 1.0 / CAPTION_D


@dataclass
class Assertion:
    name: str
    passed: bool
    measured: float
    expected: str

    def row(self):
        return (self.name, "pass" if self.passed else "FAIL", self.measured, self.expected)


@dataclass
class ExperimentResult:
    experiment: str
    assertions: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)     # name -> (header, rows)
    plots: list = field(default_factory=list)      # (name, title, xlabel, ylabel, series)
    summary: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def check(self, name: str, measured: float, ok: bool, expected: str):
        self.assertions.append(Assertion(name, bool(ok), float(measured), expected))


def _floats(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(t) for t in text]
    return [float(t) for t in str(text).split(",") if t.strip()]


# ---------------------------------------------------------------------------
# experiment runners
# ---------------------------------------------------------------------------

def run_phase_plane(p: ModelParams, opt: dict) -> ExperimentResult:
    res = ExperimentResult("phase-plane")
    eqs = equilibria(p)
    res.tables["equilibria"] = (
        ("u", "v", "classification", "eig1", "eig2"),
        [(e.u, e.v, e.classification, np.real(e.eigenvalues[0]),
          np.real(e.eigenvalues[1])) for e in eqs])
    port = stable_manifold(p, arclength_budget=float(opt["arclength_budget"]))
    res.tables["stable_manifold"] = (
        ("u", "v"), list(zip(port.manifold_u.tolist(), port.manifold_v.tolist())))
    res.summary = {"n_equilibria": len(eqs), "U_s": port.U_s, "V_s": port.V_s}
    res.check("origin-present", 0.0, any(e.u == 0 and e.v == 0 for e in eqs),
              "equilibria include (0,0)")
    if len(eqs) == 3:
        mid = eqs[1]
        det = float(np.linalg.det(jacobian(mid.u, mid.v, p)))
        res.check("saddle-determinant", det, det < 0, "det J(u_m, v_m) < 0")
        resid = max(abs(float(eval_f(mid.u, mid.v, p))), abs(float(eval_g(mid.u, mid.v, p))))
        res.check("equilibrium-residual", resid, resid < 1e-10, "|f|,|g| < 1e-10")
    res.check("manifold-endpoints", port.U_s,
              port.U_s > 0 and port.V_s > 0, "manifold reaches both positive axes")
    mono = bool(np.all(np.diff(port.manifold_u) > 0))
    res.check("manifold-injective", float(mono), mono, "u-projection strictly monotone")
    res.plots.append(("phase_plane", "stable manifold", "u", "v",
                      [("W^s", port.manifold_u, port.manifold_v)]))
    return res


def run_stationary(p: ModelParams, opt: dict) -> ExperimentResult:
    res = ExperimentResult("stationary")
    beta, m = float(opt["beta"]), float(opt["m"])
    prof = st.construct_profile(beta, m, p, grid_size=int(opt["grid_size"]))
    _profile_outputs(res, prof, p)
    resid = float(np.max(np.abs(st.stationary_residual(prof, p))))
    res.check("weak-residual", resid, resid < float(opt["resid_tol"]),
              f"cellwise residual < {opt['resid_tol']}")
    mismatch = _jump_slope_mismatch(prof)
    res.check("c1-across-jump", mismatch, mismatch < 1e-8,
              "slope mismatch/sqrt(gamma) < 1e-8")
    return res


def _jump_slope_mismatch(prof) -> float:
    eps = 1e-12
    sl = float(prof.slope(np.array([prof.l - eps]))[0])
    sr = float(prof.slope(np.array([prof.l + eps]))[0])
    return abs(sl - sr) / math.sqrt(prof.gamma)


def _profile_outputs(res: ExperimentResult, prof, p: ModelParams):
    res.tables["profile"] = (
        ("x", "u", "v", "branch"),
        list(zip(prof.x_grid.tolist(), prof.u_values.tolist(),
                 prof.v_values.tolist(), prof.branch_at(prof.x_grid).tolist())))
    res.summary.update({"beta": prof.beta, "m": prof.m, "gamma": prof.gamma,
                        "l": prof.l, "k": prof.k, "p": prof.p})
    res.plots.append(("profile", f"layer profile (gamma={prof.gamma:.6g})", "x", "u, v",
                      [("u", prof.x_grid, prof.u_values),
                       ("v", prof.x_grid, prof.v_values)]))


def run_gamma_solve(p: ModelParams, opt: dict) -> ExperimentResult:
    res = ExperimentResult("gamma-solve")
    beta = float(opt["beta"])
    target = float(opt["gamma_target"])
    profs = st.solve_for_gamma(beta, target, p, grid_size=int(opt["grid_size"]))
    res.summary = {"n_solutions": len(profs)}
    res.check("solutions-found", len(profs), len(profs) >= 1,
              "at least one layer at the requested gamma")
    for i, prof in enumerate(profs):
        err = abs(prof.gamma / target - 1.0)
        res.check(f"gamma-match-{i}", prof.gamma, err < 1e-8,
                  f"gamma = {target:.10g} (rel 1e-8)")
        mono = bool(np.all(np.diff(prof.u_values) >= 0))
        res.check(f"monotone-{i}", float(mono), mono, "u nondecreasing on the grid")
    if profs:
        _profile_outputs(res, profs[0], p)
    if opt.get("l_target") not in (None, ""):
        l_target, l_tol = float(opt["l_target"]), float(opt["l_tol"])
        prof = profs[0]
        res.check("jump-location", prof.l, abs(prof.l - l_target) <= l_tol,
                  f"l = {l_target} +- {l_tol}")
        tab = branch_table(p)
        v_left = float(branch_h(0, min(prof.beta, tab.u_plus), p))
        v_right = float(branch_h(1, prof.beta, p))
        iL = np.searchsorted(prof.x_grid, prof.l) - 1
        ok_jump = (abs(prof.v_values[iL] - float(branch_h(0, prof.u_values[iL], p))) < 1e-9
                   and abs(prof.v_values[iL + 1] - float(branch_h(1, prof.u_values[iL + 1], p))) < 1e-9)
        res.check("v-branch-switch", v_right - v_left, ok_jump,
                  "v follows h0 left of l and h1 right of l")
    return res


def run_fig_gradient(p: ModelParams, opt: dict) -> ExperimentResult:
    """Headline reproduction with the declared caption readings, plus the
    measured alternatives for diagnosis."""
    res = run_gamma_solve(p, opt)
    res.experiment = "fig-gradient"
    lit = st.solve_for_gamma(CAPTION_BETA_LITERAL, DECLARED_GAMMA, p, grid_size=257)
    res.notes.append(
        f"literal caption beta={CAPTION_BETA_LITERAL}: l={lit[0].l:.6f} "
        f"(misses {CAPTION_L} by {abs(lit[0].l - CAPTION_L):.2e}; declared reading "
        f"restores the dropped digit: beta*={st.critical_beta(p):.7f})")
    alt = st.solve_for_gamma(float(opt["beta"]), 1.0 / CAPTION_D ** 2, p, grid_size=257)
    res.notes.append(
        f"alternative D=1/sqrt(gamma) reading (gamma={1.0/CAPTION_D**2:.4f}): "
        f"l={alt[0].l:.6f} (fails the target by a wide margin, as expected)")
    res.summary["l_literal_beta"] = lit[0].l
    res.summary["l_sqrt_reading"] = alt[0].l
    return res


def run_oracle_equivalence(p: ModelParams, opt: dict) -> ExperimentResult:
    res = ExperimentResult("oracle-equivalence")
    rng = np.random.default_rng(int(opt["seed"]))
    n = int(opt["n_samples"])
    tab = branch_table(p)
    pot = st.potentials(p)
    lo = tab.u_minus + 0.08 * (tab.u_plus - tab.u_minus)
    hi = min(tab.u_plus, pot.u1) - 0.08 * (tab.u_plus - tab.u_minus)
    rows = []
    worst = 0.0
    for i in range(n):
        beta = float(rng.uniform(lo, hi))
        m_lo, m_sup = st.admissible_slope_interval(beta, p)
        m = float(rng.uniform(0.05, 0.95)) * m_sup
        prof = st.construct_profile(beta, m, p, grid_size=513)
        u_sh, g_sh, l_sh = st.shooting_profile(beta, m, p, prof.x_grid)
        err = float(np.max(np.abs(u_sh - prof.u_values)))
        worst = max(worst, err)
        rows.append((i, beta, m, prof.gamma, prof.l, err))
    res.tables["samples"] = (("i", "beta", "m", "gamma", "l", "max_pointwise_err"), rows)
    res.summary = {"worst_err": worst, "n_samples": n}
    res.check("oracle-agreement", worst, worst < 1e-6,
              "max pointwise |quadrature - shooting| < 1e-6 over all samples")
    return res


def run_layer_asymptotics(p: ModelParams, opt: dict) -> ExperimentResult:
    """Theorem-limit diagnostics: the m->0 collapse and the three m->sup cases."""
    res = ExperimentResult("layer-asymptotics")
    beta_star = st.critical_beta(p)
    pot = st.potentials(p)

    # (i) m -> 0: gamma decreasing through decades, profile flattens to beta
    beta0 = float(opt["beta"])
    fam = st._Family(p, beta0)
    m_seq = [fam.m_sup * 10.0 ** (-j) for j in range(1, 1 + int(opt["decades"]))]
    diag0 = st.layer_limit_diagnostics(beta0, p, m_sequence=m_seq, grid_size=129)
    g0 = diag0.column("gamma")
    res.tables["small_m"] = (
        ("m", "gamma", "l", "sup_u_minus_beta"),
        [(r["m"], r["gamma"], r["l"], max(beta0 - r["k"], (pot.u1 - r["tau_p"]) - beta0))
         for r in diag0.rows])
    res.check("gamma-decreasing", float(np.max(np.diff(g0))),
              bool(np.all(np.diff(g0) < 0)), "gamma strictly decreasing along decades")
    res.check("gamma-small", float(g0[-1]), g0[-1] < 1e-3, "gamma < 1e-3 at smallest m")
    flat = max(beta0 - diag0.rows[-1]["k"], (pot.u1 - diag0.rows[-1]["tau_p"]) - beta0)
    res.check("u-flattens", flat, flat < 1e-3, "sup|u - beta| < 1e-3 at smallest m")

    # (ii) boundary/interior layer limits
    zs = _floats(opt["tail_sequence"])
    cases = {
        "a": (float(opt["beta_a"]), "k", 1.0),
        "b": (beta_star, "k", float(np.sqrt(pot.A1) / (np.sqrt(pot.A1) + np.sqrt(pot.A0)))),
        "c": (float(opt["beta_c"]), "tau", 0.0),
    }
    for label, (beta, kind, l_target) in cases.items():
        kwargs = {"k_sequence": zs} if kind == "k" else {"tau_sequence": zs}
        diag = st.layer_limit_diagnostics(beta, p, grid_size=129, **kwargs)
        res.tables[f"case_{label}"] = (
            ("m", "k", "tau_p", "gamma", "l", "u_sup_left", "u_inf_right"),
            [(r["m"], r["k"], r["tau_p"], r["gamma"], r["l"],
              r["u_sup_left"], r["u_inf_right"]) for r in diag.rows])
        g = diag.column("gamma")
        l_last = diag.rows[-1]["l"]
        res.check(f"case-{label}-gamma-increasing", float(np.min(np.diff(g))),
                  bool(np.all(np.diff(g) > 0)), "gamma increasing toward the limit")
        res.check(f"case-{label}-gamma-large", float(g[-1]), g[-1] > 1e4,
                  "gamma > 1e4 at the last sample")
        res.check(f"case-{label}-l-limit", float(l_last), abs(l_last - l_target) < 0.02,
                  f"l within 0.02 of {l_target:.5f}")
        res.summary[f"l_case_{label}"] = float(l_last)
    res.summary["beta_star"] = beta_star
    return res


def run_uniqueness_scan(p: ModelParams, opt: dict) -> ExperimentResult:
    res = ExperimentResult("uniqueness-scan")
    beta = float(opt["beta"])
    rep = st.uniqueness_scan(beta, p, n_points=int(opt["n_points"]))
    res.tables["T_of_k"] = (("k", "T"), rep.T_samples)
    res.summary = {"beta": beta, "monotone": rep.monotone_flag,
                   "gamma_star": rep.gamma_star,
                   "beta_window_lo": rep.beta_window[0],
                   "beta_window_hi": rep.beta_window[1],
                   "dpdk_err": rep.dpdk_max_rel_err}
    lo, hi = rep.beta_window
    res.check("beta-in-window", beta, lo < beta < hi,
              f"beta inside the determinant window ({lo:.4f}, {hi:.4f})")
    dT = np.diff([t for _, t in rep.T_samples])
    res.check("T-strictly-decreasing", float(np.max(dT)), bool(np.all(dT < 0)),
              "every consecutive T difference negative")
    res.check("dpdk-identity", rep.dpdk_max_rel_err, rep.dpdk_max_rel_err < 1e-4,
              "dp/dk matches F0(k)/F1(p(k)) to 1e-4")
    ks = np.array([k for k, _ in rep.T_samples])
    Ts = np.array([t for _, t in rep.T_samples])
    res.plots.append(("T_of_k", f"T(k) at beta={beta:.5f}", "log10 k", "T",
                      [("T", np.log10(ks), Ts)]))
    return res


def run_modes(p: ModelParams, opt: dict) -> ExperimentResult:
    res = ExperimentResult("modes")
    base = st.solve_for_gamma(float(opt["beta"]), float(opt["gamma_target"]), p,
                              grid_size=int(opt["grid_size"]))[0]
    gamma_star = base.gamma
    rows = []
    for n in (1, 2, 3, 4):
        for sign in ("+", "-"):
            prof = st.mode_n(base, n, sign)
            resid = float(np.max(np.abs(st.stationary_residual(prof, p))))
            rows.append((n, sign, prof.gamma, resid))
            if sign == "+":
                res.check(f"mode-{n}-residual", resid, resid < 1e-6,
                          f"weak residual < 1e-6 at gamma = {n*n}*gamma*")
                res.check(f"mode-{n}-gamma", prof.gamma,
                          abs(prof.gamma - n * n * gamma_star) < 1e-12 * gamma_star * n * n,
                          "gamma = n^2 gamma*")
    res.tables["modes"] = (("n", "sign", "gamma", "max_residual"), rows)
    res.summary = {"gamma_star": gamma_star}
    return res


def run_appendix_lemma(p: ModelParams, opt: dict) -> ExperimentResult:
    res = ExperimentResult("appendix-lemma")
    a_seq = [10.0 ** (-e) for e in np.linspace(1.5, float(opt["min_exponent"]),
                                               int(opt["n_points"]))]
    quad_g = asy.SingularIntegrand(g=lambda x: -0.5 * x * x, gp=lambda x: -x,
                                   gpp=lambda x: -1.0)
    cubic_g = asy.SingularIntegrand(g=lambda x: -0.5 * x * x * (1.0 + x),
                                    gp=lambda x: -x - 1.5 * x * x,
                                    gpp=lambda x: -1.0 - 3.0 * x)
    fit_q = asy.log_slope_fit(quad_g, a_seq)
    fit_c = asy.log_slope_fit(cubic_g, a_seq)
    res.tables["quadratic_fit"] = (("a", "I", "log_inv_a", "residual"), fit_q.table)
    res.tables["cubic_fit"] = (("a", "I", "log_inv_a", "residual"), fit_c.table)
    res.check("quadratic-slope", fit_q.slope, abs(fit_q.slope - 1.0) < 0.01,
              "slope = 1 +- 0.01 for g = -x^2/2")
    res.check("cubic-slope", fit_c.slope, abs(fit_c.slope - 1.0) < 0.02,
              "slope = 1 +- 0.02 for g = -x^2(1+x)/2 (only g''(0) matters)")

    # model application: the half-width integrals obey the same log law; the
    # balanced amplitude admits both k -> 0 and p -> u1
    beta = float(opt["beta"]) if opt["beta"] not in ("", "auto") else st.critical_beta(p)
    fam = st._Family(p, beta)
    pot = fam.pot
    zs = np.array([10.0 ** (-e) for e in np.linspace(2.0, 5.0, 8)])
    M_vals = np.array([fam._kernel(0, fam.pair_from_k(z), cumulative=False) for z in zs])
    N_vals = np.array([fam._kernel(1, fam.pair_from_tau(z), cumulative=False) for z in zs])
    slope_M = float(np.polyfit(np.log(1.0 / zs), M_vals, 1)[0])
    slope_N = float(np.polyfit(np.log(1.0 / zs), N_vals, 1)[0])
    tgt_M, tgt_N = 1.0 / math.sqrt(pot.A0), 1.0 / math.sqrt(pot.A1)
    res.tables["half_width_fits"] = (
        ("k_or_tau", "M", "N"),
        [(z, m_, n_) for z, m_, n_ in zip(zs.tolist(), M_vals.tolist(), N_vals.tolist())])
    res.check("M-log-slope", slope_M, abs(slope_M / tgt_M - 1.0) < 0.02,
              f"slope = 1/sqrt|F0'(0)| = {tgt_M:.6f} within 2%")
    res.check("N-log-slope", slope_N, abs(slope_N / tgt_N - 1.0) < 0.02,
              f"slope = 1/sqrt|F1'(u1)| = {tgt_N:.6f} within 2%")
    res.summary = {"quadratic_slope": fit_q.slope, "cubic_slope": fit_c.slope,
                   "M_slope": slope_M, "N_slope": slope_N}
    return res


def _random_full_state(grid: ev.Grid1D, rng) -> ev.SimState:
    fields = {}
    x = grid.centers
    for name in ev.FULL_FIELDS:
        base = rng.uniform(0.1, 2.5)
        wig = rng.uniform(0.0, 0.8) * np.cos(rng.integers(1, 4) * np.pi * x)
        fields[name] = np.maximum(base + wig, 0.05)
    return ev.SimState(time=0.0, grid=grid, fields=fields)


def run_simulate_full(p: ModelParams, opt: dict) -> ExperimentResult:
    res = ExperimentResult("simulate-full")
    n_runs = int(opt["n_runs"])
    grid = ev.Grid1D(int(opt["n_cells"]))
    ctrl = ev.TimeStepControl(scheme=str(opt["scheme"]))
    rng = np.random.default_rng(int(opt["seed"]))
    rows = []
    worst_min, all_bounded = np.inf, True
    for i in range(n_runs):
        init = _random_full_state(grid, rng)
        rect = ev.invariant_rectangle(init, p)
        traj = ev.simulate_full(init, p, float(opt["t_end"]), ctrl, rectangle=rect)
        margins = ev.inward_margins(rect, p)
        rows.append((i, rect.rho3, rect.rho4, rect.mass_bound, traj.min_value,
                     traj.max_mass, traj.bounds_ok, min(margins.values())))
        worst_min = min(worst_min, traj.min_value)
        all_bounded = all_bounded and traj.bounds_ok and min(margins.values()) > 0
    res.tables["runs"] = (("i", "rho3", "rho4", "mass_bound", "min_value",
                           "max_mass", "bounds_ok", "min_inward_margin"), rows)
    res.summary = {"worst_min": worst_min, "all_bounded": all_bounded}
    res.check("positivity", worst_min, worst_min > -1e-12,
              "all fields stay above -1e-12")
    res.check("boundedness", float(all_bounded), all_bounded,
              "trajectories stay inside their invariant rectangles")
    return res


def run_simulate_reduced(p: ModelParams, opt: dict) -> ExperimentResult:
    res = ExperimentResult("simulate-reduced")
    grid = ev.Grid1D(int(opt["n_cells"]))
    ctrl = ev.TimeStepControl(scheme=str(opt["scheme"]))
    init = ev.SimState.constant(grid, {"u": float(opt["u0"]), "v": float(opt["v0"])})
    times = np.linspace(0.0, float(opt["t_end"]), 9)[1:]
    traj = ev.simulate_reduced(init, p, float(opt["t_end"]), ctrl,
                               snapshot_times=times)
    rows = [(s.time, float(np.min(s.fields["u"])), float(np.max(s.fields["u"])),
             float(np.min(s.fields["v"])), float(np.max(s.fields["v"])))
            for s in traj.states]
    res.tables["trajectory"] = (("t", "u_min", "u_max", "v_min", "v_max"), rows)
    res.summary = {"u_final": rows[-1][2], "v_final": rows[-1][4],
                   "min_value": traj.min_value}
    res.check("positivity", traj.min_value, traj.min_value > -1e-12,
              "fields stay above -1e-12")
    return res


def run_comparison(p: ModelParams, opt: dict) -> ExperimentResult:
    res = ExperimentResult("comparison")
    grid = ev.Grid1D(int(opt["n_cells"]))
    rng = np.random.default_rng(int(opt["seed"]))
    x = grid.centers
    rows = []
    worst = np.inf
    for i in range(int(opt["n_pairs"])):
        base_u = rng.uniform(0.2, 4.0) + rng.uniform(0, 1.5) * np.cos(
            rng.integers(1, 4) * np.pi * x)
        base_v = rng.uniform(0.2, 6.0) + rng.uniform(0, 1.5) * np.cos(
            rng.integers(1, 4) * np.pi * x)
        off_u = rng.uniform(0.02, 0.6) * (1.0 + rng.uniform(0, 1) * np.cos(np.pi * x) ** 2)
        off_v = rng.uniform(0.02, 0.6) * (1.0 + rng.uniform(0, 1) * np.sin(np.pi * x) ** 2)
        lo = ev.SimState(0.0, grid, {"u": np.maximum(base_u, 0.05),
                                     "v": np.maximum(base_v, 0.05)})
        hi = ev.SimState(0.0, grid, {"u": lo.fields["u"] + off_u,
                                     "v": lo.fields["v"] + off_v})
        rep = ev.comparison_harness(lo, hi, p, float(opt["t_end"]))
        rows.append((i, rep.min_gap_u, rep.min_gap_v, rep.passed))
        worst = min(worst, rep.min_gap_u, rep.min_gap_v)
    res.tables["pairs"] = (("i", "min_gap_u", "min_gap_v", "passed"), rows)
    res.summary = {"worst_gap": worst}
    res.check("ordering-preserved", worst, worst >= -1e-9,
              "componentwise ordering preserved up to -1e-9")
    return res


def run_basin(p: ModelParams, opt: dict) -> ExperimentResult:
    res = ExperimentResult("basin")
    grid = ev.Grid1D(int(opt["n_cells"]))
    port = stable_manifold(p)
    tol, t_end = float(opt["tol"]), float(opt["t_end"])
    eqs = [e for e in port.equilibria if e.classification == "stable-node" and e.u > 0]
    u1v1 = (eqs[0].u, eqs[0].v)

    above = ev.SimState.constant(grid, {"u": float(opt["u_high"]), "v": float(opt["v_high"])})
    v_above = ev.basin_convergence(above, port, p, t_end=t_end, tol=tol)
    below = ev.SimState.constant(grid, {"u": float(opt["u_low"]), "v": float(opt["v_low"])})
    v_below = ev.basin_convergence(below, port, p, t_end=t_end, tol=tol)
    res.tables["verdicts"] = (
        ("case", "verdict", "final_distance", "target_u", "target_v"),
        [("S2", v_above.verdict, v_above.final_distance, *v_above.target),
         ("S1", v_below.verdict, v_below.final_distance, *v_below.target)])
    res.summary = {"S2_distance": v_above.final_distance,
                   "S1_distance": v_below.final_distance}
    res.check("S2-to-positive-attractor", v_above.final_distance,
              v_above.verdict == "to-(u1,v1)",
              f"sup distance to ({u1v1[0]:.4f}, {u1v1[1]:.4f}) < {tol}")
    res.check("S1-to-origin", v_below.final_distance,
              v_below.verdict == "to-origin", f"sup distance to (0,0) < {tol}")
    return res


def run_stability_probe(p: ModelParams, opt: dict) -> ExperimentResult:
    res = ExperimentResult("stability-probe")
    prof = st.solve_for_gamma(float(opt["beta"]), p.gamma, p, grid_size=257)[0]
    rep = ev.stability_probe(prof, p, float(opt["amplitude"]),
                             t_end=float(opt["t_end"]), seed=int(opt["seed"]))
    res.tables["drift"] = (("t", "sup_drift_u", "jump_location"),
                           list(zip(rep.times.tolist(), rep.sup_drift_u.tolist(),
                                    rep.jump_location.tolist())))
    res.summary = {"final_drift": float(rep.sup_drift_u[-1]),
                   "jump_shift": float(abs(rep.jump_location[-1] - rep.jump_location[0]))}
    # observational: no pass/fail attached (stability is not settled theory)
    return res


EXPERIMENTS = {
    "phase-plane": run_phase_plane,
    "stationary": run_stationary,
    "gamma-solve": run_gamma_solve,
    "fig-gradient": run_fig_gradient,
    "oracle-equivalence": run_oracle_equivalence,
    "layer-asymptotics": run_layer_asymptotics,
    "uniqueness-scan": run_uniqueness_scan,
    "modes": run_modes,
    "appendix-lemma": run_appendix_lemma,
    "simulate-full": run_simulate_full,
    "simulate-reduced": run_simulate_reduced,
    "basin": run_basin,
    "comparison": run_comparison,
    "stability-probe": run_stability_probe,
}

EXPERIMENT_OPTIONS = {
    "phase-plane": {"arclength_budget": 500.0},
    "stationary": {"beta": DECLARED_BETA, "m": 3.0, "grid_size": 1025,
                   "resid_tol": 1e-6},
    "gamma-solve": {"beta": DECLARED_BETA, "gamma_target": DECLARED_GAMMA,
                    "grid_size": 1025, "l_target": "", "l_tol": 1e-3},
    "fig-gradient": {"beta": DECLARED_BETA, "gamma_target": DECLARED_GAMMA,
                     "grid_size": 1025, "l_target": CAPTION_L, "l_tol": 1e-3},
    "oracle-equivalence": {"seed": 20240601, "n_samples": 20},
    "layer-asymptotics": {"beta": DECLARED_BETA, "decades": 4,
                          "beta_a": 3.0, "beta_c": 4.5,
                          "tail_sequence": "1e-20,1e-60,1e-120"},
    "uniqueness-scan": {"beta": DECLARED_BETA, "n_points": 200},
    "modes": {"beta": DECLARED_BETA, "gamma_target": DECLARED_GAMMA,
              "grid_size": 1025},
    "appendix-lemma": {"min_exponent": 5.0, "n_points": 12, "beta": "auto"},
    "simulate-full": {"n_runs": 50, "n_cells": 24, "t_end": 10.0,
                      "scheme": "rk4", "seed": 42},
    "simulate-reduced": {"n_cells": 32, "t_end": 10.0, "scheme": "imex",
                         "u0": 1.0, "v0": 1.0},
    "comparison": {"n_pairs": 20, "n_cells": 24, "t_end": 5.0, "seed": 7},
    "basin": {"n_cells": 16, "t_end": 200.0, "tol": 1e-6,
              "u_high": 8.5, "v_high": 14.0, "u_low": 0.3, "v_low": 0.3},
    "stability-probe": {"beta": DECLARED_BETA, "amplitude": 1e-3,
                        "t_end": 20.0, "seed": 0},
}

# presets: named configurations whose assertions mirror the acceptance criteria
PRESETS = {
    "fig-gradient": ("golden-figure reproduction (criterion 1)", "fig-gradient", {}),
    "oracle-equivalence": ("quadrature vs shooting on random layers (criterion 2)",
                           "oracle-equivalence", {}),
    "layer-limits": ("small-m collapse and the three large-m cases (criterion 3)",
                     "layer-asymptotics", {}),
    "uniqueness": ("T(k) monotonicity and dp/dk identity (criterion 4)",
                   "uniqueness-scan", {}),
    "modes": ("reflected/tiled solutions at n^2 gamma* (criterion 5)", "modes", {}),
    "appendix-lemma": ("log-law slopes, analytic and model (criterion 6)",
                       "appendix-lemma", {}),
    "boundedness": ("randomized positivity/invariant-rectangle runs (criterion 7)",
                    "simulate-full", {}),
    "comparison": ("randomized ordered pairs for the reduced system (criterion 8)",
                   "comparison", {}),
    "basin": ("constant-data convergence on both sides of W^s (criterion 9)",
              "basin", {}),
}


def preset_config(name: str) -> tuple[ModelParams, str, dict]:
    """(params, experiment id, options) of a preset; baseline model throughout."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    _, exp_id, overrides = PRESETS[name]
    opt = dict(EXPERIMENT_OPTIONS[exp_id])
    opt.update(overrides)
    return baseline_params(), exp_id, opt


def run_experiment(exp_id: str, p: ModelParams, options: dict) -> ExperimentResult:
    if exp_id not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment id {exp_id!r}; "
                          f"known: {', '.join(sorted(EXPERIMENTS))}")
    opt = dict(EXPERIMENT_OPTIONS[exp_id])
    for key, val in options.items():
        if key not in opt:
            raise ConfigError(f"unknown option {key!r} for experiment {exp_id!r}; "
                              f"known: {', '.join(sorted(opt))}")
        opt[key] = val
    for key, val in opt.items():
        try:
            num = float(val)
        except (TypeError, ValueError):
            continue
        if ("tol" in key or key.startswith("t_end")) and num <= 0:
            raise ConfigError(f"option {key!r} must be positive, got {val!r}")
    return EXPERIMENTS[exp_id](p, opt)
