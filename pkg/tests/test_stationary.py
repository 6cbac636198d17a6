import numpy as np
import pytest
from scipy.integrate import quad

import hystlab as H
from hystlab import stationary as st
from hystlab.errors import BranchDomainError, InfeasibleSlopeError

BETA = 3.7331132           # balanced amplitude at caption precision
GAMMA_TARGET = 1.0 / 0.100044


@pytest.fixture(scope="module")
def pot(params):
    return st.potentials(params)


@pytest.fixture(scope="module")
def family(params):
    return st._Family(params, BETA)


# ---------------------------------------------------------------------------
# branch reactions and potentials
# ---------------------------------------------------------------------------

def test_reaction_vanishes_at_equilibria(params, pot):
    assert abs(st.reaction_on_branch(0, 1e-300, params)) < 1e-290
    assert abs(st.reaction_on_branch(1, pot.u1, params)) < 1e-10


def test_reaction_sign_on_lower_branch(params, pot):
    us = np.linspace(1e-6, pot.u_plus * (1 - 1e-9), 1000)
    assert np.all(st.reaction_on_branch(0, us, params) < 0)


def test_reaction_positive_between_fold_and_attractor(params, pot):
    us = np.linspace(pot.u_minus * 1.001, pot.u1 * 0.999, 1000)
    assert np.all(st.reaction_on_branch(1, us, params) > 0)


def test_reaction_end_slopes_negative(params, pot):
    h = 1e-6
    d0 = (st.reaction_on_branch(0, h, params) - 0.0) / h
    assert d0 < 0
    assert d0 == pytest.approx(-2.7, rel=1e-5)   # -mu3 - m1*b/(mu2+d) + m4/delta
    d1 = (st.reaction_on_branch(1, pot.u1 + h, params)
          - st.reaction_on_branch(1, pot.u1 - h, params)) / (2 * h)
    assert d1 < 0
    assert abs(d1) == pytest.approx(pot.A1, rel=1e-5)


def test_potential_values_against_adaptive_quadrature(params, pot):
    assert st.potential(0, 0.0, params) == 0.0
    assert st.potential(1, pot.u1, params) == 0.0
    for W in (0.05, 0.7, 2.0, BETA, pot.u_plus * 0.98):
        ref = quad(lambda z: float(st.reaction_on_branch(0, z, params)),
                   0.0, W, epsabs=1e-13, limit=300)[0]
        assert st.potential(0, W, params) == pytest.approx(ref, abs=2e-11)
    for W in (2.2, BETA, 6.0, pot.u1 * 0.999):
        ref = quad(lambda z: float(st.reaction_on_branch(1, z, params)),
                   pot.u1, W, epsabs=1e-13, limit=300)[0]
        assert st.potential(1, W, params) == pytest.approx(ref, abs=2e-11)


def test_potential_negative_inside_domains(params, pot):
    us = np.linspace(1e-3, pot.u_plus * (1 - 1e-6), 400)
    assert np.all(pot.value0(us) < 0)
    ws = np.linspace(pot.u_minus * 1.01, pot.u1 * (1 - 1e-9), 400)
    assert np.all(pot.value1(ws) < 0)


def test_potential_derivative_is_reaction(params, pot):
    h = 1e-6
    d = (st.potential(0, BETA + h, params) - st.potential(0, BETA - h, params)) / (2 * h)
    assert d == pytest.approx(float(st.reaction_on_branch(0, BETA, params)), abs=1e-8)


def test_potential_domain_errors(params, pot):
    with pytest.raises(BranchDomainError):
        st.potential(0, pot.u_plus * 1.01, params)
    with pytest.raises(BranchDomainError):
        st.potential(1, pot.u_minus * 0.9, params)


def test_stable_difference_matches_plain_subtraction(params, pot):
    # moderate arguments: the stable path must agree with naive differencing
    k = 1.2
    ws = np.array([1.5, 2.0, 3.0, 4.5])
    naive = pot.value0(k) - pot.value0(ws)
    assert np.max(np.abs(pot.diff0(k, ws) / naive - 1.0)) < 1e-10
    tau_p = 1.0
    taus = np.array([1.4, 2.3, 3.7])
    naive1 = pot.value1(pot.u1 - tau_p) - pot.value1(pot.u1 - taus)
    assert np.max(np.abs(pot.diff1(tau_p, taus) / naive1 - 1.0)) < 1e-10


# ---------------------------------------------------------------------------
# turning values
# ---------------------------------------------------------------------------

def test_turning_values_defining_equations(params, family):
    m = 3.1
    k, p = st.solve_turning_values(BETA, m, params)
    assert 0 < k < BETA < p < family.pot.u1
    r0 = family.pot.value0(k) - 0.5 * m * m - family.cF0b
    r1 = family.pot.value1(p) - 0.5 * m * m - family.cF1b
    assert abs(r0) < 1e-12 and abs(r1) < 1e-12


def test_turning_values_collapse_as_m_vanishes(params):
    k1, p1 = st.solve_turning_values(BETA, 1e-3, params)
    k2, p2 = st.solve_turning_values(BETA, 1e-5, params)
    assert abs(k1 - BETA) < 1e-5 and abs(p1 - BETA) < 1e-5
    assert abs(k2 - BETA) < abs(k1 - BETA) and abs(p2 - BETA) < abs(p1 - BETA)


def test_turning_values_case_a_limit(params):
    # below the balanced amplitude the curlyF0 side saturates: k -> 0 while p
    # stays away from u1
    beta = 3.0
    fam = st._Family(params, beta)
    m = fam.m_sup * (1 - 1e-12)
    k, p = st.solve_turning_values(beta, m, params)
    assert k < 1e-4
    assert p < fam.pot.u1 - 0.5


def test_infeasible_slope_reports_bounds(params, family):
    with pytest.raises(InfeasibleSlopeError) as err:
        st.solve_turning_values(BETA, family.m_sup * 1.01, params)
    assert "sqrt(2|curlyF0(beta)|)" in str(err.value)
    with pytest.raises(InfeasibleSlopeError):
        st.solve_turning_values(BETA, 0.0, params)


# ---------------------------------------------------------------------------
# half widths
# ---------------------------------------------------------------------------

def test_half_widths_positive_and_small_m_bound(params, family):
    for m in (0.01, 0.5, 3.0):
        M, N = st.half_widths(BETA, m, params)
        assert M > 0 and N > 0
    m = 1e-3
    k, _ = st.solve_turning_values(BETA, m, params)
    M, N = st.half_widths(BETA, m, params)
    bound = 2 * np.sqrt(BETA - k) / np.sqrt(abs(st.reaction_on_branch(0, BETA, params)))
    assert M <= bound
    assert M < 1e-3


def test_half_width_against_quad_reference(params, family):
    # independent s^2-substitution reference evaluated with scipy.quad
    m = 3.1
    pair = family.pair_from_m(m)
    pot = family.pot
    k, beta = pair.k, BETA
    cF0k = float(pot.value0(k))

    def integrand(s):
        if s == 0.0:
            return 2 * np.sqrt(beta - k) / np.sqrt(
                2 * abs(st.reaction_on_branch(0, k, params)))
        w = k + (beta - k) * s * s
        return 2 * (beta - k) * s / np.sqrt(2 * (cF0k - float(pot.value0(w))))

    ref = quad(integrand, 0.0, 1.0, epsabs=1e-13, limit=300)[0]
    M, _ = family.half_widths(pair)
    assert M == pytest.approx(ref, rel=1e-9)


def test_half_width_log_law(params, family):
    pot = family.pot
    ks = np.array([1e-3, 1e-5, 1e-7, 1e-9])
    Ms = np.array([family._kernel(0, family.pair_from_k(k), cumulative=False)
                   for k in ks])
    slope = np.polyfit(np.log(1 / ks), Ms, 1)[0]
    assert slope == pytest.approx(1 / np.sqrt(pot.A0), rel=0.02)


def test_half_width_deep_tail_consistency(params, family):
    # the log law continues to machine-range k: increments per decade constant
    Ms = [family._kernel(0, family.pair_from_k(10.0 ** (-e)), cumulative=False)
          for e in (40, 80, 120)]
    d1, d2 = Ms[1] - Ms[0], Ms[2] - Ms[1]
    assert d1 == pytest.approx(d2, rel=1e-8)
    assert d1 == pytest.approx(40 * np.log(10) / np.sqrt(family.pot.A0), rel=1e-6)


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

def test_golden_profile(golden_profile):
    assert golden_profile.gamma == pytest.approx(GAMMA_TARGET, rel=1e-9)
    assert abs(golden_profile.l - 0.46973) < 1e-3
    assert np.all(np.diff(golden_profile.u_values) >= 0)


def test_profile_weak_residual_and_c1(params, golden_profile):
    res = st.stationary_residual(golden_profile, params)
    assert np.max(np.abs(res)) < 1e-6
    eps = 1e-12
    sl = golden_profile.slope(np.array([golden_profile.l - eps]))[0]
    sr = golden_profile.slope(np.array([golden_profile.l + eps]))[0]
    assert abs(sl - sr) / np.sqrt(golden_profile.gamma) < 1e-8
    # physical slope at the jump equals sqrt(gamma) * m
    assert sl == pytest.approx(np.sqrt(golden_profile.gamma) * golden_profile.m,
                               rel=1e-7)


def test_profile_endpoint_conditions(golden_profile):
    x = golden_profile.x_grid
    assert golden_profile.u_values[0] == pytest.approx(golden_profile.k, rel=1e-12)
    assert golden_profile.u_values[-1] == pytest.approx(golden_profile.p, rel=1e-12)
    assert golden_profile.slope(np.array([0.0]))[0] == 0.0
    assert golden_profile.slope(np.array([1.0]))[0] == 0.0
    assert golden_profile.u_of(np.array([golden_profile.l]))[0] == pytest.approx(
        golden_profile.beta, rel=1e-12)


def test_profile_v_follows_branches(params, golden_profile):
    x = golden_profile.x_grid
    left = x < golden_profile.l
    u, v = golden_profile.u_values, golden_profile.v_values
    v0 = H.branch_h(0, np.minimum(u[left], st.potentials(params).u_plus), params)
    v1 = H.branch_h(1, u[~left], params)
    assert np.max(np.abs(v[left] - v0)) < 1e-10
    assert np.max(np.abs(v[~left] - v1)) < 1e-10
    g_resid = H.eval_g(u, v, params)
    assert np.max(np.abs(g_resid)) < 1e-9


def test_profile_matches_shooting_oracle(params, golden_profile):
    u_sh, g_sh, l_sh = st.shooting_profile(
        golden_profile.beta, golden_profile.m, params, golden_profile.x_grid)
    assert np.max(np.abs(u_sh - golden_profile.u_values)) < 1e-6
    assert g_sh == pytest.approx(golden_profile.gamma, rel=1e-7)
    assert l_sh == pytest.approx(golden_profile.l, abs=1e-8)


def test_profile_uniform_collapse_small_m(params):
    prof = st.construct_profile(BETA, 1e-4, params, grid_size=257)
    assert np.max(np.abs(prof.u_values - BETA)) < 1e-3


def test_jump_location_grid_independent(params):
    a = st.construct_profile(BETA, 3.0, params, grid_size=257)
    b = st.construct_profile(BETA, 3.0, params, grid_size=1025)
    assert abs(a.l - b.l) < 1e-12


def test_gamma_monotone_in_m_and_spans(params, family):
    ms = family.m_sup * np.array([1e-4, 1e-3, 0.01, 0.1, 0.3, 0.6, 0.9, 0.999])
    gammas = []
    for m in ms:
        M, N = family.half_widths(family.pair_from_m(m))
        gammas.append((M + N) ** 2)
    gammas = np.array(gammas)
    assert np.all(np.diff(gammas) > 0)
    assert gammas[0] < 1e-6
    M, N = family.half_widths(family.pair_from_k(1e-40))
    assert (M + N) ** 2 > 1e3


# ---------------------------------------------------------------------------
# gamma solving, critical beta, diagnostics
# ---------------------------------------------------------------------------

def test_solve_for_gamma_inside_window_unique(params):
    lo, hi = st.delta_window(params)
    assert lo < BETA < hi
    for target in (0.5, GAMMA_TARGET, 300.0):
        profs = st.solve_for_gamma(BETA, target, params, grid_size=129)
        assert len(profs) == 1
        assert profs[0].gamma == pytest.approx(target, rel=1e-9)


def test_solve_for_gamma_large_gamma_any_beta(params):
    # uniqueness for gamma above the scan's non-monotone hump at any beta
    rep = st.uniqueness_scan(5.0, params, n_points=80)
    target = max(rep.gamma_star * 4.0, 1e4)
    profs = st.solve_for_gamma(5.0, target, params, grid_size=129)
    assert len(profs) == 1


def test_critical_beta_defining_equation(params, pot):
    bstar = st.critical_beta(params)
    assert abs(float(pot.value0(bstar)) - float(pot.value1(bstar))) < 1e-12
    assert bstar == pytest.approx(3.73311325, abs=1e-7)


def test_potential_gap_sign_change(params, pot):
    # curlyF0 - curlyF1 decreases through zero at beta*: case (a) below,
    # case (c) above
    bstar = st.critical_beta(params)
    gaps = [float(pot.value0(b)) - float(pot.value1(b))
            for b in np.linspace(pot.u_minus * 1.01,
                                 min(pot.u_plus, pot.u1) * 0.999, 60)]
    assert np.all(np.diff(gaps) < 0)
    assert float(pot.value0(bstar - 0.2)) - float(pot.value1(bstar - 0.2)) > 0
    assert float(pot.value0(bstar + 0.2)) - float(pot.value1(bstar + 0.2)) < 0


def test_layer_limits_three_cases(params, pot):
    bstar = st.critical_beta(params)
    tail = [1e-20, 1e-60, 1e-120]
    diag_a = st.layer_limit_diagnostics(3.0, params, k_sequence=tail, grid_size=65)
    assert abs(diag_a.rows[-1]["l"] - 1.0) < 0.02
    assert diag_a.rows[-1]["gamma"] > 1e4
    # u -> u0 locally uniformly on [0, 1): sup over [0, 1-eps] collapses
    assert diag_a.rows[-1]["u_sup_left"] < 1e-3

    diag_b = st.layer_limit_diagnostics(bstar, params, k_sequence=tail, grid_size=65)
    l_star = np.sqrt(pot.A1) / (np.sqrt(pot.A1) + np.sqrt(pot.A0))
    assert abs(diag_b.rows[-1]["l"] - l_star) < 0.02
    errs = [abs(r["l"] - l_star) for r in diag_b.rows]
    assert errs[-1] < errs[0]

    diag_c = st.layer_limit_diagnostics(4.5, params, tau_sequence=tail, grid_size=65)
    assert abs(diag_c.rows[-1]["l"]) < 0.02
    assert diag_c.rows[-1]["u_inf_right"] > pot.u1 - 1e-3


# ---------------------------------------------------------------------------
# uniqueness scan
# ---------------------------------------------------------------------------

def test_uniqueness_scan_monotone_inside_window(params):
    rep = st.uniqueness_scan(BETA, params, n_points=200)
    lo, hi = rep.beta_window
    assert st.potentials(params).u_minus < lo < hi < min(
        st.potentials(params).u_plus, st.potentials(params).u1)
    assert lo < BETA < hi
    assert rep.monotone_flag
    assert rep.gamma_star == 0.0
    dT = np.diff([t for _, t in rep.T_samples])
    assert np.all(dT < 0)


def test_uniqueness_dpdk_identity(params):
    rep = st.uniqueness_scan(BETA, params, n_points=40)
    assert rep.dpdk_max_rel_err < 1e-4


def test_M_decreasing_at_small_k(params, family):
    # M'(k) < 0 for small k regardless of the determinant signs
    k0 = 0.005 * BETA
    h = 1e-4 * k0
    M = lambda k: family._kernel(0, family.pair_from_k(k), cumulative=False)
    assert (M(k0 + h) - M(k0 - h)) / (2 * h) < 0


# ---------------------------------------------------------------------------
# modes and full-state representation
# ---------------------------------------------------------------------------

def test_mode_identity_and_reflection(params, golden_profile):
    same = st.mode_n(golden_profile, 1, "+")
    assert np.allclose(same.u_values, golden_profile.u_values)
    refl = st.mode_n(golden_profile, 1, "-")
    assert np.all(np.diff(refl.u_values) <= 0)
    assert np.allclose(refl.u_values, golden_profile.u_of(1.0 - refl.x_grid))
    assert np.allclose(refl.v_values, golden_profile.v_of(1.0 - refl.x_grid))


def test_mode_n_residuals(params, golden_profile):
    for n in (1, 2, 3, 4):
        prof = st.mode_n(golden_profile, n, "+")
        assert prof.gamma == pytest.approx(n * n * golden_profile.gamma, rel=1e-14)
        res = st.stationary_residual(prof, params)
        assert np.max(np.abs(res)) < 1e-6, f"mode {n}"


def test_mode_2_interior_turning_point(params, golden_profile):
    prof = st.mode_n(golden_profile, 2, "+")
    assert prof.slope(np.array([0.5]))[0] == pytest.approx(0.0, abs=1e-12)
    assert len(prof.jumps()) == 2


def test_full_state_monotonicity(params, golden_profile):
    full = st.full_state_representation(golden_profile, params)
    assert np.all(np.diff(full.u1) <= 0)
    assert np.all(np.diff(full.u2) >= 0)
    jumps = golden_profile.jumps()
    inc = np.diff(full.u4) >= 0
    assert np.mean(inc) > 0.99  # u4 increases except exactly at the emitted jump cell
    r1, r2 = H.quasi_steady_receptors(golden_profile.k, params)
    assert full.u1[0] == pytest.approx(r1, rel=1e-12)
    assert full.u2[0] == pytest.approx(r2, rel=1e-12)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_profile_csv(tmp_path, params, golden_profile):
    path = tmp_path / "profile.csv"
    st.write_profile_csv(golden_profile, path)
    text = path.read_text().splitlines()
    meta = [l for l in text if l.startswith("#")]
    assert any(l.startswith("# beta=") for l in meta)
    assert any(l.startswith("# gamma=") for l in meta)
    header_idx = next(i for i, l in enumerate(text) if not l.startswith("#"))
    assert text[header_idx] == "x,u,v,branch"
    rows = [l.split(",") for l in text[header_idx + 1:]]
    xs = np.array([float(r[0]) for r in rows])
    # duplicated abscissa at the jump with both one-sided v values
    dup = np.nonzero(np.diff(xs) == 0)[0]
    assert len(dup) == 1
    v_left, v_right = float(rows[dup[0]][2]), float(rows[dup[0] + 1][2])
    tab = H.branch_table(params)
    assert v_left < tab.v_minus < tab.v_plus < v_right
