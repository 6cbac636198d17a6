import numpy as np
import pytest

import hystlab as H
from hystlab.errors import (
    BranchDomainError,
    InvalidParametersError,
    NoFoldError,
)


def fig1_s_params():
    # control-function illustration set; keeps A1 (0.6244^2 < 0.4) and A2
    return H.ModelParams(mu1=1.0, mu2=1.0, mu3=1.5, m1=1.5, m4=0.1,
                         sigma=0.1, beta_l=0.6244, delta=2.5, b=2.0, d=1.0)


# ---------------------------------------------------------------------------
# parameter validation
# ---------------------------------------------------------------------------

def test_positivity_required():
    with pytest.raises(InvalidParametersError):
        H.ModelParams(mu1=-1.0, mu2=1, mu3=1, m1=1, m4=1, sigma=0.01,
                      beta_l=0.1, delta=1, b=1, d=1)


def test_s_positivity_condition_enforced():
    # beta_l^2 >= 4 sigma makes the S denominator vanish somewhere
    with pytest.raises(InvalidParametersError):
        H.ModelParams(mu1=1, mu2=1, mu3=1, m1=1, m4=1, sigma=0.01,
                      beta_l=0.2, delta=1, b=1, d=1)


def test_c0(params):
    assert params.c0 == pytest.approx(1.0 - 0.195**2 / 0.04, rel=1e-14)
    assert params.c0 > 0


# ---------------------------------------------------------------------------
# nonlinearities
# ---------------------------------------------------------------------------

def test_S_at_zero(params):
    assert H.eval_S(0.0, params) == pytest.approx(params.m4, rel=1e-15)


def test_S_maximum_at_vertex(params):
    v_peak = params.beta_l / (2 * params.sigma)
    assert H.eval_S(v_peak, params) == pytest.approx(params.m4 / params.c0, rel=1e-14)
    vs = np.linspace(-50, 200, 20000)
    assert np.max(H.eval_S(vs, params)) <= params.m4 / params.c0 + 1e-12


def test_S_positive_unimodal_decaying():
    p = fig1_s_params()
    vs = np.linspace(-20, 400, 40000)
    s = H.eval_S(vs, p)
    assert np.all(s > 0)
    peak = np.argmax(s)
    assert np.all(np.diff(s[:peak]) > 0) and np.all(np.diff(s[peak:]) < 0)
    assert H.eval_S(1e6, p) < 1e-9


def test_f_examples(params):
    assert H.eval_f(0.0, 0.0, params) == 0.0
    # direct arithmetic: f(1, 0) = -1.5 - 3/(2+2)
    assert H.eval_f(1.0, 0.0, params) == pytest.approx(-2.25, abs=1e-15)
    us = np.linspace(0.0, 10.0, 50)
    assert np.max(np.abs(H.eval_f(us, H.nullcline_phi(us, params), params))) < 1e-14


def test_g_examples(params):
    assert H.eval_g(0.0, 0.0, params) == 0.0
    # direct arithmetic at (1, 1): denominator 1 + 0.01 - 0.195 = 0.815
    assert H.eval_g(1.0, 1.0, params) == pytest.approx(-2.5 + 0.75 / 0.815, rel=1e-14)
    vs = np.linspace(0.0, 20.0, 50)
    assert np.max(np.abs(H.eval_g(H.nullcline_psi(vs, params), vs, params))) < 1e-12


def test_phi_strictly_increasing(params):
    us = np.linspace(0.0, 50.0, 5000)
    from hystlab.kinetics import nullcline_phi_prime
    assert np.all(nullcline_phi_prime(us, params) > 0)
    assert np.all(np.diff(H.nullcline_phi(us, params)) > 0)


# ---------------------------------------------------------------------------
# folds and branches
# ---------------------------------------------------------------------------

def test_fold_points_quadratic_oracle(params):
    # roots of 3*sigma*v^2 - 2*beta_l*v + 1 by the quadratic formula
    sig, bl = params.sigma, params.beta_l
    disc = bl * bl - 3 * sig
    v_lo = (bl - np.sqrt(disc)) / (3 * sig)
    v_hi = (bl + np.sqrt(disc)) / (3 * sig)
    vm, vp, up, um = H.fold_points(params)
    assert vm == pytest.approx(v_lo, rel=1e-14)
    assert vp == pytest.approx(v_hi, rel=1e-14)
    assert vm == pytest.approx(3.5139, abs=2e-4)
    assert vp == pytest.approx(9.4861, abs=2e-4)
    assert up == pytest.approx(H.nullcline_psi(v_lo, params), rel=1e-14)
    assert 0 < vm < vp and 0 < um < up


def test_fold_degenerate_discriminant():
    sigma = 0.013
    p = H.ModelParams(mu1=1, mu2=1, mu3=1, m1=1, m4=1, sigma=sigma,
                      beta_l=np.sqrt(3 * sigma), delta=1, b=1, d=1)
    with pytest.raises(NoFoldError):
        H.fold_points(p)


def test_fig1_parameters_have_folds():
    p = fig1_s_params()
    assert p.beta_l**2 - 3 * p.sigma == pytest.approx(0.08988, abs=2e-5)
    vm, vp, _, _ = H.fold_points(p)
    assert vm < vp


def test_branch_values_and_continuity(params):
    tab = H.branch_table(params)
    assert H.branch_h(0, 0.0, params) == pytest.approx(0.0, abs=1e-12)
    # both middle and upper branches meet at the folds; the root is double
    # there, so sqrt(eps)-level agreement is the attainable accuracy
    assert H.branch_h("m", tab.u_minus, params) == pytest.approx(tab.v_plus, rel=1e-6)
    assert H.branch_h(1, tab.u_minus, params) == pytest.approx(tab.v_plus, rel=1e-6)
    assert H.branch_h(0, tab.u_plus, params) == pytest.approx(tab.v_minus, rel=1e-6)
    assert H.branch_h("m", tab.u_plus, params) == pytest.approx(tab.v_minus, rel=1e-6)


def test_branch_ordering_and_residual(params):
    tab = H.branch_table(params)
    us = np.linspace(tab.u_minus * (1 + 1e-6), tab.u_plus * (1 - 1e-6), 300)
    h0 = H.branch_h(0, us, params)
    hm = H.branch_h("m", us, params)
    h1 = H.branch_h(1, us, params)
    assert np.all(h0 < hm) and np.all(hm < h1)
    for v in (h0, hm, h1):
        resid = np.abs(H.eval_g(us, v, params))
        scale = np.abs(params.delta * v)
        assert np.max(resid / scale) < 1e-12


def test_branch_monotonicity(params):
    tab = H.branch_table(params)
    us = np.linspace(tab.u_minus * 1.001, tab.u_plus * 0.999, 200)
    assert np.all(np.diff(H.branch_h(0, us, params)) > 0)
    assert np.all(np.diff(H.branch_h("m", us, params)) < 0)
    assert np.all(np.diff(H.branch_h(1, us, params)) > 0)


def test_branch_domain_error_names_fold(params):
    tab = H.branch_table(params)
    with pytest.raises(BranchDomainError) as err:
        H.branch_h(0, tab.u_plus * 1.5, params)
    assert err.value.nearest_fold == pytest.approx(tab.u_plus)
    with pytest.raises(BranchDomainError):
        H.branch_h(1, tab.u_minus * 0.5, params)


# ---------------------------------------------------------------------------
# equilibria and Jacobian
# ---------------------------------------------------------------------------

def test_three_equilibria_with_saddle(params):
    eqs = H.equilibria(params)
    assert (eqs[0].u, eqs[0].v) == (0.0, 0.0)
    assert len(eqs) == 3
    assert [e.classification for e in eqs] == ["stable-node", "saddle", "stable-node"]
    assert eqs[0].u < eqs[1].u < eqs[2].u
    assert eqs[0].v < eqs[1].v < eqs[2].v
    mid = eqs[1]
    assert abs(H.eval_f(mid.u, mid.v, params)) < 1e-10
    assert abs(H.eval_g(mid.u, mid.v, params)) < 1e-10


def test_jacobian_signs_at_saddle(params):
    mid = H.equilibria(params)[1]
    J = H.jacobian(mid.u, mid.v, params)
    assert J[0, 0] < 0
    assert J[0, 1] == 1.0
    assert J[1, 0] > 0
    assert np.linalg.det(J) < 0
    w = np.linalg.eigvals(J)
    assert np.all(np.isreal(w)) and w.real.min() < 0 < w.real.max()


def test_jacobian_at_origin(params):
    J = H.jacobian(0.0, 0.0, params)
    assert J[1, 0] == pytest.approx(params.m4, rel=1e-14)
    assert J[1, 1] == pytest.approx(-params.delta, rel=1e-14)


@pytest.mark.parametrize("point", [(0.5, 0.7), (3.0, 6.0), (8.0, 13.0)])
def test_jacobian_finite_difference(params, point):
    u, v = point
    J = H.jacobian(u, v, params)
    h = 1e-6
    fd = np.empty((2, 2))
    fd[0, 0] = (H.eval_f(u + h, v, params) - H.eval_f(u - h, v, params)) / (2 * h)
    fd[0, 1] = (H.eval_f(u, v + h, params) - H.eval_f(u, v - h, params)) / (2 * h)
    fd[1, 0] = (H.eval_g(u + h, v, params) - H.eval_g(u - h, v, params)) / (2 * h)
    fd[1, 1] = (H.eval_g(u, v + h, params) - H.eval_g(u, v - h, params)) / (2 * h)
    assert np.max(np.abs((J - fd) / fd)) < 1e-5


# ---------------------------------------------------------------------------
# mu3 window
# ---------------------------------------------------------------------------

def test_mu3_window_contains_baseline(params):
    lo, hi = H.mu3_window(params)
    assert 0 <= lo < hi
    assert lo < 1.5 < hi


def test_mu3_above_window_only_origin(params):
    lo, hi = H.mu3_window(params)
    p_hi = H.ModelParams(**{**{k: getattr(params, k) for k in
                               ("mu1", "mu2", "m1", "m4", "sigma", "beta_l",
                                "delta", "b", "d", "gamma")}, "mu3": hi * 1.5})
    eqs = H.equilibria(p_hi)
    assert len(eqs) == 1 and eqs[0].u == 0.0


def test_mu3_inside_window_three_equilibria(params):
    lo, hi = H.mu3_window(params)
    mid = 0.5 * (max(lo, 0.5 * hi) + hi)   # safely interior
    p_mid = H.ModelParams(**{**{k: getattr(params, k) for k in
                                ("mu1", "mu2", "m1", "m4", "sigma", "beta_l",
                                 "delta", "b", "d", "gamma")}, "mu3": mid})
    assert len(H.equilibria(p_mid)) == 3
    assert params.satisfies_a3()


# ---------------------------------------------------------------------------
# stable manifold and region classification
# ---------------------------------------------------------------------------

def test_manifold_reaches_axes(portrait):
    assert portrait.U_s > 0 and portrait.V_s > 0
    assert portrait.manifold_u[0] == pytest.approx(0.0, abs=1e-9)
    assert portrait.manifold_v[-1] == pytest.approx(0.0, abs=1e-9)
    assert portrait.manifold_u[-1] == pytest.approx(portrait.U_s)
    assert portrait.manifold_v[0] == pytest.approx(portrait.V_s)


def test_manifold_injective_projection(portrait):
    assert np.all(np.diff(portrait.manifold_u) > 0)
    assert np.all(np.diff(portrait.manifold_v) < 0)


def test_manifold_seed_convergence(params, portrait):
    finer = H.stable_manifold(params, eps_scale=0.5e-6)
    assert abs(finer.U_s - portrait.U_s) < 1e-5 * portrait.U_s
    assert abs(finer.V_s - portrait.V_s) < 1e-5 * portrait.V_s


def test_classify_region(params, portrait):
    saddle = portrait.saddle
    # strictly southwest of a manifold point -> S1
    i = len(portrait.manifold_u) // 3
    u0, v0 = portrait.manifold_u[i], portrait.manifold_v[i]
    assert H.classify_region(0.5 * u0, 0.5 * v0, portrait) == "S1"
    eqs = [e for e in portrait.equilibria if e.classification == "stable-node" and e.u > 0]
    assert H.classify_region(eqs[0].u, eqs[0].v, portrait) == "S2"
    assert H.classify_region(saddle.u, saddle.v, portrait) == "on-manifold"
    with pytest.raises(ValueError):
        H.classify_region(-1.0, 1.0, portrait)


def test_classify_flips_across_manifold(params, portrait):
    us = np.linspace(0.2 * portrait.saddle.u, 2.0 * portrait.saddle.u, 7)
    for u in us:
        v = float(portrait.manifold_value(u))
        assert H.classify_region(u, v * 1.02, portrait) == "S2"
        assert H.classify_region(u, v * 0.98, portrait) == "S1"


# ---------------------------------------------------------------------------
# quasi-steady receptors
# ---------------------------------------------------------------------------

def test_receptors_at_zero(params):
    u1, u2 = H.quasi_steady_receptors(0.0, params)
    assert u1 == pytest.approx(params.m1 / params.mu1, rel=1e-14)
    assert u2 == 0.0


def test_receptors_limits(params):
    big = 1e9
    u1, u2 = H.quasi_steady_receptors(big, params)
    # u1 follows its hyperbolic tail, u2 saturates at m1/mu2
    tail = params.m1 * (params.d + params.mu2) / (params.mu2 * params.b * big)
    assert u1 == pytest.approx(tail, rel=1e-6)
    assert u2 == pytest.approx(params.m1 / params.mu2, rel=1e-6)


def test_receptors_monotone(params):
    u1a, u2a = H.quasi_steady_receptors(1.0, params)
    u1b, u2b = H.quasi_steady_receptors(2.0, params)
    assert u1b < u1a and u2b > u2a
    u3 = np.linspace(0, 20, 200)
    r1, r2 = H.quasi_steady_receptors(u3, params)
    assert np.all(np.diff(r1) < 0) and np.all(np.diff(r2) > 0)
