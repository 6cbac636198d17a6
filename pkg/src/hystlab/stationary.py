"""Construction of monotone stationary layer solutions by quadrature.

A gradient-like pattern with jump amplitude beta and stretched slope m at the
jump is built from the two branch potentials

    curlyF0(W) = int_{0}^{W} F0,      curlyF1(W) = int_{u1}^{W} F1,

with F_j(u) = f(u, h_j(u)). The turning values k < beta < p solve
curlyF0(k) = m^2/2 + curlyF0(beta) and curlyF1(p) = m^2/2 + curlyF1(beta);
the half widths

    M = int_k^beta dw / sqrt(2 (curlyF0(k) - curlyF0(w))),
    N = int_beta^p dw / sqrt(2 (curlyF1(p) - curlyF1(w)))

give the jump location l = M/(M+N) and the coefficient gamma = (M+N)^2.

Numerically the half-width integrands are desingularized by the substitution
w = k*cosh(theta) about the lower equilibrium (resp. u1 - tau, tau =
tau_p*cosh(theta), about the upper one), which keeps them O(1) and smooth all
the way into the boundary/transition-layer limit where k or u1 - p underflows
ordinary differencing. Potential differences are always evaluated from
single-signed data (local power-series models at the equilibria, small-gap
Gauss panels, or anchored cumulative splines), never by subtracting two
large cached values of nearly equal size.
"""
from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial
from scipy.interpolate import CubicSpline, PchipInterpolator
from scipy.optimize import brentq

from .errors import (
    BranchDomainError,
    InfeasibleSlopeError,
    NoBalancedAmplitudeError,
    QuadratureError,
)
from .kinetics import (
    ModelParams,
    branch_h,
    branch_table,
    eval_f,
    jacobian,
    nullcline_phi,
    quasi_steady_receptors,
)

__all__ = [
    "Potentials",
    "LayerProfile",
    "UniquenessReport",
    "LimitDiagnostics",
    "potentials",
    "reaction_on_branch",
    "potential",
    "admissible_slope_interval",
    "solve_turning_values",
    "half_widths",
    "construct_profile",
    "solve_for_gamma",
    "critical_beta",
    "layer_limit_diagnostics",
    "uniqueness_scan",
    "delta_window",
    "mode_n",
    "full_state_representation",
    "stationary_residual",
    "shooting_profile",
    "write_profile_csv",
]

_GL12_X, _GL12_W = np.polynomial.legendre.leggauss(12)
_GL8_X, _GL8_W = np.polynomial.legendre.leggauss(8)

_K_FLOOR = 1e-280  # smallest resolvable distance to a degenerate endpoint


def _acosh1p(x):
    """acosh(1 + x) without cancellation for small x and without overflow for large x."""
    x = np.asarray(x, dtype=float)
    big = x > 1e8
    safe = np.where(big, 1.0, x)
    out = np.where(big, np.log(2.0) + np.log(x + (~big)),
                   np.log1p(safe + np.sqrt(safe * (2.0 + safe))))
    return float(out) if out.ndim == 0 else out


def _poly_divided_difference(coef: np.ndarray, a: float, b) -> np.ndarray | float:
    """(p(b) - p(a)) / (b - a) for power-basis coefficients via synthetic division.

    Cancellation-free for b arbitrarily close to (or far from) a; vectorized in b.
    """
    n = len(coef)
    acc = coef[-1]
    q = np.empty(n - 1)
    for j in range(n - 2, -1, -1):
        q[j] = acc
        acc = acc * a + coef[j]
    out = np.zeros_like(np.asarray(b, dtype=float))
    for j in range(n - 2, -1, -1):
        out = out * b + q[j]
    return out


def _polyval(coef: np.ndarray, x):
    out = np.zeros_like(np.asarray(x, dtype=float))
    for c in coef[::-1]:
        out = out * x + c
    return out


# ---------------------------------------------------------------------------
# branch reaction terms and potentials
# ---------------------------------------------------------------------------

def reaction_on_branch(j, u, p: ModelParams):
    """F_j(u) = f(u, h_j(u)) for j in {0, 1}; vectorized in u."""
    if j not in (0, 1):
        raise ValueError("reaction_on_branch takes j in {0, 1}")
    return eval_f(u, branch_h(j, u, p), p)


class Potentials:
    """Cached branch potentials curlyF0 / curlyF1 with stable differencing.

    Built once per parameter set: anchored cumulative splines over the branch
    domains plus degree-`model_deg` power-series models of F_j about the
    anchoring equilibria (u = 0 and u = u1), which carry the potentials down
    to distances ~1e-280 from the equilibria at full relative accuracy.
    """

    def __init__(self, p: ModelParams, n_knots: int = 700, model_deg: int = 24):
        self.params = p
        self.table = tab = branch_table(p)
        self.u_minus, self.u_plus = tab.u_minus, tab.u_plus

        # positive attractor (F1 root beyond the saddle)
        hi = tab.u_plus * 2
        while reaction_on_branch(1, hi, p) > 0:
            hi *= 2.0
        self.u1 = brentq(lambda u: float(reaction_on_branch(1, u, p)),
                         tab.u_plus, hi, xtol=1e-15, rtol=8.9e-16)

        self.F0 = lambda u: reaction_on_branch(0, u, p)
        self.F1 = lambda u: reaction_on_branch(1, u, p)

        # --- cumulative splines in a fold-smoothing parametrization ---
        t = np.linspace(0.0, 1.0, n_knots)
        knots0 = tab.u_plus * np.sin(0.5 * np.pi * t) ** 2
        knots0[0], knots0[-1] = 0.0, tab.u_plus
        self._spline0 = self._cumulative(self.F0, knots0)

        lo1 = tab.u_minus + 1e-5 * (self.u1 - tab.u_minus)
        hi1 = self.u1 + 0.25 * (self.u1 - tab.u_minus)
        knots1 = lo1 + (hi1 - lo1) * np.sin(0.5 * np.pi * t) ** 2
        knots1[0], knots1[-1] = lo1, hi1
        raw = self._cumulative(self.F1, knots1)
        shift = float(raw(self.u1))
        self._spline1 = raw
        self._shift1 = shift
        self._dom1 = (lo1, hi1)

        # --- endpoint models: F0(z) = z R0(z), F1(u1 - s) = s R1(s) ---
        self.e0 = 0.25 * tab.u_minus
        self.e1 = 0.20 * (self.u1 - tab.u_minus)
        r0 = Chebyshev.interpolate(lambda z: self.F0(z) / z, model_deg,
                                   domain=[0.0, self.e0])
        r1 = Chebyshev.interpolate(lambda s: self.F1(self.u1 - s) / s, model_deg,
                                   domain=[0.0, self.e1])
        self._r0 = r0.convert(kind=Polynomial).coef
        self._r1 = r1.convert(kind=Polynomial).coef
        self.A0 = abs(self._r0[0])   # |F0'(0)|
        self.A1 = abs(self._r1[0])   # |F1'(u1)|
        # potential models: curlyF0(k) = k^2 * q0(k), curlyF1(u1-tau) = -tau^2 * q1(tau)
        self._q0 = np.array([c / (j + 2) for j, c in enumerate(self._r0)])
        self._q1 = np.array([c / (j + 2) for j, c in enumerate(self._r1)])
        # full power-basis potentials for divided differencing
        self._p0 = np.concatenate([[0.0, 0.0], self._q0])
        self._p1 = np.concatenate([[0.0, 0.0], -self._q1])
        # small-gap Gauss regime thresholds
        self._gl_cap0 = 0.05 * tab.u_plus
        self._gl_cap1 = 0.05 * (self.u1 - tab.u_minus)

    @staticmethod
    def _cumulative(fun, knots):
        mids = 0.5 * (knots[1:] + knots[:-1])
        half = 0.5 * np.diff(knots)
        nodes = mids[:, None] + half[:, None] * _GL12_X[None, :]
        vals = fun(nodes.ravel()).reshape(nodes.shape)
        panels = half * (vals @ _GL12_W)
        out = np.concatenate([[0.0], np.cumsum(panels)])
        return CubicSpline(knots, out)

    # -- point values ------------------------------------------------------

    def value0(self, W):
        """curlyF0(W) on [0, u_plus]."""
        W = np.asarray(W, dtype=float)
        out = np.where(W <= self.e0,
                       W * W * _polyval(self._q0, np.minimum(W, self.e0)),
                       self._spline0(np.clip(W, self.e0, self.u_plus)))
        return float(out) if out.ndim == 0 else out

    def value1(self, W):
        """curlyF1(W) on (u_minus, u_hi]; exact zero at W = u1."""
        W = np.asarray(W, dtype=float)
        tau = self.u1 - W
        near = (tau >= 0) & (tau <= self.e1)  # model zone covers W <= u1 only
        spline_part = self._spline1(np.clip(W, *self._dom1)) - self._shift1
        model_part = -tau * tau * _polyval(self._q1, np.where(near, tau, 0.0))
        out = np.where(near, model_part, spline_part)
        return float(out) if out.ndim == 0 else out

    def value(self, j, W):
        return self.value0(W) if j == 0 else self.value1(W)

    def F(self, j, u):
        return self.F0(u) if j == 0 else self.F1(u)

    # -- stable positive differences ----------------------------------------

    def mean_slope0(self, k: float, w, gap=None):
        """(curlyF0(k) - curlyF0(w)) / (w - k) > 0 for k < w <= u_plus, any scale.

        The ratio never under- or overflows even where the difference itself
        would (it tends to |F0(k)| as w -> k). `gap` optionally supplies w - k
        computed without cancellation.
        """
        w = np.atleast_1d(np.asarray(w, dtype=float))
        gap = (w - k) if gap is None else np.atleast_1d(np.asarray(gap, dtype=float))
        out = np.empty_like(w)
        in_zone = w <= self.e0
        small = (~in_zone) & (gap <= self._gl_cap0)
        rest = ~(in_zone | small)
        if np.any(in_zone):
            out[in_zone] = -_poly_divided_difference(self._p0, k, w[in_zone])
        if np.any(small):
            g = gap[small]
            nodes = (w[small] - g)[:, None] + (0.5 * g)[:, None] * (_GL12_X[None, :] + 1.0)
            out[small] = -(self.F0(nodes.ravel()).reshape(nodes.shape) @ _GL12_W) * 0.5
        if np.any(rest):
            base = self._spline0(self.e0) - self._spline0(w[rest]) if k <= self.e0 \
                else self.value0(k) - self._spline0(w[rest])
            head = (self.e0 - k) * (-_poly_divided_difference(self._p0, k, self.e0)) \
                if k <= self.e0 else 0.0
            out[rest] = (head + base) / gap[rest]
        return out

    def mean_slope1(self, tau_p: float, tau_w, gap=None):
        """(curlyF1(p) - curlyF1(w)) / (tau_w - tau_p) in u1-distance coordinates."""
        tau_w = np.atleast_1d(np.asarray(tau_w, dtype=float))
        gap = (tau_w - tau_p) if gap is None else np.atleast_1d(np.asarray(gap, dtype=float))
        out = np.empty_like(tau_w)
        in_zone = tau_w <= self.e1
        small = (~in_zone) & (gap <= self._gl_cap1)
        rest = ~(in_zone | small)
        if np.any(in_zone):
            out[in_zone] = -_poly_divided_difference(self._p1, tau_p, tau_w[in_zone])
        if np.any(small):
            g = gap[small]
            tnodes = (tau_w[small] - g)[:, None] + (0.5 * g)[:, None] * (_GL12_X[None, :] + 1.0)
            out[small] = (self.F1(self.u1 - tnodes.ravel()).reshape(tnodes.shape)
                          @ _GL12_W) * 0.5
        if np.any(rest):
            w = self.u1 - tau_w[rest]
            base = (self._spline1(self.u1 - self.e1) - self._spline1(w)) if tau_p <= self.e1 \
                else self.value1(self.u1 - tau_p) - (self._spline1(w) - self._shift1)
            head = (self.e1 - tau_p) * (-_poly_divided_difference(self._p1, tau_p, self.e1)) \
                if tau_p <= self.e1 else 0.0
            out[rest] = (head + base) / gap[rest]
        return out

    def diff0(self, k: float, w, gap=None):
        """curlyF0(k) - curlyF0(w) > 0 for k < w <= u_plus (may underflow ~k^2)."""
        w = np.atleast_1d(np.asarray(w, dtype=float))
        gap = (w - k) if gap is None else np.atleast_1d(np.asarray(gap, dtype=float))
        return gap * self.mean_slope0(k, w, gap=gap)

    def diff1(self, tau_p: float, tau_w, gap=None):
        """curlyF1(p) - curlyF1(w) > 0 for tau_w > tau_p (may underflow ~tau^2)."""
        tau_w = np.atleast_1d(np.asarray(tau_w, dtype=float))
        gap = (tau_w - tau_p) if gap is None else np.atleast_1d(np.asarray(gap, dtype=float))
        return gap * self.mean_slope1(tau_p, tau_w, gap=gap)

    # -- inverse solves ------------------------------------------------------

    def solve_k(self, t0: float) -> float:
        """k in (0, u_plus) with curlyF0(k) = t0 < 0."""
        if t0 >= 0:
            raise ValueError("curlyF0 target must be negative")
        edge = self.value0(self.e0)
        if t0 >= edge:  # |t0| small: model zone, Newton in k
            k = math.sqrt(2.0 * abs(t0) / self.A0)
            for _ in range(80):
                fk = k * k * _polyval(self._q0, k) - t0
                dfk = k * _polyval(self._r0, k)
                k_new = k - fk / dfk
                if k_new <= 0:
                    k_new = 0.5 * k
                if abs(k_new - k) <= 1e-16 * k:
                    return max(k_new, _K_FLOOR)
                k = k_new
            return max(k, _K_FLOOR)
        return brentq(lambda z: float(self.value0(z)) - t0,
                      0.5 * self.e0, self.u_plus * (1 - 1e-13),
                      xtol=1e-15, rtol=8.9e-16)

    def solve_tau(self, t1: float) -> float:
        """tau = u1 - p with curlyF1(u1 - tau) = t1 < 0."""
        if t1 >= 0:
            raise ValueError("curlyF1 target must be negative")
        edge = self.value1(self.u1 - self.e1)
        if t1 >= edge:
            tau = math.sqrt(2.0 * abs(t1) / self.A1)
            for _ in range(80):
                ft = -tau * tau * _polyval(self._q1, tau) - t1
                dft = -tau * _polyval(self._r1, tau)
                tau_new = tau - ft / dft
                if tau_new <= 0:
                    tau_new = 0.5 * tau
                if abs(tau_new - tau) <= 1e-16 * tau:
                    return max(tau_new, _K_FLOOR)
                tau = tau_new
            return max(tau, _K_FLOOR)
        W = brentq(lambda z: float(self.value1(z)) - t1,
                   self._dom1[0] * (1 + 1e-13), self.u1 - 0.5 * self.e1,
                   xtol=1e-15, rtol=8.9e-16)
        return self.u1 - W

    def gap_solve0(self, beta: float, E: float) -> float:
        """eps = beta - k with int_{beta-eps}^{beta} (-F0) = E, for small E."""
        slope = -float(self.F0(beta))
        eps = E / slope
        for _ in range(80):
            g = 0.5 * eps
            nodes = beta - eps + g * (_GL12_X + 1.0)
            val = -g * float(self.F0(nodes) @ _GL12_W)
            d = -float(self.F0(beta - eps))
            eps_new = eps - (val - E) / d
            if eps_new <= 0:
                eps_new = 0.5 * eps
            if abs(eps_new - eps) <= 1e-16 * eps:
                return eps_new
            eps = eps_new
        return eps

    def gap_solve1(self, beta: float, E: float) -> float:
        """eps = p - beta with int_{beta}^{beta+eps} F1 = E, for small E."""
        slope = float(self.F1(beta))
        eps = E / slope
        for _ in range(80):
            g = 0.5 * eps
            nodes = beta + g * (_GL12_X + 1.0)
            val = g * float(self.F1(nodes) @ _GL12_W)
            d = float(self.F1(beta + eps))
            eps_new = eps - (val - E) / d
            if eps_new <= 0:
                eps_new = 0.5 * eps
            if abs(eps_new - eps) <= 1e-16 * eps:
                return eps_new
            eps = eps_new
        return eps


@functools.lru_cache(maxsize=8)
def potentials(p: ModelParams) -> Potentials:
    return Potentials(p)


def potential(j, W, p: ModelParams):
    """curlyF_j(W); absolute accuracy ~1e-12 on the branch interior."""
    pot = potentials(p)
    tab = pot.table
    W_arr = np.atleast_1d(np.asarray(W, dtype=float))
    if j == 0:
        if np.any((W_arr < -1e-12) | (W_arr > tab.u_plus * (1 + 1e-12))):
            raise BranchDomainError(
                f"potential(0, W) needs W in [0, {tab.u_plus:.6g}]",
                nearest_fold=tab.u_plus)
        return pot.value0(W)
    if j == 1:
        if np.any((W_arr <= tab.u_minus) | (W_arr > pot._dom1[1])):
            raise BranchDomainError(
                f"potential(1, W) needs W in ({tab.u_minus:.6g}, {pot._dom1[1]:.6g}]",
                nearest_fold=tab.u_minus)
        return pot.value1(W)
    raise ValueError("potential takes j in {0, 1}")


# ---------------------------------------------------------------------------
# the one-parameter layer family at fixed beta
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _LayerPair:
    """Turning data of one admissible (beta, m): distances to the degenerate
    endpoints (k itself; tau_p = u1 - p) plus cancellation-free gaps to beta."""

    beta: float
    k: float
    tau_p: float
    gap_k: float      # beta - k
    gap_p: float      # p - beta
    E: float          # m^2 / 2

    @property
    def m(self) -> float:
        return math.sqrt(2.0 * self.E)

    def p_value(self, u1: float) -> float:
        return u1 - self.tau_p


class _Family:
    """All turning/half-width machinery of the family at one beta."""

    def __init__(self, p: ModelParams, beta: float):
        self.params = p
        self.pot = pot = potentials(p)
        tab = pot.table
        self.beta = float(beta)
        sup = min(tab.u_plus, pot.u1)
        if not (tab.u_minus < beta < sup):
            raise BranchDomainError(
                f"beta must lie in (u_minus, min(u_plus, u1)) = "
                f"({tab.u_minus:.6g}, {sup:.6g}); got {beta:.6g}",
                nearest_fold=tab.u_minus if beta <= tab.u_minus else sup)
        self.cF0b = float(pot.value0(beta))
        self.cF1b = float(pot.value1(beta))
        self.E_sup = min(abs(self.cF0b), abs(self.cF1b))
        self.m_sup = math.sqrt(2.0 * self.E_sup)
        scale = max(abs(self.cF0b), abs(self.cF1b))
        self.balanced = abs(self.cF0b - self.cF1b) <= 1e-10 * scale

    # -- constructors for the pair -----------------------------------------

    def pair_from_m(self, m: float) -> _LayerPair:
        if not (0.0 < m < self.m_sup):
            raise InfeasibleSlopeError(
                f"m must lie in the open interval (0, {self.m_sup:.12g}); got {m:.12g} "
                f"(bounds sqrt(2|curlyF0(beta)|) = {math.sqrt(2*abs(self.cF0b)):.12g}, "
                f"sqrt(2|curlyF1(beta)|) = {math.sqrt(2*abs(self.cF1b)):.12g})")
        return self.pair_from_E(0.5 * m * m)

    def pair_from_E(self, E: float) -> _LayerPair:
        pot = self.pot
        if E <= 1e-4 * abs(self.cF0b):
            gap_k = pot.gap_solve0(self.beta, E)
            k = self.beta - gap_k
        else:
            k = pot.solve_k(E + self.cF0b)
            gap_k = self.beta - k
        if E <= 1e-4 * abs(self.cF1b):
            gap_p = pot.gap_solve1(self.beta, E)
            tau_p = (pot.u1 - self.beta) - gap_p
        else:
            tau_p = pot.solve_tau(E + self.cF1b)
            gap_p = (pot.u1 - self.beta) - tau_p
        return _LayerPair(self.beta, k, tau_p, gap_k, gap_p, E)

    def pair_from_k(self, k: float) -> _LayerPair:
        pot = self.pot
        t0 = float(pot.value0(k))
        E = t0 - self.cF0b
        if self.balanced and k <= pot.e0:
            tau_p = self._balanced_tau_of_k(k)
        else:
            t1 = t0 if self.balanced else t0 - self.cF0b + self.cF1b
            if t1 >= 0:
                raise InfeasibleSlopeError(
                    f"k = {k:.6g} implies an energy above the curlyF1 bound at this beta")
            tau_p = pot.solve_tau(t1)
        return _LayerPair(self.beta, k, tau_p, self.beta - k,
                          (pot.u1 - self.beta) - tau_p, E)

    def pair_from_tau(self, tau_p: float) -> _LayerPair:
        pot = self.pot
        t1 = float(pot.value1(pot.u1 - tau_p)) if tau_p > pot.e1 \
            else -tau_p * tau_p * _polyval(pot._q1, tau_p)
        E = t1 - self.cF1b
        if self.balanced and tau_p <= pot.e1:
            k = self._balanced_k_of_tau(tau_p)
        else:
            t0 = t1 if self.balanced else t1 - self.cF1b + self.cF0b
            if t0 >= 0:
                raise InfeasibleSlopeError(
                    f"tau_p = {tau_p:.6g} implies an energy above the curlyF0 bound")
            k = pot.solve_k(t0)
        return _LayerPair(self.beta, k, tau_p, self.beta - k,
                          (pot.u1 - self.beta) - tau_p, E)

    def _balanced_tau_of_k(self, k: float) -> float:
        """tau with curlyF1(u1 - tau) = curlyF0(k), solved as a ratio so the
        (possibly underflowing ~k^2) potential values are never formed."""
        pot = self.pot
        q0 = -_polyval(pot._q0, k)  # positive
        tau = k * math.sqrt(pot.A0 / pot.A1)
        for _ in range(60):
            tau_new = k * math.sqrt(q0 / _polyval(pot._q1, tau))
            if abs(tau_new - tau) <= 1e-16 * tau:
                return tau_new
            tau = tau_new
        return tau

    def _balanced_k_of_tau(self, tau_p: float) -> float:
        pot = self.pot
        q1 = _polyval(pot._q1, tau_p)  # positive
        k = tau_p * math.sqrt(pot.A1 / pot.A0)
        for _ in range(60):
            k_new = tau_p * math.sqrt(q1 / (-_polyval(pot._q0, k)))
            if abs(k_new - k) <= 1e-16 * k:
                return k_new
            k = k_new
        return k

    # -- half-width kernels ---------------------------------------------------

    def _kernel(self, side: int, pair: _LayerPair, *, cumulative: bool,
                panels_per_unit: float = 8.0, min_panels: int = 32):
        """Half-width integral (and optional cumulative table) on one side.

        side 0: coordinate z measured from u = 0, singular end z = k, far end
        z = beta. side 1: coordinate tau = u1 - u, singular end tau = tau_p,
        far end tau = u1 - beta. Substitution z = sing*cosh(theta).
        """
        pot = self.pot
        if side == 0:
            sing, gap_far = pair.k, pair.gap_k
        else:
            sing, gap_far = pair.tau_p, pair.gap_p
        if sing < _K_FLOOR:
            raise QuadratureError(
                f"turning point within {_K_FLOOR:g} of the equilibrium; "
                "the half width is beyond double-precision range")
        Theta = _acosh1p(gap_far / sing)
        n_pan = max(min_panels, int(math.ceil(panels_per_unit * Theta)))
        edges = np.linspace(0.0, Theta, n_pan + 1)
        mids = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * np.diff(edges)
        th = mids[:, None] + half[:, None] * _GL8_X[None, :]
        # stable gap to the singular end: z - sing = 2*sing*sinh^2(theta/2)
        shalf = np.sinh(0.5 * th)
        gap = 2.0 * sing * shalf * shalf
        coord = sing + gap
        np.minimum(coord, sing + gap_far, out=coord)
        q = pot.mean_slope0(sing, coord.ravel(), gap=gap.ravel()) if side == 0 \
            else pot.mean_slope1(sing, coord.ravel(), gap=gap.ravel())
        q = q.reshape(th.shape)
        # integrand z*sinh(theta)/sqrt(2 D) rewritten as sqrt(z)*cosh(theta/2)/sqrt(D/gap),
        # which neither under- nor overflows down to sing ~ 1e-280
        vals = np.sqrt(sing) * np.cosh(0.5 * th) / np.sqrt(q)
        panel = half * (vals @ _GL8_W)
        total = float(np.sum(panel))
        if not np.isfinite(total):
            raise QuadratureError("half-width quadrature produced a non-finite value",
                                  achieved=float("nan"))
        if not cumulative:
            return total
        csum = np.concatenate([[0.0], np.cumsum(panel)])
        coords_edges = sing * np.cosh(edges)
        coords_edges[-1] = sing + gap_far
        return total, edges, csum, coords_edges

    def half_widths(self, pair: _LayerPair) -> tuple[float, float]:
        return (self._kernel(0, pair, cumulative=False),
                self._kernel(1, pair, cumulative=False))

    def T_of_k(self, k: float) -> float:
        pair = self.pair_from_k(k)
        M, N = self.half_widths(pair)
        return M + N

    def k_min(self) -> float:
        """Infimum of the feasible lower turning values at this beta.

        Zero when the curlyF0 side saturates first (or at balance); above the
        balanced amplitude the curlyF1 bound stops k at a positive value."""
        if self.balanced or abs(self.cF0b) <= abs(self.cF1b):
            return 0.0
        return self.pot.solve_k(self.cF0b - self.cF1b)

    def k_grid(self, n_points: int, floor_frac: float = 1e-8) -> np.ndarray:
        """Log-spaced scan grid over the feasible k-range (0 or k_min, beta)."""
        k_hi = self.beta * (1 - 1e-3)
        kmin = self.k_min()
        if kmin == 0.0:
            return np.geomspace(self.beta * floor_frac, k_hi, n_points)
        fr = np.geomspace(floor_frac, 1 - 1e-6, n_points)
        return kmin + (k_hi - kmin) * fr


# ---------------------------------------------------------------------------
# public operations on turning values and half widths
# ---------------------------------------------------------------------------

def admissible_slope_interval(beta: float, p: ModelParams) -> tuple[float, float]:
    """Open interval (0, min{sqrt(2|curlyF0(beta)|), sqrt(2|curlyF1(beta)|)})."""
    fam = _Family(p, beta)
    return (0.0, fam.m_sup)


def solve_turning_values(beta: float, m: float, p: ModelParams) -> tuple[float, float]:
    """Turning values (k, p) of the layer with jump amplitude beta and slope m."""
    fam = _Family(p, beta)
    pair = fam.pair_from_m(m)
    return pair.k, pair.p_value(fam.pot.u1)


def half_widths(beta: float, m: float, p: ModelParams) -> tuple[float, float]:
    """Stretched half widths (M, N); relative accuracy ~1e-9."""
    fam = _Family(p, beta)
    return fam.half_widths(fam.pair_from_m(m))


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

@dataclass
class LayerProfile:
    """A constructed stationary solution on [0, 1].

    For mode > 1 the stored beta/m/k/p/M/N/l describe the underlying
    monotone base pattern; gamma is the tiled coefficient n^2 * gamma_base.
    """

    params: ModelParams
    beta: float
    m: float
    k: float
    p: float
    M: float
    N: float
    gamma: float
    l: float
    x_grid: np.ndarray = field(repr=False)
    u_values: np.ndarray = field(repr=False)
    v_values: np.ndarray = field(repr=False)
    mode: int = 1
    orientation: str = "increasing"
    # monotone interpolants of the square-root coordinates s = sqrt(u - k)
    # (left of the jump) and sqrt(p - u) (right of it); the square-root
    # variables stay uniformly accurate through the quadratic touchdown at
    # the turning points, where u itself would lose the slope information
    _left: PchipInterpolator | None = field(default=None, repr=False)
    _right: PchipInterpolator | None = field(default=None, repr=False)
    _pair: _LayerPair | None = field(default=None, repr=False)
    _base_gamma: float | None = field(default=None, repr=False)

    # -- base-pattern evaluation (mode 1, increasing) -----------------------

    def _base_sq(self, xi):
        """(gap to the active turning value, left-side mask) at base coordinate xi."""
        xi = np.asarray(xi, dtype=float)
        lb = self.base_l
        left = xi <= lb
        s = np.empty_like(xi)
        if np.any(left):
            s[left] = self._left(np.clip(xi[left], 0.0, lb))
        if np.any(~left):
            s[~left] = self._right(np.clip(xi[~left], lb, 1.0))
        np.maximum(s, 0.0, out=s)
        return s * s, left

    def _base_u(self, xi):
        gap, left = self._base_sq(xi)
        return np.where(left, self._pair.k + gap, self.p - gap)

    def _base_slope(self, xi):
        """du/dxi of the base pattern from the first integral of the layer ODE,
        in the product form sqrt(2 gamma) * s * sqrt(mean slope)."""
        gap, left = self._base_sq(xi)
        pot = potentials(self.params)
        pref = math.sqrt(2.0 * self._base_gamma)
        out = np.empty_like(gap)
        if np.any(left):
            g = np.minimum(gap[left], self._pair.gap_k)
            q = pot.mean_slope0(self._pair.k, self._pair.k + g, gap=g)
            out[left] = pref * np.sqrt(g) * np.sqrt(np.maximum(q, 0.0))
        if np.any(~left):
            g = np.minimum(gap[~left], self._pair.gap_p)
            q = pot.mean_slope1(self._pair.tau_p, self._pair.tau_p + g, gap=g)
            out[~left] = pref * np.sqrt(g) * np.sqrt(np.maximum(q, 0.0))
        return out

    def _cell_map(self, x):
        """Map [0,1] to (base coordinate xi, direction +-1) for the tiled pattern."""
        x = np.asarray(x, dtype=float)
        n = self.mode
        j = np.minimum(np.floor(n * x).astype(int), n - 1)
        xi = n * x - j
        rising = (j % 2 == 0) if self.orientation == "increasing" else (j % 2 == 1)
        xi = np.where(rising, xi, 1.0 - xi)
        return xi, np.where(rising, 1.0, -1.0)

    def u_of(self, x):
        xi, _ = self._cell_map(x)
        return self._base_u(xi)

    def v_of(self, x):
        xi, _ = self._cell_map(x)
        u = self._base_u(xi)
        tab = branch_table(self.params)
        out = np.empty_like(u)
        low = xi < self.base_l
        if np.any(low):
            out[low] = branch_h(0, np.minimum(u[low], tab.u_plus), self.params)
        if np.any(~low):
            out[~low] = branch_h(1, np.maximum(u[~low], tab.u_minus), self.params)
        return out

    def slope(self, x):
        xi, sgn = self._cell_map(x)
        return self.mode * sgn * self._base_slope(xi)

    def branch_at(self, x):
        xi, _ = self._cell_map(x)
        return np.where(xi < self.base_l, 0, 1)

    @property
    def base_l(self) -> float:
        return self.M / (self.M + self.N)

    def jumps(self) -> list[float]:
        """Jump abscissae of v on [0, 1], ascending."""
        n, lb = self.mode, self.base_l
        out = []
        for j in range(n):
            rising = (j % 2 == 0) if self.orientation == "increasing" else (j % 2 == 1)
            out.append((j + (lb if rising else 1.0 - lb)) / n)
        return sorted(out)


def construct_profile(beta: float, m: float, p: ModelParams,
                      grid_size: int = 1025) -> LayerProfile:
    """Monotone increasing stationary layer for amplitude beta and slope m.

    Inverts the half-width quadratures on both sides of the jump and samples
    u on a uniform grid of `grid_size` points; v follows the h0/h1 branches
    with the jump at l = M/(M+N) and gamma = (M+N)^2.
    """
    fam = _Family(p, beta)
    pair = fam.pair_from_m(m)
    return _profile_from_pair(fam, pair, grid_size)


def _profile_from_pair(fam: _Family, pair: _LayerPair, grid_size: int,
                       density: float = 96.0) -> LayerProfile:
    pot = fam.pot
    M, edges0, cum0, _ = fam._kernel(0, pair, cumulative=True,
                                     panels_per_unit=density,
                                     min_panels=max(128, int(2 * density)))
    N, edges1, cum1, _ = fam._kernel(1, pair, cumulative=True,
                                     panels_per_unit=density,
                                     min_panels=max(128, int(2 * density)))
    total = M + N
    gamma = total * total
    l = M / total

    # left side: y(w) = C0(theta(w)) - M, x = l + y/(M+N); the interpolated
    # quantity is s = sqrt(u - k) = sqrt(2k) sinh(theta/2), exact at the nodes
    x_left = l + (cum0 - M) / total
    s_left = np.sqrt(2.0 * pair.k) * np.sinh(0.5 * edges0)
    x_left[0], s_left[0] = 0.0, 0.0
    x_left[-1], s_left[-1] = l, math.sqrt(pair.gap_k)
    keepl = np.concatenate([[True], np.diff(x_left) > 0])
    left = PchipInterpolator(x_left[keepl], s_left[keepl])

    # right side: x = l + (N - C1)/(M+N), interpolant s = sqrt(p - u)
    x_right = (l + (N - cum1) / total)[::-1]
    s_right = (np.sqrt(2.0 * pair.tau_p) * np.sinh(0.5 * edges1))[::-1]
    x_right[-1], s_right[-1] = 1.0, 0.0
    x_right[0], s_right[0] = l, math.sqrt(pair.gap_p)
    keepr = np.concatenate([[True], np.diff(x_right) > 0])
    right = PchipInterpolator(x_right[keepr], s_right[keepr])

    prof = LayerProfile(
        params=fam.params, beta=fam.beta, m=pair.m, k=pair.k,
        p=pot.u1 - pair.tau_p, M=M, N=N, gamma=gamma, l=l,
        x_grid=np.linspace(0.0, 1.0, grid_size),
        u_values=np.empty(grid_size), v_values=np.empty(grid_size),
        mode=1, orientation="increasing",
        _left=left, _right=right, _pair=pair, _base_gamma=gamma)
    prof.u_values = prof.u_of(prof.x_grid)
    prof.v_values = prof.v_of(prof.x_grid)
    return prof


def critical_beta(p: ModelParams) -> float:
    """Balanced amplitude beta*: the root of curlyF0(beta) = curlyF1(beta)."""
    pot = potentials(p)
    tab = pot.table
    lo = tab.u_minus * (1 + 1e-9) + 1e-12
    hi = min(tab.u_plus, pot.u1) * (1 - 1e-9)

    def gap(beta):
        return float(pot.value0(beta)) - float(pot.value1(beta))

    if gap(lo) * gap(hi) > 0:
        raise NoBalancedAmplitudeError(
            "curlyF0 - curlyF1 has no sign change on the admissible interval; "
            "only boundary-layer limits exist")
    return brentq(gap, lo, hi, xtol=1e-14, rtol=8.9e-16)


def solve_for_gamma(beta: float, gamma_target: float, p: ModelParams,
                    tol: float = 1e-10, grid_size: int = 1025,
                    scan_points: int = 240) -> list[LayerProfile]:
    """All monotone increasing layers at this beta with gamma = gamma_target.

    Scans T(k) = M + N over a log-spaced k grid (k is in bijection with the
    slope m), brackets every crossing of T^2 = gamma_target and polishes each
    bracket to relative tolerance `tol` in gamma. The scan floor adapts
    downward until T^2 exceeds the target, so at least one root is always
    bracketed.
    """
    if gamma_target <= 0:
        raise ValueError("gamma_target must be positive")
    fam = _Family(p, beta)
    target = math.sqrt(gamma_target)

    k_hi = beta * (1 - 1e-8)
    kmin = fam.k_min()
    if kmin == 0.0:
        k_lo = beta * 1e-8
        for _ in range(60):
            if fam.T_of_k(k_lo) > target or k_lo < 1e-250:
                break
            k_lo = k_lo * k_lo / beta   # double the decade count
        ks = np.geomspace(k_lo, k_hi, scan_points)
    else:
        frac = 1e-8
        while fam.T_of_k(kmin + (k_hi - kmin) * frac) <= target and frac > 1e-250:
            frac *= frac
        ks = kmin + (k_hi - kmin) * np.geomspace(frac, 1 - 1e-8, scan_points)
    Ts = np.array([fam.T_of_k(k) for k in ks])
    res = Ts - target
    out: list[LayerProfile] = []
    for i in np.nonzero(np.sign(res[:-1]) * np.sign(res[1:]) < 0)[0]:
        k_root = brentq(lambda lk: fam.T_of_k(math.exp(lk)) - target,
                        math.log(ks[i]), math.log(ks[i + 1]),
                        xtol=1e-14, rtol=8.9e-16)
        pair = fam.pair_from_k(math.exp(k_root))
        prof = _profile_from_pair(fam, pair, grid_size)
        if abs(prof.gamma - gamma_target) > 10 * tol * gamma_target:
            raise QuadratureError(
                f"gamma polish stalled at {prof.gamma:.12g} vs target {gamma_target:.12g}",
                achieved=abs(prof.gamma / gamma_target - 1.0))
        out.append(prof)
    for i in np.nonzero(res == 0.0)[0]:
        out.append(_profile_from_pair(fam, fam.pair_from_k(ks[i]), grid_size))
    return out


# ---------------------------------------------------------------------------
# Theorem-limit diagnostics and uniqueness analysis
# ---------------------------------------------------------------------------

@dataclass
class LimitDiagnostics:
    """Table of (m, gamma, l, u sup on [0, 1-eps], u inf on [eps, 1]) rows."""

    beta: float
    eps: float
    rows: list[dict]

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.rows])


def layer_limit_diagnostics(beta: float, p: ModelParams,
                            m_sequence=None, *, k_sequence=None,
                            tau_sequence=None, eps: float = 0.05,
                            grid_size: int = 513) -> LimitDiagnostics:
    """Tabulate gamma, l and u-ranges along a sequence approaching a limit.

    Exactly one of the sequences must be given. `m_sequence` addresses the
    m->0 end and moderate slopes; `k_sequence` (distances of the lower turning
    value from 0) and `tau_sequence` (distances of the upper turning value
    from u1) parametrize the m->m_sup end, where m itself is no longer
    resolvable in double precision.
    """
    given = [s is not None for s in (m_sequence, k_sequence, tau_sequence)]
    if sum(given) != 1:
        raise ValueError("provide exactly one of m_sequence, k_sequence, tau_sequence")
    fam = _Family(p, beta)
    rows = []
    if m_sequence is not None:
        pairs = [fam.pair_from_m(m) for m in m_sequence]
    elif k_sequence is not None:
        pairs = [fam.pair_from_k(k) for k in k_sequence]
    else:
        pairs = [fam.pair_from_tau(t) for t in tau_sequence]
    for pair in pairs:
        prof = _profile_from_pair(fam, pair, grid_size)
        rows.append({
            "m": pair.m, "k": pair.k, "tau_p": pair.tau_p,
            "gamma": prof.gamma, "l": prof.l,
            "u_sup_left": float(prof.u_of(np.array([1.0 - eps]))[0]),
            "u_inf_right": float(prof.u_of(np.array([eps]))[0]),
        })
    return LimitDiagnostics(beta=beta, eps=eps, rows=rows)


def delta_window(p: ModelParams) -> tuple[float, float]:
    """Amplitude window (beta_D, B_D) on which the kinetic determinant is
    positive along h0 up to beta and along h1 from beta to u_plus."""
    pot = potentials(p)
    tab = pot.table

    def det_on(j, u):
        v = branch_h(j, u, p)
        J = jacobian(u, v, p)
        return float(J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0])

    # Delta0 > 0 near u = 0 and < 0 at the fold; B_D is its first root
    B_D = brentq(lambda u: det_on(0, u), 1e-6 * tab.u_plus,
                 tab.u_plus * (1 - 1e-10), xtol=1e-12)
    # Delta1 < 0 near u_minus and > 0 at u1; beta_D is its root
    beta_D = brentq(lambda u: det_on(1, u), tab.u_minus * (1 + 1e-10),
                    pot.u1, xtol=1e-12)
    lo = max(beta_D, tab.u_minus)
    hi = min(B_D, tab.u_plus, pot.u1)
    return (lo, hi)


@dataclass
class UniquenessReport:
    beta: float
    beta_window: tuple[float, float]
    T_samples: list[tuple[float, float]]
    monotone_flag: bool
    gamma_star: float
    dpdk_max_rel_err: float


def uniqueness_scan(beta: float, p: ModelParams, k_grid=None,
                    n_points: int = 200) -> UniquenessReport:
    """Monotonicity scan of T(k) = M(k) + N(p(k)) plus the dp/dk identity check.

    p(k) solves curlyF1(p) = curlyF0(k) - curlyF0(beta) + curlyF1(beta); its
    derivative must equal F0(k)/F1(p(k)) < 0. gamma_star is 0 when T is
    strictly decreasing over the grid, else the squared supremum of T over the
    non-monotone stretch.
    """
    fam = _Family(p, beta)
    pot = fam.pot
    if k_grid is None:
        k_grid = fam.k_grid(n_points)
    k_grid = np.asarray(k_grid, dtype=float)
    Ts = np.array([fam.T_of_k(k) for k in k_grid])
    dT = np.diff(Ts)
    monotone = bool(np.all(dT < 0))
    if monotone:
        gamma_star = 0.0
    else:
        first = int(np.nonzero(dT >= 0)[0][0])
        gamma_star = float(np.max(Ts[first:]) ** 2)

    # dp/dk by centered differences at a few interior sample points
    def p_of_k(k):
        return fam.pair_from_k(k).p_value(pot.u1)

    errs = []
    for frac in (0.2, 0.4, 0.6):
        k0 = beta * frac
        h = 1e-6 * k0
        fd = (p_of_k(k0 + h) - p_of_k(k0 - h)) / (2 * h)
        formula = float(pot.F0(k0) / pot.F1(p_of_k(k0)))
        errs.append(abs(fd / formula - 1.0))
    return UniquenessReport(
        beta=beta, beta_window=delta_window(p),
        T_samples=list(zip(k_grid.tolist(), Ts.tolist())),
        monotone_flag=monotone, gamma_star=gamma_star,
        dpdk_max_rel_err=float(max(errs)))


# ---------------------------------------------------------------------------
# mode-n tiling and full-state representation
# ---------------------------------------------------------------------------

def mode_n(base: LayerProfile, n: int, sign: str = "+") -> LayerProfile:
    """Reflect/tile a mode-1 pattern into the mode-n solution with gamma = n^2 gamma*.

    sign '+' starts with a rising piece on [0, 1/n]; '-' with a falling one.
    n = 1 with '+' returns (a copy of) the base profile; '-' its reflection.
    """
    if base.mode != 1:
        raise ValueError("mode_n expects a mode-1 base profile")
    if n < 1:
        raise ValueError("mode must be a positive integer")
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    orientation = "increasing" if sign == "+" else "decreasing"
    prof = replace(base)
    prof.mode = n
    prof.orientation = orientation
    prof.gamma = n * n * base.gamma
    prof.l = prof.jumps()[0]
    prof.x_grid = np.array(base.x_grid, copy=True)
    prof.u_values = prof.u_of(prof.x_grid)
    prof.v_values = prof.v_of(prof.x_grid)
    return prof


@dataclass
class FullState:
    """Four-component stationary state reconstructed from a reduced profile."""

    x: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    u3: np.ndarray
    u4: np.ndarray


def full_state_representation(profile: LayerProfile, p: ModelParams) -> FullState:
    """Receptor fields from the quasi-steady maps plus (u3, u4) = (u, v)."""
    r1, r2 = quasi_steady_receptors(profile.u_values, p)
    return FullState(x=np.array(profile.x_grid, copy=True),
                     u1=np.asarray(r1), u2=np.asarray(r2),
                     u3=np.array(profile.u_values, copy=True),
                     u4=np.array(profile.v_values, copy=True))


# ---------------------------------------------------------------------------
# verification helpers: weak residual and the independent shooting oracle
# ---------------------------------------------------------------------------

def stationary_residual(profile: LayerProfile, p: ModelParams) -> np.ndarray:
    """Cellwise integrated residual of u'' + gamma*F_jump(u) = 0 on the grid.

    For each grid cell, [slope(x_{i+1}) - slope(x_i)] + gamma*int_cell F(u) dx,
    with cells split at v-jumps and at tile boundaries so every sub-cell sees a
    single branch.
    """
    x = np.asarray(profile.x_grid, dtype=float)
    gamma = profile.gamma
    special = np.array(sorted(set(profile.jumps())
                              | {j / profile.mode for j in range(profile.mode + 1)}))

    def piece_integral(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """int_lo^hi F_branch(u(x)) dx for pieces that contain no special point."""
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        nodes = mid[:, None] + half[:, None] * _GL8_X[None, :]
        u = profile.u_of(nodes.ravel()).reshape(nodes.shape)
        branch = profile.branch_at(mid)
        F = np.empty_like(u)
        m0 = branch == 0
        if np.any(m0):
            F[m0] = reaction_on_branch(0, u[m0].ravel(), p).reshape(u[m0].shape)
        if np.any(~m0):
            F[~m0] = reaction_on_branch(1, u[~m0].ravel(), p).reshape(u[~m0].shape)
        return half * (F @ _GL8_W)

    # split every cell at the special points inside it
    has_special = np.zeros(len(x) - 1, dtype=bool)
    for s in special:
        inside = (x[:-1] < s) & (s < x[1:])
        has_special |= inside
    plain = ~has_special
    integrals = np.zeros(len(x) - 1)
    integrals[plain] = piece_integral(x[:-1][plain], x[1:][plain])
    for i in np.nonzero(has_special)[0]:
        cuts = np.concatenate([[x[i]], special[(x[i] < special) & (special < x[i + 1])],
                               [x[i + 1]]])
        integrals[i] = float(np.sum(piece_integral(cuts[:-1], cuts[1:])))

    # slope() is signed and vanishes at tile boundaries, so no one-sided logic
    slopes = profile.slope(x)
    return np.diff(slopes) + gamma * integrals


def _rising_at(profile: LayerProfile, x: float) -> bool:
    """Whether the tile cell containing x (to its right) is a rising piece."""
    j = min(int(np.floor(profile.mode * x)), profile.mode - 1)
    return (j % 2 == 0) if profile.orientation == "increasing" else (j % 2 == 1)


def shooting_profile(beta: float, m: float, p: ModelParams, x_grid,
                     rtol: float = 1e-10, atol: float = 1e-12):
    """Independent oracle: integrate U'' = -F_j(U) from (beta, m) both ways.

    Returns (u-values on x_grid, gamma, l) computed by an adaptive ODE solver
    with turning-point events; shares nothing with the quadrature inversion
    except the kinetics.
    """
    from scipy.integrate import solve_ivp

    pot = potentials(p)

    def rhs0(y, z):
        return [z[1], -float(pot.F0(z[0]))]

    def rhs1(y, z):
        return [z[1], -float(pot.F1(z[0]))]

    turn = lambda y, z: z[1]
    turn.terminal = True
    turn.direction = -1

    span = 10.0
    solb = None
    for _ in range(20):
        solb = solve_ivp(rhs0, (0.0, -span), [beta, m], events=turn,
                         rtol=rtol, atol=atol, dense_output=True)
        if solb.status == 1:
            break
        span *= 2.0
    if solb.status != 1:
        raise QuadratureError("backward shooting found no turning point")
    M = -float(solb.t_events[0][0])

    span = 10.0
    for _ in range(20):
        solf = solve_ivp(rhs1, (0.0, span), [beta, m], events=turn,
                         rtol=rtol, atol=atol, dense_output=True)
        if solf.status == 1:
            break
        span *= 2.0
    if solf.status != 1:
        raise QuadratureError("forward shooting found no turning point")
    N = float(solf.t_events[0][0])

    total = M + N
    gamma, l = total * total, M / total
    x = np.asarray(x_grid, dtype=float)
    y = total * (x - l)
    u = np.empty_like(x)
    lft = y <= 0
    u[lft] = solb.sol(np.clip(y[lft], -M, 0.0))[0]
    u[~lft] = solf.sol(np.clip(y[~lft], 0.0, N))[0]
    return u, gamma, l


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def write_profile_csv(profile: LayerProfile, path) -> None:
    """CSV with columns x,u,v,branch and a metadata header block.

    The jump abscissae are emitted twice (left then right limit of v) so file
    consumers see the discontinuity exactly.
    """
    meta = {
        "beta": profile.beta, "m": profile.m, "k": profile.k, "p": profile.p,
        "M": profile.M, "N": profile.N, "gamma": profile.gamma, "l": profile.l,
        "mode": profile.mode, "orientation": profile.orientation,
    }
    tab = branch_table(profile.params)
    with open(path, "w", newline="") as fh:
        for key, val in meta.items():
            fh.write(f"# {key}={val!r}\n" if isinstance(val, str)
                     else f"# {key}={float(val):.17g}\n" if isinstance(val, float)
                     else f"# {key}={val}\n")
        w = csv.writer(fh)
        w.writerow(["x", "u", "v", "branch"])
        rows = [(float(x), float(u), float(v), int(b)) for x, u, v, b in
                zip(profile.x_grid, profile.u_values, profile.v_values,
                    profile.branch_at(profile.x_grid))]
        jump_rows = []
        for xj in profile.jumps():
            uj = float(profile.u_of(np.array([xj]))[0])
            v_lo = float(branch_h(0, min(uj, tab.u_plus), profile.params))
            v_hi = float(branch_h(1, max(uj, tab.u_minus), profile.params))
            rising = _rising_at(profile, xj)
            first, second = (v_lo, v_hi) if rising else (v_hi, v_lo)
            jump_rows.append((xj, uj, first, 0 if rising else 1))
            jump_rows.append((xj, uj, second, 1 if rising else 0))
        allrows = sorted(rows + jump_rows, key=lambda r: r[0])
        for row in allrows:
            w.writerow([f"{row[0]:.17g}", f"{row[1]:.17g}", f"{row[2]:.17g}", row[3]])
