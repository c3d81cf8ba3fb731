"""Bound-constrained derivative-free minimization.

Trust-region method on a quadratic surrogate interpolating 2n+1 points,
with minimum-Frobenius-norm Hessian fitting. No internal randomness, so
runs are reproducible evaluation for evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

INITIAL_RADIUS_FRACTION = 0.1
SHRINK_RATIO = 0.25
GROW_RATIO = 0.75
STAGNATION_EVALS_PER_DIM = 20
STAGNATION_RELATIVE = 1e-12


@dataclass
class OptProblem:
    lower: np.ndarray
    upper: np.ndarray
    budget: int
    x_tolerance: float = 1e-8

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        if self.lower.ndim != 1 or self.lower.shape != self.upper.shape:
            raise ValidationError("lower and upper must be equal-length vectors")
        if self.n < 1:
            raise ValidationError("dimension must be >= 1")
        if not np.all(self.lower < self.upper):
            raise ValidationError("need lower < upper componentwise")
        if self.budget < 2 * self.n + 1:
            raise ValidationError(f"budget {self.budget} below 2n+1 = {2 * self.n + 1}")
        if self.x_tolerance <= 0:
            raise ValidationError("x_tolerance must be positive")

    @property
    def n(self) -> int:
        return len(self.lower)


@dataclass
class OptResult:
    x_best: np.ndarray
    f_best: float
    evaluations: int
    stop_reason: str  # budget | step-tolerance | stagnation


class _Tracker:
    """Counts evaluations, remembers the best, watches for stagnation."""

    def __init__(self, f, problem: OptProblem):
        self.f = f
        self.problem = problem
        self.evaluations = 0
        self.x_best = None
        self.f_best = np.inf
        self.since_improvement = 0

    def __call__(self, x: np.ndarray) -> float:
        x = np.clip(x, self.problem.lower, self.problem.upper)
        v = float(self.f(x))
        self.evaluations += 1
        rel_gain = (self.f_best - v) / max(1.0, abs(self.f_best))
        if np.isinf(self.f_best) or rel_gain > STAGNATION_RELATIVE:
            self.since_improvement = 0
        else:
            self.since_improvement += 1
        if v < self.f_best:
            self.f_best = v
            self.x_best = x.copy()
        return v

    @property
    def exhausted(self) -> bool:
        return self.evaluations >= self.problem.budget

    @property
    def stagnant(self) -> bool:
        return self.since_improvement >= STAGNATION_EVALS_PER_DIM * self.problem.n


def _fit_mfn_model(base: np.ndarray, ys: np.ndarray, fs: np.ndarray, h_prev=None):
    """Quadratic through all points, Hessian closest to the previous one.

    KKT system for min ||H - H_prev||_F subject to interpolation; the update
    ends up as a combination of outer products of the displacements.  Carrying
    the previous Hessian forward lets curvature accumulate across iterations,
    which a fresh minimum-norm fit on 2n+1 points cannot represent.
    """
    m = len(ys)
    n = ys.shape[1]
    d = ys - base
    if h_prev is None:
        h_prev = np.zeros((n, n))
    a = 0.5 * (d @ d.T) ** 2
    p = np.hstack([np.ones((m, 1)), d])
    kkt = np.zeros((m + n + 1, m + n + 1))
    kkt[:m, :m] = a
    kkt[:m, m:] = p
    kkt[m:, :m] = p.T
    resid = fs - 0.5 * np.einsum("ij,jk,ik->i", d, h_prev, d)
    rhs = np.concatenate([resid, np.zeros(n + 1)])
    try:
        sol = np.linalg.solve(kkt, rhs)
    except np.linalg.LinAlgError:
        # degenerate geometry; tiny regularization keeps the loop moving
        kkt[:m, :m] += np.eye(m) * 1e-10
        sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    lam = sol[:m]
    c = sol[m]
    g = sol[m + 1:]
    hess = h_prev + (d.T * lam) @ d
    return c, g, hess


def _model_value(c, g, hess, s):
    return c + g @ s + 0.5 * s @ hess @ s


def _step_candidates(xb, g, hess, radius, lower, upper):
    """Newton and Cauchy steps, clipped to the trust region and the box."""
    n = len(g)
    cands = []
    try:
        s_newton = np.linalg.solve(hess + np.eye(n) * 1e-12, -g)
        cands.append(s_newton)
    except np.linalg.LinAlgError:
        pass
    gn = np.linalg.norm(g)
    if gn > 0:
        d = -g / gn
        curv = d @ hess @ d
        t_star = gn / curv if curv > 0 else radius
        cands.append(d * min(t_star, radius))
        cands.append(d * radius)
    out = []
    for s in cands:
        norm = np.linalg.norm(s)
        if norm > radius:
            s = s * (radius / norm)
        out.append(np.clip(xb + s, lower, upper) - xb)
    return out


def minimize(f, x0, problem: OptProblem) -> OptResult:
    """Minimize f over the box from x0; returns the best evaluated point."""
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != problem.lower.shape:
        raise ValidationError(f"x0 has shape {x0.shape}, expected {problem.lower.shape}")
    if np.any(x0 < problem.lower) or np.any(x0 > problem.upper):
        raise ValidationError("x0 outside bounds")

    n = problem.n
    lower, upper = problem.lower, problem.upper
    track = _Tracker(f, problem)

    ranges = upper - lower
    delta = INITIAL_RADIUS_FRACTION * float(ranges.min())
    # center the design so base +- delta stays inside the box
    base = np.clip(x0, lower + delta, upper - delta)

    ys = [base.copy()]
    for i in range(n):
        for sign in (+1.0, -1.0):
            y = base.copy()
            y[i] += sign * delta
            ys.append(y)
    ys = np.array(ys)
    fs = np.array([track(y) for y in ys])

    radius = delta
    max_radius = float(ranges.max())
    h_prev = np.zeros((n, n))
    stop = "budget"
    while True:
        if track.exhausted:
            stop = "budget"
            break
        if track.stagnant:
            stop = "stagnation"
            break
        if radius < problem.x_tolerance:
            stop = "step-tolerance"
            break

        i_best = int(np.argmin(fs))
        xb = ys[i_best]
        fb = fs[i_best]
        c, g, hess = _fit_mfn_model(xb, ys, fs, h_prev)
        h_prev = hess

        best_s, best_m = None, 0.0
        for s in _step_candidates(xb, g, hess, radius, lower, upper):
            mv = _model_value(c, g, hess, s) - c
            if mv < best_m:
                best_m, best_s = mv, s
        if best_s is None or np.linalg.norm(best_s) < 1e-15:
            radius *= 0.5
            continue

        x_new = xb + best_s
        f_new = track(x_new)
        predicted = -best_m
        actual = fb - f_new
        ratio = actual / predicted if predicted > 0 else (1.0 if actual > 0 else -1.0)

        if ratio < SHRINK_RATIO:
            radius *= 0.5
        elif ratio > GROW_RATIO:
            radius = min(radius * 2.0, max_radius)

        # swap the new point in for the one farthest from the incumbent
        anchor = x_new if f_new < fb else xb
        drop = int(np.argmax(np.linalg.norm(ys - anchor, axis=1)))
        ys[drop] = x_new
        fs[drop] = f_new

    return OptResult(track.x_best, track.f_best, track.evaluations, stop)
