#!/usr/bin/env python3
# -*- coding: utf-8 -*-

# ----------------------------------------------------------------------
# Copyright 2020 the OA-Bounds authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ----------------------------------------------------------------------

"""
Large deviations asymptotics
============================

Under t = μn and l_i = a_i n the bounds grow like exp(n V(0,0)) where

    V(0,0) = sup Σ a_i (θ_i log(s_i - 1) + H(θ_i))   s.t.  Σ a_i θ_i <= budget

with budget μ/2 for the Rao bound and μ for the GV bound. The maximiser is
θ_i = (s_i - 1)/(e^λ + s_i - 1) where the multiplier λ >= 0 solves the
scalar equation g(λ) = Σ a_i θ_i(λ) = budget (g is strictly decreasing).
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import bisect
from scipy.special import entr, expit

from ._core import ArraySpec, BoundKind, BoundTarget, GvVariant, scientific
from ._exact import dp_log_table
from ._log import logger
from ._validation import check_type

THETA_CLAMP = 1e-15
MAX_BISECT_ITER = 200
LAMBDA_XTOL = 1e-14


def entropy(theta):
    """
    Return H(θ) = -θ log θ - (1-θ) log(1-θ) (natural log, H(0) = H(1) = 0)

    Args:
        :theta: (float) probability in [0, 1]
    """

    if not 0 <= theta <= 1:
        raise ValueError(f"invalid probability {theta!r}: must be in [0, 1]")
    return float(entr(theta) + entr(1 - theta))


def _thetas(sizes, lam):
    """θ_i(λ) = (s_i - 1)/(e^λ + s_i - 1), computed without overflow"""

    if lam == math.inf:
        return np.zeros(len(sizes))
    return expit(np.log(np.asarray(sizes, dtype=float) - 1) - lam)


def _load(sizes, weights, lam):
    """g(λ) = Σ w_i θ_i(λ)"""
    return float(np.dot(weights, _thetas(sizes, lam)))


def _objective(sizes, weights, thetas):
    thetas = np.clip(thetas, THETA_CLAMP, 1 - THETA_CLAMP)
    sizes = np.asarray(sizes, dtype=float)
    gains = thetas*np.log(sizes - 1) + entr(thetas) + entr(1 - thetas)
    return float(np.dot(weights, gains))


def _solve_multiplier(sizes, weights, budget):
    """
    Return the λ >= 0 for which Σ w_i θ_i(λ) = budget (0 if g(0) <= budget)
    """

    if _load(sizes, weights, 0.0) <= budget:
        return 0.0

    def residual(lam):
        return _load(sizes, weights, lam) - budget

    # Grow the bracket until g drops below the budget
    hi = 1.0
    while residual(hi) > 0:
        hi *= 2
    lam = bisect(residual, 0.0, hi, xtol=LAMBDA_XTOL, maxiter=MAX_BISECT_ITER)
    logger.debug(f"Multiplier λ* = {lam:.12g} (bracket [0, {hi:g}], residual {residual(lam):.3e})")
    return lam


def _tilt_for_budget(sizes, weights, budget):
    """
    Solve the weighted concave program for a given budget

    Returns:
        :lam: (float) multiplier (inf if the budget is zero)
        :thetas: (ndarray) maximisers
        :value: (float) optimal value
    """

    if budget <= 0:
        return math.inf, np.zeros(len(sizes)), 0.0
    lam = _solve_multiplier(sizes, weights, budget)
    thetas = _thetas(sizes, lam)
    return lam, thetas, _objective(sizes, weights, thetas)


def solve_lambda(spec, budget):
    """
    Return the Lagrange multiplier λ* of the limit program

    Args:
        :spec: (ArraySpec) array parameters
        :budget: (float) constraint level in (0, 1)

    Returns:
        :lam: (float) 0 if the constraint is slack, else the unique root of
            Σ a_i (s_i - 1)/(e^λ + s_i - 1) = budget
    """

    check_type('spec', spec, ArraySpec)
    if not 0 < budget < 1:
        raise ValueError(f"invalid budget {budget!r}: must be in (0, 1)")
    return _solve_multiplier(spec.alphabet_sizes, spec.scaled.fractions, budget)


def budget_for(spec, kind):
    """Return μ/2 for the Rao bound and μ for the GV bounds"""

    mu = spec.scaled.mu
    return mu/2 if BoundKind(kind) is BoundKind.RAO_SUM else mu


@dataclass(frozen=True)
class TiltProfile:
    """
    Solution of the limit program

    Attrs:
        :lambda_star: (float) Lagrange multiplier
        :thetas: (tuple) per block up-step probabilities θ*_i
        :rate: (float) V(0,0) in nats per step
        :budget: (float) constraint level
        :constrained: (bool) whether the budget constraint binds
    """

    lambda_star: float
    thetas: tuple
    rate: float
    budget: float
    constrained: bool

    def __post_init__(self):
        if self.lambda_star < 0:
            raise ValueError(f"invalid 'lambda_star' {self.lambda_star!r}: must be nonnegative")
        if any(not 0 <= th <= 1 for th in self.thetas):
            raise ValueError(f"invalid 'thetas' {self.thetas!r}: must be probabilities")
        if self.rate < 0:
            raise ValueError(f"invalid 'rate' {self.rate!r}: must be nonnegative")
        if not self.constrained and self.lambda_star != 0:
            raise ValueError("an unconstrained profile must have 'lambda_star' = 0")

    def to_dict(self):
        return {
            'lambda_star': self.lambda_star,
            'thetas': list(self.thetas),
            'rate': self.rate,
            'budget': self.budget,
            'constrained': self.constrained,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            lambda_star=d['lambda_star'],
            thetas=tuple(d['thetas']),
            rate=d['rate'],
            budget=d['budget'],
            constrained=d['constrained'],
        )


def optimal_tilt(spec, kind):
    """
    Solve the limit program for the Rao or the GV bound

    Args:
        :spec: (ArraySpec) array parameters
        :kind: (BoundKind or str) bound kind

    Returns:
        :tilt: (TiltProfile) multiplier, maximisers and rate
    """

    check_type('spec', spec, ArraySpec)
    kind = BoundKind(kind)
    budget = budget_for(spec, kind)
    sizes, fractions = spec.alphabet_sizes, spec.scaled.fractions
    slack = _load(sizes, fractions, 0.0)

    if kind is BoundKind.RAO_SUM:
        # (s-1)/s >= 1/2 >= μ/2, so the Rao constraint always binds
        assert slack >= budget - 1e-15, "Rao budget exceeds the unconstrained load"

    if slack <= budget:
        lam = 0.0
    else:
        lam = solve_lambda(spec, budget)
    thetas = _thetas(sizes, lam)
    rate = _objective(sizes, fractions, thetas)

    logger.debug(f"Optimal tilt ({kind.value}): λ* = {lam:.6g}, rate = {rate:.6g}")
    return TiltProfile(
        lambda_star=lam,
        thetas=tuple(float(th) for th in thetas),
        rate=rate,
        budget=budget,
        constrained=lam > 0,
    )


@dataclass(frozen=True)
class LdEstimate:
    """Large deviations point estimate exp(n V(0,0))"""

    log_value: float
    mantissa: float
    exponent10: int
    rate: float
    n: int

    def to_dict(self):
        return {
            'log_value': self.log_value,
            'mantissa': self.mantissa,
            'exponent10': self.exponent10,
            'rate': self.rate,
            'n': self.n,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


def ld_estimate(spec, kind):
    """
    Return the large deviations point estimate exp(n V(0,0))

    Args:
        :spec: (ArraySpec) array parameters
        :kind: (BoundKind or str) bound kind

    Returns:
        :estimate: (LdEstimate) log value and decimal rendering
    """

    rate = optimal_tilt(spec, kind).rate
    log_value = spec.n*rate
    mantissa, exponent = scientific(log_value)
    return LdEstimate(log_value, mantissa, exponent, rate, spec.n)


def _remaining_weights(spec, tau):
    """
    Return the weight of each block on the time interval [τ, 1]
    """

    bounds = spec.scaled.cumulative
    weights = []
    for i in range(spec.sigma):
        lo, hi = bounds[i], bounds[i + 1]
        weights.append(max(0.0, hi - max(lo, tau)))
    return np.asarray(weights)


def value_function(spec, x, tau, kind=BoundKind.RAO_SUM):
    """
    Return the limit value V(x, τ) started at position x and time τ

    Args:
        :spec: (ArraySpec) array parameters
        :x: (float) scaled position in [0, budget]
        :tau: (float) scaled time in [0, 1]
        :kind: (BoundKind or str) bound kind

    Returns:
        :value: (float) V(x, τ)
    """

    check_type('spec', spec, ArraySpec)
    budget = budget_for(spec, kind)
    if not 0 <= tau <= 1:
        raise ValueError(f"invalid time {tau!r}: must be in [0, 1]")
    if x < 0 or x > budget + 1e-12:
        raise ValueError(f"invalid position {x!r}: must be in [0, {budget}]")

    weights = _remaining_weights(spec, tau)
    if not weights.any():
        return 0.0
    _, _, value = _tilt_for_budget(spec.alphabet_sizes, weights, budget - x)
    return value


def limit_grid(spec, kind=BoundKind.RAO_SUM, size=21):
    """
    Evaluate V(x, τ) on a regular grid

    Args:
        :spec: (ArraySpec) array parameters
        :kind: (BoundKind or str) bound kind
        :size: (int) number of grid points per axis

    Returns:
        :xs: (ndarray) positions in [0, budget]
        :taus: (ndarray) times in [0, 1]
        :values: (ndarray) values[i, j] = V(xs[i], taus[j])
    """

    if size < 2:
        raise ValueError(f"invalid grid size {size!r}: must be at least 2")
    budget = budget_for(spec, kind)
    xs = np.linspace(0, budget, size)
    taus = np.linspace(0, 1, size)
    values = np.array([[value_function(spec, x, tau, kind) for tau in taus] for x in xs])
    return xs, taus, values


def prelimit_grid(spec, kind=BoundKind.RAO_SUM, variant=GvVariant.FULL):
    """
    Return the prelimit values V_n(x, i) = (1/n) log M(x, i)

    Args:
        :spec: (ArraySpec) array parameters
        :kind: (BoundKind or str) Rao sum or GV expectation

    Returns:
        :xs: (ndarray) scaled positions x/n for x = 0..T
        :taus: (ndarray) scaled times i/n for i = 0..m
        :values: (ndarray) values[x, i] = V_n(x, i)
    """

    kind = BoundKind(kind)
    if kind is BoundKind.GV_SUM:
        kind = BoundKind.GV_EXPECTATION
    target = BoundTarget.for_spec(spec, kind, variant)
    n = spec.n
    values = dp_log_table(spec, target)/n
    xs = np.arange(target.threshold + 1)/n
    taus = np.arange(target.horizon + 1)/n
    return xs, taus, values


def rate_sweep(spec, mus):
    """
    Return Rao and GV rates over a range of μ at the spec's fixed a_i, s_i

    Args:
        :spec: (ArraySpec) supplies the shape (a_i, s_i)
        :mus: (iterable) values of μ in [0, 1]

    Returns:
        :rows: (list) tuples (mu, rao_rate, gv_rate)
    """

    check_type('spec', spec, ArraySpec)
    sizes, fractions = spec.alphabet_sizes, spec.scaled.fractions
    slack = _load(sizes, fractions, 0.0)

    rows = []
    for mu in mus:
        mu = float(mu)
        if not 0 <= mu <= 1:
            raise ValueError(f"invalid 'mu' {mu!r}: must be in [0, 1]")
        # μ/2 <= 1/2 <= g(0): the Rao budget never exceeds the slack point
        _, _, rao = _tilt_for_budget(sizes, fractions, min(mu/2, slack))
        _, _, gv = _tilt_for_budget(sizes, fractions, mu)
        rows.append((mu, rao, gv))
    return rows
