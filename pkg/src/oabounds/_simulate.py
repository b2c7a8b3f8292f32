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
Importance sampling
===================

The expectation E[1{S_m <= T} ∏ 2 r(X_j, j)] is estimated from K sampled
walks. Under the tilted measure the increment at a step of block i is 1 with
the fixed probability θ*_i of the limit program; each path carries the weight
∏ r(X_j, j)/p(X_j). Plain Monte Carlo samples fair coins instead.

All weights are handled in log space. Paths are split into replicate streams
of at most STREAM_SIZE paths; stream k draws from its own Philox generator
keyed by (seed, k), so the estimate does not depend on the number of worker
processes.
"""

from dataclasses import dataclass
from functools import reduce
from multiprocessing import Pool
import math
import os

import numpy as np
from numpy.random import Generator, Philox, SeedSequence
from scipy.special import logsumexp

from ._asymptotics import THETA_CLAMP, TiltProfile, optimal_tilt
from ._core import ArraySpec, BoundKind, BoundTarget, GvVariant, scientific
from ._log import logger
from ._validation import SCHEMA_POS_INT, check_type, validate_against_schema

STREAM_SIZE = 10_000
BATCH_CELLS = 2_000_000
THREADS_ENV = 'OABOUNDS_THREADS'


def worker_count():
    """Return the number of worker processes (capped by OABOUNDS_THREADS)"""

    workers = os.cpu_count() or 1
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            cap = int(cap)
        except ValueError:
            raise ValueError(f"invalid {THREADS_ENV} {cap!r}: must be a positive integer") from None
        validate_against_schema(THREADS_ENV, cap, SCHEMA_POS_INT)
        workers = min(workers, cap)
    return workers


@dataclass(frozen=True)
class IsConfig:
    """
    Simulation settings

    Attrs:
        :samples: (int) number of sample paths K (at least 2)
        :seed: (int) 64-bit seed
        :kind: (BoundKind) Rao sum or GV expectation
        :use_tilt: (bool) tilted sampling if True, plain Monte Carlo otherwise
        :variant: (GvVariant) GV expectation variant
    """

    samples: int
    seed: int = 0
    kind: BoundKind = BoundKind.RAO_SUM
    use_tilt: bool = True
    variant: GvVariant = GvVariant.FULL

    def __post_init__(self):
        validate_against_schema('samples', self.samples, {'type': int, '>=': 2})
        validate_against_schema('seed', self.seed, {'type': int, '>=': 0, '<': 2**64})
        check_type('use_tilt', self.use_tilt, bool)
        object.__setattr__(self, 'kind', BoundKind(self.kind))
        object.__setattr__(self, 'variant', GvVariant(self.variant))
        if self.kind is BoundKind.GV_SUM:
            raise ValueError("the GV sum is not an expectation, simulate 'rao' or 'gv-expectation'")


@dataclass(frozen=True)
class StreamStats:
    """
    Sufficient statistics of a set of path contributions

    The contributions c_k are kept as log power sums: log Σc, log Σc², log Σc⁴.
    """

    count: int
    hits: int
    log_sum1: float
    log_sum2: float
    log_sum4: float

    @classmethod
    def from_log_contributions(cls, log_contributions):
        logc = np.asarray(log_contributions, dtype=float)
        finite = logc[np.isfinite(logc)]
        if not len(finite):
            return cls(len(logc), 0, -math.inf, -math.inf, -math.inf)
        return cls(
            count=len(logc),
            hits=len(finite),
            log_sum1=float(logsumexp(finite)),
            log_sum2=float(logsumexp(2*finite)),
            log_sum4=float(logsumexp(4*finite)),
        )

    def merge(self, other):
        """Combine two sets of statistics (associative)"""

        return StreamStats(
            count=self.count + other.count,
            hits=self.hits + other.hits,
            log_sum1=float(np.logaddexp(self.log_sum1, other.log_sum1)),
            log_sum2=float(np.logaddexp(self.log_sum2, other.log_sum2)),
            log_sum4=float(np.logaddexp(self.log_sum4, other.log_sum4)),
        )

    @staticmethod
    def _log_centered(log_sum_sq, log_sum, k):
        """Return log(Σx² - (Σx)²/k), -inf when the spread vanishes"""

        ratio = math.exp(min(0.0, 2*log_sum - math.log(k) - log_sum_sq))
        if ratio >= 1:
            return -math.inf
        return log_sum_sq + math.log1p(-ratio)

    @property
    def log_mean(self):
        if not self.hits:
            return -math.inf
        return self.log_sum1 - math.log(self.count)

    @property
    def log_std_error(self):
        """Log of the sample standard deviation divided by √K"""

        if not self.hits:
            return -math.inf
        k = self.count
        log_centered = self._log_centered(self.log_sum2, self.log_sum1, k)
        return 0.5*(log_centered - math.log(k - 1) - math.log(k))

    @property
    def log_second_moment(self):
        if not self.hits:
            return -math.inf
        return self.log_sum2 - math.log(self.count)

    @property
    def log_second_moment_se(self):
        """Standard error of 'log_second_moment' (delta method)"""

        if not self.hits:
            return math.inf
        k = self.count
        log_centered = self._log_centered(self.log_sum4, self.log_sum2, k)
        if log_centered == -math.inf:
            return 0.0
        return math.exp(0.5*(log_centered - math.log(k - 1) - math.log(k)) - self.log_second_moment)


@dataclass(frozen=True)
class PathSample:
    """Sampled walks with their endpoints and accumulated log-weights"""

    paths: np.ndarray
    endpoints: np.ndarray
    log_weights: np.ndarray


def step_probabilities(spec, target, tilt=None):
    """
    Return the up-step probability used at every step of the horizon

    Args:
        :spec: (ArraySpec) array parameters
        :target: (BoundTarget) quantity to estimate
        :tilt: (TiltProfile) fixed change of measure, None for fair coins

    Returns:
        :probs: (ndarray) probability per step (length m)
    """

    if tilt is None:
        return np.full(target.horizon, 0.5)
    per_block = np.clip(np.asarray(tilt.thetas, dtype=float), THETA_CLAMP, 1 - THETA_CLAMP)
    return np.repeat(per_block, spec.block_lengths)[:target.horizon]


def sample_paths(spec, target, probs, rng, count):
    """
    Sample walks and accumulate log r(X_j, j) - log p(X_j) along each path

    Args:
        :spec: (ArraySpec) array parameters
        :target: (BoundTarget) fixes the horizon
        :probs: (ndarray) up-step probabilities per step
        :rng: (Generator) random generator
        :count: (int) number of paths

    Returns:
        :sample: (PathSample) paths, endpoints and log-weights
    """

    costs = np.asarray(spec.costs[:target.horizon], dtype=float)
    log_up = np.log(costs) - np.log(probs)
    log_down = -np.log1p(-probs)

    paths = rng.random((count, target.horizon)) < probs
    endpoints = paths.sum(axis=1)
    log_weights = np.where(paths, log_up, log_down).sum(axis=1)
    return PathSample(paths, endpoints, log_weights)


def _run_stream(task):
    """Simulate one replicate stream and return its statistics"""

    spec, target, probs, seed, index, count = task
    rng = Generator(Philox(SeedSequence(seed, spawn_key=(index,))))
    log_prefactor = math.log(target.prefactor)
    batch = max(1, BATCH_CELLS//max(1, target.horizon))

    stats = None
    done = 0
    while done < count:
        size = min(batch, count - done)
        sample = sample_paths(spec, target, probs, rng, size)
        # Paths ending above the threshold count as zero contributions
        logc = np.where(sample.endpoints <= target.threshold, sample.log_weights + log_prefactor, -np.inf)
        part = StreamStats.from_log_contributions(logc)
        stats = part if stats is None else stats.merge(part)
        done += size
    return stats


def _stream_counts(samples):
    full, rest = divmod(samples, STREAM_SIZE)
    return [STREAM_SIZE]*full + ([rest] if rest else [])


def _simulate(spec, config):
    check_type('spec', spec, ArraySpec)
    check_type('config', config, IsConfig)

    target = BoundTarget.for_spec(spec, config.kind, config.variant)
    tilt = optimal_tilt(spec, config.kind) if config.use_tilt else None
    probs = step_probabilities(spec, target, tilt)

    tasks = [
        (spec, target, probs, config.seed, index, count)
        for index, count in enumerate(_stream_counts(config.samples))
    ]
    workers = min(worker_count(), len(tasks))
    logger.debug(f"Simulating {config.samples} paths in {len(tasks)} stream(s) on {workers} worker(s)")

    if workers > 1:
        with Pool(workers) as pool:
            parts = pool.map(_run_stream, tasks)
    else:
        parts = [_run_stream(task) for task in tasks]
    return reduce(StreamStats.merge, parts), tilt


@dataclass(frozen=True)
class IsResult:
    """
    Estimate with diagnostics

    'std_error', 'ci_low' and 'ci_high' are given in units of 10**exponent10,
    like the mantissa.
    """

    log_estimate: float
    mantissa: float
    exponent10: int
    std_error: float
    ci_low: float
    ci_high: float
    hit_fraction: float
    log_second_moment: float
    samples: int
    seed: int
    method: str
    kind: str
    tilt: TiltProfile = None

    def __post_init__(self):
        if not 0 <= self.hit_fraction <= 1:
            raise ValueError(f"invalid 'hit_fraction' {self.hit_fraction!r}")
        if self.std_error < 0:
            raise ValueError(f"invalid 'std_error' {self.std_error!r}: must be nonnegative")
        if not self.ci_low <= self.mantissa <= self.ci_high:
            raise ValueError("confidence interval must contain the estimate")

    @classmethod
    def from_stats(cls, stats, config, tilt=None):
        mantissa, exponent = scientific(stats.log_mean)
        log_se = stats.log_std_error
        std_error = math.exp(log_se - exponent*math.log(10)) if log_se > -math.inf else 0.0
        return cls(
            log_estimate=stats.log_mean,
            mantissa=mantissa,
            exponent10=exponent,
            std_error=std_error,
            ci_low=mantissa - 2*std_error,
            ci_high=mantissa + 2*std_error,
            hit_fraction=stats.hits/stats.count,
            log_second_moment=stats.log_second_moment,
            samples=stats.count,
            seed=config.seed,
            method='is' if config.use_tilt else 'mc',
            kind=config.kind.value,
            tilt=tilt,
        )

    @property
    def estimate(self):
        """Return the estimate on the linear scale"""
        return self.mantissa*10.0**self.exponent10

    def contains(self, value):
        """Check if a value lies in the ±2 standard error interval"""

        scaled = int(value)/10**self.exponent10 if isinstance(value, int) else value/10.0**self.exponent10
        return self.ci_low <= scaled <= self.ci_high

    def to_dict(self):
        return {
            'log_estimate': self.log_estimate,
            'mantissa': self.mantissa,
            'exponent10': self.exponent10,
            'std_error': self.std_error,
            'ci_low': self.ci_low,
            'ci_high': self.ci_high,
            'hit_fraction': self.hit_fraction,
            'log_second_moment': self.log_second_moment,
            'samples': self.samples,
            'seed': self.seed,
            'method': self.method,
            'kind': self.kind,
            'tilt': self.tilt.to_dict() if self.tilt is not None else None,
        }

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        for key in ('log_estimate', 'log_second_moment'):
            if d[key] is None:
                d[key] = -math.inf
        if d['tilt'] is not None:
            d['tilt'] = TiltProfile.from_dict(d['tilt'])
        return cls(**d)


def is_estimate(spec, config):
    """
    Estimate a bound by importance sampling (or plain Monte Carlo)

    Args:
        :spec: (ArraySpec) array parameters
        :config: (IsConfig) simulation settings

    Returns:
        :result: (IsResult) estimate, standard error and diagnostics
    """

    stats, tilt = _simulate(spec, config)
    result = IsResult.from_stats(stats, config, tilt)
    logger.debug(
        f"Estimate {result.mantissa:.4f}e{result.exponent10} ± {result.std_error:.4f}e{result.exponent10} "
        f"(hits {result.hit_fraction:.3f})"
    )
    return result


def weight_of_endpoint(spec, tilt, s_end, horizon=None):
    """
    Return the log-weight of any tilted path ending at s_end

    Under the fixed tilt every path weight ∏ r/p depends on the endpoint only:
    λ*(s_end - m) + Σ_j log(e^λ* + s_j - 1).

    Args:
        :spec: (ArraySpec) array parameters
        :tilt: (TiltProfile) change of measure
        :s_end: (int) endpoint S_m
        :horizon: (int) number of steps m (default n)

    Returns:
        :log_weight: (float) log-weight
    """

    check_type('tilt', tilt, TiltProfile)
    m = spec.n if horizon is None else horizon
    if not 0 <= s_end <= m:
        raise ValueError(f"invalid endpoint {s_end!r}: must be in [0, {m}]")
    lam = tilt.lambda_star
    log_costs = np.log(np.asarray(spec.costs[:m], dtype=float))
    return float(lam*(s_end - m) + np.logaddexp(lam, log_costs).sum())


@dataclass(frozen=True)
class DiagnosticRow:
    """Second moment growth of the estimator at one row length"""

    n: int
    second_moment_rate: float
    second_moment_rate_se: float
    twice_rate: float

    @property
    def gap(self):
        """Distance of the second moment rate from 2 V(0,0)"""
        return abs(self.second_moment_rate - self.twice_rate)


def optimality_diagnostic(spec, kind, samples, n_list, seed=0):
    """
    Compare the second moment growth of the tilted estimator with 2 V(0,0)

    Args:
        :spec: (ArraySpec) supplies the shape (a_i, s_i, μ)
        :kind: (BoundKind or str) Rao sum or GV expectation
        :samples: (int) paths per row length
        :n_list: (iterable) row lengths
        :seed: (int) seed

    Returns:
        :rows: (list) one DiagnosticRow per row length
    """

    rows = []
    for n in n_list:
        scaled = spec.scaled_to(n)
        config = IsConfig(samples=samples, seed=seed, kind=kind)
        stats, tilt = _simulate(scaled, config)
        rows.append(DiagnosticRow(
            n=n,
            second_moment_rate=stats.log_second_moment/n,
            second_moment_rate_se=stats.log_second_moment_se/n,
            twice_rate=2*tilt.rate,
        ))
        logger.debug(f"n = {n}: second moment rate {rows[-1].second_moment_rate:.5f}, 2V = {2*tilt.rate:.5f}")
    return rows
