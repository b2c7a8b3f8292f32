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
Exact evaluation of the bounds
==============================

Three independent ways to obtain the same integers:

* ``direct_bound``: the composition sums as written in the Rao and GV bounds
* ``dp_bound``: the recursion over the walk M(x,k) = c_{k+1} M(x+1,k+1) + M(x,k+1)
* ``brute_force_oracle``: enumeration of all 0/1 strings (small horizons only)
"""

from functools import lru_cache
import math

import numpy as np
from scipy.special import comb

from ._core import ArraySpec, BoundKind, BoundTarget
from ._log import logger
from ._validation import check_type

MAX_ORACLE_HORIZON = 24
MAX_DIRECT_OPERATIONS = 10**8


class EnumerationSizeError(ValueError):
    """Raised when an enumeration would be too large to carry out"""


class BigCount(int):
    """Exact nonnegative integer value of a bound"""

    def __new__(cls, value):
        value = int(value)
        if value < 0:
            raise ValueError(f"invalid count {value}: must be nonnegative")
        return super().__new__(cls, value)

    def __repr__(self):
        return f"BigCount({int(self)})"

    def log(self):
        """Return the natural logarithm (-inf for zero)"""
        return math.log(self) if self else -math.inf

    def scientific(self, digits=17):
        """
        Return a base 10 rendering computed from the exact digits

        Returns:
            :mantissa: (float) in [1, 10)
            :exponent: (int) decimal exponent
        """

        if not self:
            return 0.0, 0
        text = str(int(self))
        head = text[:digits]
        return int(head)/10**(len(head) - 1), len(text) - 1


def _check_target(spec, target):
    check_type('spec', spec, ArraySpec)
    check_type('target', target, BoundTarget)
    if not 0 <= target.horizon <= spec.n:
        raise ValueError(f"invalid horizon {target.horizon!r}: must be in [0, {spec.n}]")
    if target.kind is BoundKind.GV_SUM:
        expected = BoundTarget.for_spec(spec, BoundKind.GV_SUM)
        if target != expected:
            raise ValueError(
                f"the GV sum needs threshold {expected.threshold} and horizon {expected.horizon} "
                f"without prefactor, got {target!r}"
            )


def _compositions(total, limits):
    """
    Yield all tuples u with Σ u = total and 0 <= u_m <= limits[m]
    """

    if len(limits) == 1:
        if total <= limits[0]:
            yield (total,)
        return
    for u in range(min(total, limits[0]) + 1):
        for rest in _compositions(total - u, limits[1:]):
            yield (u,) + rest


def direct_op_count(spec):
    """
    Return the lower bound Σ_{i=0}^{floor(t/2)} σ C(σ+i-1, σ-1) on the number
    of operations of the direct composition sum

    Args:
        :spec: (ArraySpec) array parameters

    Returns:
        :count: (BigCount) operation count
    """

    check_type('spec', spec, ArraySpec)
    sigma = spec.sigma
    return BigCount(sum(
        sigma*comb(sigma + i - 1, sigma - 1, exact=True)
        for i in range(spec.strength//2 + 1)
    ))


def direct_bound(spec, target):
    """
    Evaluate a bound by direct summation over compositions

    Args:
        :spec: (ArraySpec) array parameters
        :target: (BoundTarget) Rao or GV sum

    Returns:
        :value: (BigCount) exact value

    Raises:
        :ValueError: for a GV expectation target
        :EnumerationSizeError: if the sum is too large to evaluate directly
    """

    _check_target(spec, target)
    if target.kind is BoundKind.GV_EXPECTATION:
        raise ValueError("direct summation applies to the Rao and GV sums only, not to the GV expectation")

    # Σ_{i<=T} σ C(σ+i-1, σ-1) = σ C(σ+T, σ) over the summed range
    sigma = spec.sigma
    ops = sigma*comb(sigma + max(0, target.threshold), sigma, exact=True)
    if ops > MAX_DIRECT_OPERATIONS:
        raise EnumerationSizeError(
            f"direct summation needs more than {ops} operations, use the recursive method"
        )

    # factor[m][u] = C(l_m, u) (s_m - 1)^u
    factors = [
        [comb(l, u, exact=True)*(s - 1)**u for u in range(l + 1)]
        for s, l in zip(spec.alphabet_sizes, spec.block_lengths)
    ]
    limits = list(spec.block_lengths)

    if target.kind is BoundKind.GV_SUM:
        # Last block: s C(l-1, u-1) (s-1)^(u-1), zero for u = 0
        s, l = spec.alphabet_sizes[-1], spec.block_lengths[-1]
        factors[-1] = [0] + [s*comb(l - 1, u - 1, exact=True)*(s - 1)**(u - 1) for u in range(1, l + 1)]

    total = 0
    for i in range(target.threshold + 1):
        for u in _compositions(i, limits):
            term = 1
            for m, um in enumerate(u):
                term *= factors[m][um]
            total += term

    if target.kind is BoundKind.GV_SUM:
        # The i = 0 term is the leading 1 of the bound
        total += 1

    logger.debug(f"Direct sum for {target.kind.value!r}: {total}")
    return BigCount(total)


def _recursion(costs, threshold):
    """
    Return M(0,0) for the walk with the given up-step costs

    M(x,m) = 1 for x <= T, M(x,k) = c_{k+1} M(x+1,k+1) + M(x,k+1), and
    M(T+1,.) = 0. Two rolling columns of length T+1 are kept.
    """

    if threshold < 0:
        return 0
    column = [1]*(threshold + 1)
    for c in reversed(costs):
        column = [c*column[x + 1] + column[x] for x in range(threshold)] + [column[threshold]]
    return column[0]


def _horizon_costs(spec, target):
    return spec.costs[:target.horizon]


def dp_bound(spec, target):
    """
    Evaluate a bound exactly with the recursion over the counting walk

    Args:
        :spec: (ArraySpec) array parameters
        :target: (BoundTarget) quantity to compute

    Returns:
        :value: (BigCount) exact value
    """

    _check_target(spec, target)
    logger.debug(f"Recursion for {target.kind.value!r}: T = {target.threshold}, m = {target.horizon}")

    if target.kind is BoundKind.GV_SUM:
        # Removing the first letter of the last block leaves a walk of n-1
        # steps with one up-step already taken at cost s_σ
        inner = _recursion(spec.costs[:-1], spec.strength - 2)
        return BigCount(1 + spec.alphabet_sizes[-1]*inner)

    value = _recursion(_horizon_costs(spec, target), target.threshold)
    return BigCount(target.prefactor*value)


def _log_table(costs, threshold):
    m = len(costs)
    table = np.full((threshold + 1, m + 1), -np.inf)
    if threshold < 0:
        return table
    table[:, m] = 0.0
    log_costs = np.log(np.asarray(costs, dtype=float))
    for k in range(m - 1, -1, -1):
        up = np.full(threshold + 1, -np.inf)
        up[:-1] = log_costs[k] + table[1:, k + 1]
        table[:, k] = np.logaddexp(up, table[:, k + 1])
    return table


def dp_log_table(spec, target):
    """
    Return the table of log M(x,k) for 0 <= x <= T, 0 <= k <= m

    Args:
        :spec: (ArraySpec) array parameters
        :target: (BoundTarget) Rao sum or GV expectation

    Returns:
        :table: (ndarray) shape (T+1, m+1), natural logs
    """

    _check_target(spec, target)
    if target.kind is BoundKind.GV_SUM:
        raise ValueError("the table is defined for walk expectations, not for the GV sum")
    return _log_table(_horizon_costs(spec, target), target.threshold)


def dp_log_bound(spec, target):
    """
    Floating point (log space) version of 'dp_bound'

    Approximate: rounding errors accumulate over the horizon (relative error
    about 1e-12 per step).

    Returns:
        :log_value: (float) natural log of the bound
    """

    _check_target(spec, target)
    if target.kind is BoundKind.GV_SUM:
        inner = _log_table(spec.costs[:-1], spec.strength - 2)[0, 0] if spec.strength >= 2 else -np.inf
        return float(np.logaddexp(0.0, math.log(spec.alphabet_sizes[-1]) + inner))
    return float(_log_table(_horizon_costs(spec, target), target.threshold)[0, 0] + math.log(target.prefactor))


@lru_cache(maxsize=64)
def _endpoint_totals(costs):
    """
    Enumerate all 0/1 strings and sum the path weights ∏ r(x_j, j) by endpoint

    Returns:
        :totals: (tuple) exact sum of weights of strings with k up-steps
    """

    m = len(costs)
    index = np.arange(2**m, dtype=np.int64)
    endpoints = np.zeros(2**m, dtype=np.int64)

    # int64 is exact as long as the largest sum fits
    fits = m + sum(math.log2(c) for c in costs) < 62
    weights = np.ones(2**m, dtype=np.int64 if fits else object)
    for j, c in enumerate(costs):
        bit = (index >> j) & 1
        endpoints += bit
        weights[bit == 1] *= c

    return tuple(int(weights[endpoints == k].sum()) for k in range(m + 1))


def brute_force_oracle(spec, target):
    """
    Evaluate a bound by enumerating every 0/1 string of the horizon

    Args:
        :spec: (ArraySpec) array parameters
        :target: (BoundTarget) quantity to compute

    Returns:
        :value: (BigCount) exact value

    Raises:
        :EnumerationSizeError: if the horizon exceeds 24 steps
    """

    _check_target(spec, target)
    if target.horizon > MAX_ORACLE_HORIZON:
        raise EnumerationSizeError(
            f"oracle horizon {target.horizon} exceeds {MAX_ORACLE_HORIZON} steps (2^{target.horizon} strings)"
        )

    if target.kind is BoundKind.GV_SUM:
        # Strings need their first last-block letter set (weight s_σ instead
        # of s_σ - 1); the all-zero string contributes the leading 1.
        p = spec.n - spec.block_lengths[-1]
        others = spec.costs[:p] + spec.costs[p + 1:]
        totals = _endpoint_totals(others)
        return BigCount(1 + spec.alphabet_sizes[-1]*sum(totals[:max(0, target.threshold)]))

    totals = _endpoint_totals(_horizon_costs(spec, target))
    return BigCount(target.prefactor*sum(totals[:target.threshold + 1]))
