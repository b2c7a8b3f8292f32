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
Array parameter model
=====================

An OA(N, s_1^l_1 ... s_σ^l_σ, t) is described by its alphabet sizes, its
block lengths and its strength. Every bound computed in this package is an
expectation over a 0/1 random walk which scans the n = Σ l_i letters of a row;
an up-step at a letter of block i costs s_i - 1, a down-step costs 1.

.. code::

    step j    1 ... l_1 | l_1+1 ... l_1+l_2 | ... | ... n
    block     1         | 2                 | ... | σ
    up cost   s_1 - 1   | s_2 - 1           | ... | s_σ - 1
"""

from bisect import bisect_left
from dataclasses import dataclass, field
from enum import Enum
import json
import math

from ._log import logger
from ._validation import (
    SCHEMA_ALPHABET,
    SCHEMA_LIST,
    SCHEMA_POS_INT,
    check_type,
    validate_against_schema,
    validate_document,
)

SPEC_SCHEMA = {
    'alphabet_sizes': SCHEMA_LIST,
    'block_lengths': SCHEMA_LIST,
    'strength': SCHEMA_POS_INT,
}


class BoundKind(Enum):
    RAO_SUM = 'rao'
    GV_SUM = 'gv'
    GV_EXPECTATION = 'gv-expectation'


class GvVariant(Enum):
    """
    Expectation representations of the GV sum

    * FULL: horizon n, threshold t, no prefactor
    * SHORT: horizon n-1, threshold t-1, no prefactor
    * SHORT_SCALED: horizon n-1, threshold t-1, prefactor s_σ
    """

    FULL = 'full'
    SHORT = 'short'
    SHORT_SCALED = 'short-scaled'


def scientific(log_value):
    """
    Render a natural log magnitude in base 10

    Args:
        :log_value: (float) natural logarithm of a positive number

    Returns:
        :mantissa: (float) in [1, 10)
        :exponent: (int) decimal exponent

    Note:
        * A magnitude of zero (log_value = -inf) is rendered as (0.0, 0)
    """

    if log_value == -math.inf:
        return 0.0, 0
    log10 = log_value/math.log(10)
    exponent = math.floor(log10)
    mantissa = 10**(log10 - exponent)
    # Guard against 9.9999... rounding up to 10
    if mantissa >= 10:
        mantissa /= 10
        exponent += 1
    return mantissa, exponent


@dataclass(frozen=True)
class ScaledParams:
    """Strength and block lengths as fractions of the row length"""

    mu: float
    fractions: tuple

    def __post_init__(self):
        if not 0 < self.mu <= 1:
            raise ValueError(f"invalid 'mu' {self.mu!r}: must be in (0, 1]")
        if abs(sum(self.fractions) - 1) > 1e-12:
            raise ValueError(f"invalid 'fractions' {self.fractions!r}: must sum to 1")

    @property
    def cumulative(self):
        """Return the block boundaries A_i = Σ_{j<=i} a_j (starting with A_0 = 0)"""

        bounds = [0.0]
        for a in self.fractions:
            bounds.append(bounds[-1] + a)
        return tuple(bounds)


@dataclass(frozen=True)
class ArraySpec:
    """
    Parameters of a mixed level orthogonal array

    Attrs:
        :alphabet_sizes: (tuple) alphabet size s_i of each block
        :block_lengths: (tuple) number of letters l_i in each block
        :strength: (int) strength t
    """

    alphabet_sizes: tuple
    block_lengths: tuple
    strength: int
    boundaries: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'alphabet_sizes', tuple(self.alphabet_sizes))
        object.__setattr__(self, 'block_lengths', tuple(self.block_lengths))

        if not self.alphabet_sizes:
            raise ValueError("'alphabet_sizes' must not be empty")
        if len(self.alphabet_sizes) != len(self.block_lengths):
            raise ValueError(
                f"'alphabet_sizes' and 'block_lengths' must have equal length "
                f"({len(self.alphabet_sizes)} != {len(self.block_lengths)})"
            )
        for i, s in enumerate(self.alphabet_sizes):
            validate_against_schema(f'alphabet_sizes[{i}]', s, SCHEMA_ALPHABET)
        for i, l in enumerate(self.block_lengths):
            validate_against_schema(f'block_lengths[{i}]', l, SCHEMA_POS_INT)
        validate_against_schema('strength', self.strength, SCHEMA_POS_INT)

        bounds = []
        total = 0
        for l in self.block_lengths:
            total += l
            bounds.append(total)
        object.__setattr__(self, 'boundaries', tuple(bounds))

        if self.strength > self.n:
            raise ValueError(f"invalid 'strength' {self.strength}: must not exceed n = {self.n}")

    @property
    def n(self):
        """Row length"""
        return self.boundaries[-1]

    @property
    def sigma(self):
        """Number of blocks"""
        return len(self.alphabet_sizes)

    @property
    def costs(self):
        """Return the up-step running cost s_i - 1 for every step 1..n"""

        return tuple(
            s - 1
            for s, l in zip(self.alphabet_sizes, self.block_lengths)
            for _ in range(l)
        )

    @property
    def scaled(self):
        return ScaledParams(
            mu=self.strength/self.n,
            fractions=tuple(l/self.n for l in self.block_lengths),
        )

    def scaled_to(self, n):
        """
        Return a spec with the same shape (a_i, s_i, μ) and row length n

        Block lengths are distributed by largest remainder and each block
        keeps at least one letter.

        Args:
            :n: (int) new row length

        Returns:
            :spec: (ArraySpec) rescaled spec
        """

        validate_against_schema('n', n, SCHEMA_POS_INT)
        if n < self.sigma:
            raise ValueError(f"cannot scale {self.sigma} blocks to row length {n}")

        shape = self.scaled
        exact = [a*n for a in shape.fractions]
        lengths = [max(1, math.floor(x)) for x in exact]
        order = sorted(range(self.sigma), key=lambda i: exact[i] - math.floor(exact[i]), reverse=True)
        k = 0
        while sum(lengths) < n:
            lengths[order[k % self.sigma]] += 1
            k += 1
        while sum(lengths) > n:
            i = max(range(self.sigma), key=lambda i: lengths[i])
            lengths[i] -= 1

        strength = min(n, max(1, round(shape.mu*n)))
        logger.debug(f"Scaled spec to n = {n}: l = {lengths}, t = {strength}")
        return ArraySpec(self.alphabet_sizes, tuple(lengths), strength)

    def to_dict(self):
        return {
            'alphabet_sizes': list(self.alphabet_sizes),
            'block_lengths': list(self.block_lengths),
            'strength': self.strength,
        }

    @classmethod
    def from_dict(cls, d):
        """
        Create a spec from a document

        Args:
            :d: (dict) keys 'alphabet_sizes', 'block_lengths', 'strength'

        Returns:
            :spec: (ArraySpec) validated spec
        """

        validate_document(d, SPEC_SCHEMA)
        return cls(d['alphabet_sizes'], d['block_lengths'], d['strength'])

    @classmethod
    def load(cls, path):
        """Read a spec from a JSON file"""

        with open(path, 'r') as fp:
            d = json.load(fp)
        logger.debug(f"Loaded spec document from {str(path)!r}")
        return cls.from_dict(d)


@dataclass(frozen=True)
class BoundTarget:
    """
    Quantity to compute

    Attrs:
        :kind: (BoundKind) Rao sum, GV sum or GV expectation
        :threshold: (int) largest admitted endpoint T of the walk
        :horizon: (int) number of steps m
        :prefactor: (int) factor applied to the expectation
        :variant: (GvVariant) expectation variant (GV expectation only)
    """

    kind: BoundKind
    threshold: int
    horizon: int
    prefactor: int = 1
    variant: GvVariant = None

    @classmethod
    def for_spec(cls, spec, kind, variant=GvVariant.FULL):
        """
        Return the target of a given kind for a spec

        Args:
            :spec: (ArraySpec) array parameters
            :kind: (BoundKind or str) requested quantity
            :variant: (GvVariant or str) GV expectation variant

        Returns:
            :target: (BoundTarget) target
        """

        check_type('spec', spec, ArraySpec)
        kind = BoundKind(kind)
        t, n = spec.strength, spec.n

        if kind is BoundKind.RAO_SUM:
            return cls(kind, t//2, n)
        if kind is BoundKind.GV_SUM:
            return cls(kind, t - 1, n)

        variant = GvVariant(variant)
        if variant is GvVariant.FULL:
            return cls(kind, t, n, 1, variant)
        prefactor = spec.alphabet_sizes[-1] if variant is GvVariant.SHORT_SCALED else 1
        return cls(kind, t - 1, n - 1, prefactor, variant)


def block_of(spec, j):
    """
    Return the (1-based) block index of step j

    Args:
        :spec: (ArraySpec) array parameters
        :j: (int) step index 1..n

    Returns:
        :i: (int) block containing step j
    """

    check_type('j', j, int)
    if not 1 <= j <= spec.n:
        raise ValueError(f"step index {j} out of range [1, {spec.n}]")
    return bisect_left(spec.boundaries, j) + 1


def running_cost(spec, x, j):
    """
    Return the running cost r(x, j) of the counting walk

    Args:
        :spec: (ArraySpec) array parameters
        :x: (int) increment, 0 or 1
        :j: (int) step index 1..n

    Returns:
        :cost: (int) 1 for a down-step, s_i - 1 for an up-step in block i
    """

    if x not in (0, 1):
        raise ValueError(f"invalid increment {x!r}: must be 0 or 1")
    i = block_of(spec, j)
    if x == 0:
        return 1
    return spec.alphabet_sizes[i - 1] - 1
