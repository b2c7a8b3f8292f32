#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import json
import math

import pytest

from oabounds import (
    ArraySpec,
    BoundKind,
    BoundTarget,
    GvVariant,
    ScaledParams,
    block_of,
    running_cost,
    scientific,
)
from oabounds import enable_logger
enable_logger()

EXAMPLE_1 = ArraySpec([13, 10, 7, 5], [20, 20, 20, 20], 4)


def test_spec_basic():
    spec = EXAMPLE_1
    assert spec.n == 80
    assert spec.sigma == 4
    assert spec.boundaries == (20, 40, 60, 80)
    assert spec.alphabet_sizes == (13, 10, 7, 5)

    scaled = spec.scaled
    assert scaled.mu == pytest.approx(0.05)
    assert scaled.fractions == (0.25, 0.25, 0.25, 0.25)
    assert scaled.cumulative == (0.0, 0.25, 0.5, 0.75, 1.0)


def test_spec_errors():
    # ----- Empty and unequal lists -----
    with pytest.raises(ValueError):
        ArraySpec([], [], 1)
    with pytest.raises(ValueError):
        ArraySpec([2, 3], [1], 1)

    # ----- Alphabets and lengths -----
    with pytest.raises(ValueError):
        ArraySpec([1, 3], [1, 1], 1)
    with pytest.raises(ValueError):
        ArraySpec([2, 3], [0, 1], 1)
    with pytest.raises(TypeError):
        ArraySpec([2.0, 3], [1, 1], 1)

    # ----- Strength -----
    with pytest.raises(ValueError):
        ArraySpec([2, 3], [1, 1], 0)
    with pytest.raises(ValueError):
        ArraySpec([2, 3], [1, 1], 3)


def test_spec_documents(tmp_path):
    d = {"alphabet_sizes": [13, 10, 7, 5], "block_lengths": [20, 20, 20, 20], "strength": 4}
    assert ArraySpec.from_dict(d) == EXAMPLE_1
    assert EXAMPLE_1.to_dict() == d

    path = tmp_path / 'spec.json'
    path.write_text(json.dumps(d))
    assert ArraySpec.load(path) == EXAMPLE_1

    with pytest.raises(KeyError):
        ArraySpec.from_dict({**d, 'extra': 1})
    with pytest.raises(KeyError):
        ArraySpec.from_dict({'alphabet_sizes': [2], 'block_lengths': [1]})


def test_scaled_params():
    with pytest.raises(ValueError):
        ScaledParams(0.0, (1.0,))
    with pytest.raises(ValueError):
        ScaledParams(0.5, (0.5, 0.4))


def test_scaled_to():
    spec = EXAMPLE_1.scaled_to(160)
    assert spec.block_lengths == (40, 40, 40, 40)
    assert spec.strength == 8
    assert spec.alphabet_sizes == EXAMPLE_1.alphabet_sizes

    # Uneven split keeps the total
    spec = ArraySpec([2, 3, 4], [1, 1, 1], 1).scaled_to(10)
    assert sum(spec.block_lengths) == 10
    assert min(spec.block_lengths) >= 3


def test_block_of():
    spec = ArraySpec([2, 2, 2, 2], [20, 20, 20, 20], 4)
    assert block_of(spec, 1) == 1
    assert block_of(spec, 20) == 1
    assert block_of(spec, 21) == 2
    assert block_of(spec, 80) == 4

    assert block_of(ArraySpec([2, 3, 4], [3, 1, 2], 1), 5) == 3

    with pytest.raises(ValueError):
        block_of(spec, 0)
    with pytest.raises(ValueError):
        block_of(spec, 81)


def test_block_of_is_step_function():
    spec = ArraySpec([2, 3, 4], [3, 1, 2], 1)
    blocks = [block_of(spec, j) for j in range(1, spec.n + 1)]
    assert blocks == [1, 1, 1, 2, 3, 3]
    jumps = [j for j in range(2, spec.n + 1) if blocks[j - 1] != blocks[j - 2]]
    assert [j - 1 for j in jumps] == list(spec.boundaries[:-1])


def test_running_cost():
    assert running_cost(EXAMPLE_1, 0, 1) == 1
    assert running_cost(EXAMPLE_1, 0, 80) == 1
    assert running_cost(EXAMPLE_1, 1, 1) == 12
    assert running_cost(EXAMPLE_1, 1, 80) == 4

    with pytest.raises(ValueError):
        running_cost(EXAMPLE_1, 2, 1)


def test_running_cost_multiset():
    spec = ArraySpec([3, 5, 2], [2, 4, 3], 2)
    costs = sorted(running_cost(spec, 1, j) for j in range(1, spec.n + 1))
    assert costs == sorted([2]*2 + [4]*4 + [1]*3)
    assert tuple(running_cost(spec, 1, j) for j in range(1, spec.n + 1)) == spec.costs


def test_bound_targets():
    spec = ArraySpec([3, 5], [4, 4], 5)

    t = BoundTarget.for_spec(spec, BoundKind.RAO_SUM)
    assert (t.threshold, t.horizon, t.prefactor) == (2, 8, 1)

    t = BoundTarget.for_spec(spec, 'gv')
    assert (t.threshold, t.horizon, t.prefactor) == (4, 8, 1)

    t = BoundTarget.for_spec(spec, 'gv-expectation')
    assert t.variant is GvVariant.FULL
    assert (t.threshold, t.horizon, t.prefactor) == (5, 8, 1)

    t = BoundTarget.for_spec(spec, 'gv-expectation', 'short')
    assert (t.threshold, t.horizon, t.prefactor) == (4, 7, 1)

    t = BoundTarget.for_spec(spec, 'gv-expectation', GvVariant.SHORT_SCALED)
    assert (t.threshold, t.horizon, t.prefactor) == (4, 7, 5)

    with pytest.raises(ValueError):
        BoundTarget.for_spec(spec, 'hamming')


def test_scientific():
    mantissa, exponent = scientific(math.log(689760))
    assert mantissa == pytest.approx(6.8976)
    assert exponent == 5

    assert scientific(0.0) == (1.0, 0)
    assert scientific(-math.inf) == (0.0, 0)
