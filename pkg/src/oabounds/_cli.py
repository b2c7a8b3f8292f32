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
Command line interface
======================

.. code::

    oabounds exact SPEC --bound rao --method dp
    oabounds rate SPEC --bound gv
    oabounds simulate SPEC --bound rao --samples 2000 --seed 1
    oabounds sweep SPEC --mu-from 0 --mu-to 1 --steps 101
    oabounds levelcurves SPEC --grid 21
    oabounds opcount SPEC

Documents are written to standard output, errors (as JSON) to standard error.
"""

import argparse
from dataclasses import dataclass, field
import sys

import numpy as np

from ._asymptotics import ld_estimate, limit_grid, optimal_tilt, prelimit_grid, rate_sweep
from ._core import ArraySpec, BoundKind, BoundTarget, GvVariant
from ._exact import brute_force_oracle, direct_bound, direct_op_count, dp_bound
from ._log import enable_logger, logger
from ._serialize import dumps_json, write_csv
from ._simulate import IsConfig, is_estimate
from ._validation import validate_document
from .__version__ import __version__

COMMANDS = ('exact', 'rate', 'simulate', 'sweep', 'levelcurves', 'opcount')
METHODS = {'direct': direct_bound, 'dp': dp_bound, 'oracle': brute_force_oracle}
OUTPUTS = ('json', 'csv')

SCHEMA_VARIANT = {'type': str}
SCHEMA_MU = {'type': float, '>=': 0, '<=': 1}

# Options which belong to each command (and only to that command)
COMMAND_OPTIONS = {
    'exact': {'method': {'type': str}, 'variant': SCHEMA_VARIANT},
    'rate': {},
    'simulate': {
        'samples': {'type': int, '>=': 2},
        'seed': {'type': int, '>=': 0},
        'plain': {'type': bool},
        'variant': SCHEMA_VARIANT,
    },
    'sweep': {'mu_from': SCHEMA_MU, 'mu_to': SCHEMA_MU, 'steps': {'type': int, '>=': 2}},
    'levelcurves': {'grid': {'type': int, '>=': 2}, 'variant': SCHEMA_VARIANT},
    'opcount': {},
}

DEFAULT_OUTPUT = {'sweep': 'csv', 'levelcurves': 'csv'}
GRID_HEADER = ('x', 'tau', 'value')


@dataclass(frozen=True)
class RunRequest:
    """
    A validated command line request

    Attrs:
        :command: (str) one of COMMANDS
        :spec_path: (str) path of the spec document
        :bound: (BoundKind) bound kind
        :output: (str) 'json' or 'csv'
        :options: (dict) command specific options
    """

    command: str
    spec_path: str
    bound: BoundKind = BoundKind.RAO_SUM
    output: str = 'json'
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.output not in OUTPUTS:
            raise ValueError(f"invalid output {self.output!r}: expected one of {OUTPUTS}")
        object.__setattr__(self, 'bound', BoundKind(self.bound))
        validate_document(self.options, COMMAND_OPTIONS[self.command])
        if 'method' in self.options and self.options['method'] not in METHODS:
            raise ValueError(f"unknown method {self.options['method']!r}")
        if 'variant' in self.options:
            GvVariant(self.options['variant'])

    @classmethod
    def from_namespace(cls, args):
        """Keep only the options that belong to the selected command"""

        options = {key: getattr(args, key) for key in COMMAND_OPTIONS[args.command]}
        output = args.output or DEFAULT_OUTPUT.get(args.command, 'json')
        return cls(args.command, args.spec_path, args.bound, output, options)


def _count_document(value, bound, method=None):
    mantissa, exponent = value.scientific()
    doc = {'value': str(int(value)), 'mantissa': mantissa, 'exponent10': exponent, 'bound': bound.value}
    if method is not None:
        doc['method'] = method
    return doc


def _emit_document(doc, request, out):
    if request.output == 'json':
        out.write(dumps_json(doc) + '\n')
    else:
        flat = {k: v for k, v in doc.items() if not isinstance(v, (dict, list))}
        write_csv(tuple(flat), [tuple(flat.values())], out)


def _run_exact(spec, request, out):
    method = request.options['method']
    target = BoundTarget.for_spec(spec, request.bound, request.options['variant'])
    value = METHODS[method](spec, target)
    doc = _count_document(value, request.bound, method)
    if target.variant is not None:
        doc['variant'] = target.variant.value
    _emit_document(doc, request, out)


def _run_rate(spec, request, out):
    tilt = optimal_tilt(spec, request.bound)
    if request.output == 'csv':
        rows = zip(range(1, spec.sigma + 1), spec.alphabet_sizes, tilt.thetas)
        write_csv(('block', 'alphabet_size', 'theta'), rows, out)
        return
    doc = {'kind': request.bound.value, **tilt.to_dict(), 'ld_estimate': ld_estimate(spec, request.bound).to_dict()}
    out.write(dumps_json(doc) + '\n')


def _run_simulate(spec, request, out):
    config = IsConfig(
        samples=request.options['samples'],
        seed=request.options['seed'],
        kind=request.bound,
        use_tilt=not request.options['plain'],
        variant=request.options['variant'],
    )
    _emit_document(is_estimate(spec, config).to_dict(), request, out)


def _run_sweep(spec, request, out):
    opts = request.options
    mus = np.linspace(opts['mu_from'], opts['mu_to'], opts['steps'])
    rows = rate_sweep(spec, mus)
    if request.output == 'csv':
        write_csv(('mu', 'rao_rate', 'gv_rate'), rows, out)
    else:
        out.write(dumps_json([{'mu': m, 'rao_rate': r, 'gv_rate': g} for m, r, g in rows]) + '\n')


def _grid_rows(xs, taus, values):
    return [(float(x), float(tau), float(values[i, j])) for i, x in enumerate(xs) for j, tau in enumerate(taus)]


def _run_levelcurves(spec, request, out):
    kind = BoundKind.RAO_SUM if request.bound is BoundKind.RAO_SUM else BoundKind.GV_EXPECTATION
    variant = request.options['variant']
    limit = _grid_rows(*limit_grid(spec, kind, request.options['grid']))
    prelimit = _grid_rows(*prelimit_grid(spec, kind, variant))
    if request.output == 'csv':
        write_csv(GRID_HEADER, limit, out)
        out.write('\n')
        write_csv(GRID_HEADER, prelimit, out)
    else:
        doc = {
            'limit': [dict(zip(GRID_HEADER, row)) for row in limit],
            'prelimit': [dict(zip(GRID_HEADER, row)) for row in prelimit],
        }
        out.write(dumps_json(doc) + '\n')


def _run_opcount(spec, request, out):
    _emit_document(_count_document(direct_op_count(spec), request.bound), request, out)


RUNNERS = {
    'exact': _run_exact,
    'rate': _run_rate,
    'simulate': _run_simulate,
    'sweep': _run_sweep,
    'levelcurves': _run_levelcurves,
    'opcount': _run_opcount,
}


def run(request, out=None):
    """
    Execute a request and write the document

    Args:
        :request: (RunRequest) validated request
        :out: (obj) writable text stream (default: standard output)

    Returns:
        :status: (int) exit status
    """

    out = sys.stdout if out is None else out
    spec = ArraySpec.load(request.spec_path)
    logger.info(f"Running {request.command!r} ({request.bound.value}) on {request.spec_path!r}")
    RUNNERS[request.command](spec, request, out)
    return 0


class UsageError(ValueError):
    """Raised for command lines the argument parser rejects"""


class ArgumentParser(argparse.ArgumentParser):
    """Argument parser reporting usage errors as JSON (exit status 1)"""

    def error(self, message):
        sys.exit(_fail(UsageError(f"{self.prog}: {message}")))


def build_parser():
    parser = ArgumentParser(
        prog='oabounds',
        description='Rao and Gilbert-Varshamov bounds on mixed level orthogonal arrays',
    )
    parser.add_argument('--version', action='version', version=__version__)
    sub = parser.add_subparsers(dest='command', required=True)

    common = ArgumentParser(add_help=False)
    common.add_argument('spec_path', help='JSON spec document')
    common.add_argument('--bound', default='rao', choices=[k.value for k in BoundKind])
    common.add_argument('--output', choices=OUTPUTS, default=None)
    common.add_argument('-v', '--verbose', action='store_true', help='enable logging')

    variant = ArgumentParser(add_help=False)
    variant.add_argument('--variant', default=GvVariant.FULL.value, choices=[v.value for v in GvVariant])

    p = sub.add_parser('exact', parents=[common, variant], help='exact bound value')
    p.add_argument('--method', default='dp', choices=tuple(METHODS))

    sub.add_parser('rate', parents=[common], help='large deviations rate and optimal tilt')

    p = sub.add_parser('simulate', parents=[common, variant], help='importance sampling estimate')
    p.add_argument('--samples', type=int, default=2000)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--plain', action='store_true', help='plain Monte Carlo with fair coins')

    p = sub.add_parser('sweep', parents=[common], help='Rao and GV rates over μ')
    p.add_argument('--mu-from', type=float, default=0.0)
    p.add_argument('--mu-to', type=float, default=1.0)
    p.add_argument('--steps', type=int, default=101)

    p = sub.add_parser('levelcurves', parents=[common, variant], help='limit and prelimit value grids')
    p.add_argument('--grid', type=int, default=21)

    sub.add_parser('opcount', parents=[common], help='operation count of the direct sum')
    return parser


def _fail(err):
    doc = {'error': type(err).__name__, 'message': str(err)}
    sys.stderr.write(dumps_json(doc) + '\n')
    return 1


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.verbose:
        enable_logger()
    try:
        request = RunRequest.from_namespace(args)
        return run(request)
    except (TypeError, ValueError, KeyError, OSError) as err:
        return _fail(err)
