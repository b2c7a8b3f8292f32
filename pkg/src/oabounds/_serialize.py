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
JSON and CSV emission
"""

import csv
import json
import math


def _finite_or_none(obj):
    """Replace non-finite floats (which JSON cannot represent) with None"""

    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _finite_or_none(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite_or_none(v) for v in obj]
    return obj


def dumps_json(obj):
    """
    Return a single-line JSON document

    Args:
        :obj: (dict) document

    Returns:
        :text: (str) JSON text, non-finite floats rendered as null
    """

    return json.dumps(_finite_or_none(obj), allow_nan=False)


def _csv_field(value):
    if isinstance(value, float):
        return str(value) if math.isfinite(value) else ''
    return value


def write_csv(header, rows, fp):
    """
    Write comma separated rows

    Args:
        :header: (tuple) column names
        :rows: (iterable) row tuples
        :fp: (obj) writable text file
    """

    writer = csv.writer(fp, lineterminator='\n')
    writer.writerow(header)
    writer.writerows([_csv_field(v) for v in row] for row in rows)
