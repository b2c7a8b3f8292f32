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
Validation helpers for user supplied documents
"""

from schemadict import schemadict, STANDARD_VALIDATORS

SchemadictValidators = STANDARD_VALIDATORS

SCHEMA_POS_INT = {'type': int, '>': 0}
SCHEMA_ALPHABET = {'type': int, '>=': 2}
SCHEMA_LIST = {'type': list}


def check_type(var_name, var, exp_type):
    if not isinstance(var, exp_type):
        raise TypeError(
            f"invalid type for {var_name!r}: expected {exp_type}, got {type(var)}"
        )


def validate_against_schema(key, value, schema):
    """
    Validate a single value with a 'schemadict' schema

    Args:
        :key: (str) name used in error messages
        :value: (obj) value to check
        :schema: (dict) schema for the value (e.g. {'type': int, '>': 0})

    Raises:
        :TypeError: if the value has the wrong type
        :ValueError: if the value violates the schema
    """

    schemadict({key: schema}, validators=SchemadictValidators).validate({key: value})


def validate_document(document, schema):
    """
    Validate a dictionary document (unknown keys are rejected)

    Args:
        :document: (dict) document to check
        :schema: (dict) 'schemadict' schema for the document
    """

    check_type('document', document, dict)
    for key in document:
        if key not in schema:
            raise KeyError(f"key {key!r} is not in specification")
    for key in schema:
        if key not in document:
            raise KeyError(f"key {key!r} is required")
    schemadict(schema, validators=SchemadictValidators).validate(document)
