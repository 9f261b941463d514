# -*- coding: utf-8 -*-
# Copyright 2023 The plume-utils Authors
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
import json
import sys
from argparse import ArgumentTypeError


def _argument(string, convert, accept, requirement):
    error_msg = '{0} required, {1} given.'.format(requirement, string)
    try:
        value = convert(string)
    except ValueError:
        raise ArgumentTypeError(error_msg)
    if not accept(value):
        raise ArgumentTypeError(error_msg)
    return value


def positive_int(string):
    """Convert string to an integer >= 0."""
    return _argument(string, int, lambda v: v >= 0, 'Positive integer')


def positive_nonzero_int(string):
    """Convert string to an integer > 0."""
    return _argument(string, int, lambda v: v > 0, 'Positive non-zero integer')


def probability(string):
    """Convert string to a float strictly between 0 and 1."""
    return _argument(string, float, lambda v: 0.0 < v < 1.0, 'Float in (0, 1)')


def str_to_bool(string):
    """Convert yes/no style strings to bool."""
    lowered = string.strip().lower()
    if lowered in ('1', 'true', 'yes', 'y', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'n', 'off'):
        return False
    raise ArgumentTypeError(
        'Boolean required, {string} given.'.format(string=string),
    )


def format_to_json(data):
    """Converts `data` into sorted json, pretty printed on a terminal."""
    if sys.stdout.isatty():
        return json.dumps(data, indent=4, separators=(',', ': '), sort_keys=True)
    return json.dumps(data, sort_keys=True)


def print_json(data):
    """Converts `data` into json and prints it to stdout."""
    print(format_to_json(data))
