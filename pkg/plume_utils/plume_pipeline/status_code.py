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
import sys

from plume_utils.util import print_json
from plume_utils.util.error import ConfigurationError
from plume_utils.util.error import ContractError
from plume_utils.util.error import GenerationError
from plume_utils.util.error import MissingInputError
from plume_utils.util.error import NonFiniteLossError
from plume_utils.util.error import ShapeError
from plume_utils.util.error import StoreError

OK = 0
UNEXPECTED = 1
CONFIGURATION = 2
MISSING_INPUT = 3
CORRUPT_INPUT = 4
GENERATION = 5
NON_FINITE = 6
CONTRACT = 7

STATUS_STRING = {
    OK: 'OK',
    UNEXPECTED: 'UNEXPECTED',
    CONFIGURATION: 'CONFIGURATION',
    MISSING_INPUT: 'MISSING_INPUT',
    CORRUPT_INPUT: 'CORRUPT_INPUT',
    GENERATION: 'GENERATION',
    NON_FINITE: 'NON_FINITE',
    CONTRACT: 'CONTRACT',
}

# First match wins, so subclasses come before their bases.
EXCEPTION_CODES = [
    (ConfigurationError, CONFIGURATION),
    (MissingInputError, MISSING_INPUT),
    (StoreError, CORRUPT_INPUT),
    (GenerationError, GENERATION),
    (NonFiniteLossError, NON_FINITE),
    (ContractError, CONTRACT),
    (ShapeError, CONTRACT),
]


def code_for_exception(exc):
    for exc_class, code in EXCEPTION_CODES:
        if isinstance(exc, exc_class):
            return code
    return UNEXPECTED


def prepare_terminate_message(string, raw=None):
    return {
        'message': string,
        'raw': string if raw is None else raw,
    }


def terminate(err_code, msg, json):
    if json:
        output = {
            'status': STATUS_STRING[err_code],
            'data': msg['raw'],
        }
        print_json(output)
    else:
        print('{status}: {msg}'.format(
            status=STATUS_STRING[err_code],
            msg=msg['message'],
        ))
        if 'verbose' in msg:
            print(msg['verbose'])
    sys.exit(err_code)
