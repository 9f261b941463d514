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
import zlib

import numpy as np


# Every payload on disk is little-endian, whatever the host byte order.
LITTLE_ENDIAN_DTYPES = {
    'float32': '<f4',
    'float64': '<f8',
    'uint8': '|u1',
}


def load_json(input_data):
    if isinstance(input_data, bytes):
        input_data = input_data.decode('utf-8')
    return json.loads(input_data)


def dump_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(',', ':')).encode('utf-8')


def crc32(payload):
    return zlib.crc32(payload) & 0xffffffff


def array_to_bytes(array):
    """Serialize an array to little-endian bytes.

    :returns: (dtype name, shape, payload bytes)
    """
    array = np.asarray(array)
    dtype_name = array.dtype.name
    if dtype_name not in LITTLE_ENDIAN_DTYPES:
        raise ValueError("Unsupported dtype {0}".format(dtype_name))
    payload = np.ascontiguousarray(
        array, dtype=LITTLE_ENDIAN_DTYPES[dtype_name],
    ).tobytes()
    return dtype_name, list(array.shape), payload


def bytes_to_array(payload, dtype_name, shape):
    array = np.frombuffer(payload, dtype=LITTLE_ENDIAN_DTYPES[dtype_name])
    return array.astype(dtype_name).reshape(shape)
