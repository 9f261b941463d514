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
import zlib
from collections import OrderedDict

import numpy as np

from plume_utils.tensor.tensor import Tensor
from plume_utils.util.error import ContractError


class ParameterSet(object):
    """Ordered mapping from parameter name to a Tensor requiring gradients.

    Names are unique and iteration follows insertion order, which the
    model builders keep deterministic.
    """

    def __init__(self, arrays=None, dtype=None):
        self._params = OrderedDict()
        arrays = arrays or {}
        pairs = arrays.items() if hasattr(arrays, 'items') else arrays
        for name, array in pairs:
            self.add(name, array, dtype=dtype)

    def add(self, name, array, dtype=None):
        if name in self._params:
            raise ContractError("Duplicate parameter name {0}".format(name))
        tensor = Tensor(np.array(array, dtype=dtype or np.asarray(array).dtype),
                        requires_grad=True)
        self._params[name] = tensor
        return tensor

    def __getitem__(self, name):
        try:
            return self._params[name]
        except KeyError:
            raise ContractError("Unknown parameter {0}".format(name))

    def get(self, name):
        return self._params.get(name)

    def __contains__(self, name):
        return name in self._params

    def __iter__(self):
        return iter(self._params)

    def __len__(self):
        return len(self._params)

    def names(self):
        return list(self._params)

    def items(self):
        return list(self._params.items())

    def __eq__(self, other):
        if self.names() != other.names():
            return False
        return all(
            self[name].dtype == other[name].dtype and
            np.array_equal(self[name].data, other[name].data)
            for name in self
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def zero_grad(self):
        for tensor in self._params.values():
            tensor.zero_grad()

    def to_arrays(self):
        return OrderedDict((name, t.data.copy()) for name, t in self._params.items())

    def copy(self):
        return ParameterSet(self.to_arrays())

    def astype(self, dtype):
        return ParameterSet(self.to_arrays(), dtype=dtype)

    def count(self):
        """Total number of scalar weights."""
        return int(sum(t.data.size for t in self._params.values()))

    def global_grad_norm(self):
        total = 0.0
        for tensor in self._params.values():
            if tensor.grad is not None:
                total += float(np.sum(tensor.grad.astype(np.float64) ** 2))
        return float(np.sqrt(total))

    def checksum(self):
        """CRC32 over names and little-endian values, in sorted name order."""
        crc = 0
        for name in sorted(self._params):
            data = self._params[name].data
            crc = zlib.crc32(name.encode('utf-8'), crc)
            crc = zlib.crc32(data.astype(data.dtype.newbyteorder('<')).tobytes(), crc)
        return crc & 0xffffffff

    def __repr__(self):
        return "ParameterSet({0} tensors, {1} weights)".format(len(self), self.count())
