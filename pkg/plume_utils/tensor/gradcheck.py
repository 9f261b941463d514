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
"""Central finite-difference check of analytic gradients."""
import logging
from collections import OrderedDict

import numpy as np

from plume_utils.tensor.tensor import no_grad


_log = logging.getLogger(__name__)


def relative_error(analytic, numeric):
    """||a - n|| / (||a|| + ||n||), zero when both vanish."""
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    denominator = np.linalg.norm(analytic) + np.linalg.norm(numeric)
    if denominator == 0:
        return 0.0
    return float(np.linalg.norm(analytic - numeric) / denominator)


def numerical_gradient(fn, params, name, positions, h=1e-5):
    """Central differences of fn w.r.t. the flat positions of one parameter."""
    data = params[name].data
    flat = data.reshape(-1)
    numeric = np.empty(len(positions), dtype=np.float64)
    with no_grad():
        for i, position in enumerate(positions):
            original = flat[position]
            flat[position] = original + h
            plus = fn(params).item()
            flat[position] = original - h
            minus = fn(params).item()
            flat[position] = original
            numeric[i] = (plus - minus) / (2.0 * h)
    return numeric


def gradcheck(fn, params, h=1e-5, max_entries=None, seed=0):
    """Compare analytic and numerical gradients of fn for every parameter.

    :param fn: callable mapping the ParameterSet to a scalar Tensor
    :param params: ParameterSet, float64 for meaningful results
    :param h: finite-difference step
    :param max_entries: check at most this many random entries per parameter
    :param seed: seed for the entry sub-sampling
    :returns: OrderedDict of parameter name to relative error
    """
    params.zero_grad()
    fn(params).backward()
    rng = np.random.RandomState(seed)
    errors = OrderedDict()
    for name, tensor in params.items():
        size = tensor.data.size
        if max_entries is not None and size > max_entries:
            positions = np.sort(rng.choice(size, max_entries, replace=False))
        else:
            positions = np.arange(size)
        analytic = tensor.grad.reshape(-1)[positions]
        numeric = numerical_gradient(fn, params, name, positions, h)
        errors[name] = relative_error(analytic, numeric)
        _log.debug("gradcheck %s: %d entries, relative error %.3e",
                   name, len(positions), errors[name])
    return errors
