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
"""Parameter layout and initialisation of the stacked networks."""
import logging
from collections import OrderedDict

import numpy as np

from plume_utils.tensor.parameters import ParameterSet
from plume_utils.util.config import validate_model_config


_log = logging.getLogger(__name__)

HEAD_WEIGHT = 'head.w'
HEAD_BIAS = 'head.b'

TEMPORAL_GATES = ('g', 'i', 'f')
SECOND_ORDER_PREFIXES = ('w_h2', 'w_m2')


def layer_prefix(layer):
    return 'layer{0}.'.format(layer)


def is_second_order(name):
    """True for parameters only the ST-LSTM++ cell reads."""
    local = name.split('.', 1)[-1]
    return local.startswith(SECOND_ORDER_PREFIXES) or local.endswith('_m2')


def layer_shapes(cfg, layer):
    """Ordered (name, shape) pairs of one layer."""
    ch = cfg.hidden_channels
    k = cfg.kernel_size
    c_x = cfg.input_channels if layer == 0 else ch
    second_order = cfg.variant == 'st_gasnet'
    p = layer_prefix(layer)

    shapes = []
    for gate in ('g', 'i', 'f', 'o'):
        shapes.append((p + 'w_x' + gate, (ch, c_x, k, k)))
    for gate in TEMPORAL_GATES:
        shapes.append((p + 'w_x' + gate + '_m', (ch, c_x, k, k)))
    if second_order and not cfg.share_input_kernels:
        for gate in TEMPORAL_GATES:
            shapes.append((p + 'w_x' + gate + '_m2', (ch, c_x, k, k)))
    for gate in ('g', 'i', 'f', 'o'):
        shapes.append((p + 'w_h' + gate, (ch, ch, k, k)))
    if second_order:
        for gate in ('g', 'i', 'f', 'o'):
            shapes.append((p + 'w_h2' + gate, (ch, ch, k, k)))
    for gate in ('g', 'i', 'f', 'o'):
        shapes.append((p + 'w_m' + gate, (ch, ch, k, k)))
    if second_order:
        for gate in ('g', 'i', 'f', 'o'):
            shapes.append((p + 'w_m2' + gate, (ch, ch, k, k)))
    shapes.append((p + 'w_co', (ch, ch, k, k)))
    memories = 3 if second_order else 2
    shapes.append((p + 'w_11', (ch, memories * ch, 1, 1)))
    if cfg.bias:
        biases = ['b_g', 'b_i', 'b_f', 'b_o', 'b_g_m', 'b_i_m', 'b_f_m']
        if second_order:
            biases += ['b_g_m2', 'b_i_m2', 'b_f_m2']
        for name in biases:
            shapes.append((p + name, (1, ch, 1, 1)))
    return shapes


def parameter_shapes(cfg):
    shapes = []
    for layer in range(cfg.layers):
        shapes.extend(layer_shapes(cfg, layer))
    shapes.append((HEAD_WEIGHT, (1, cfg.hidden_channels, 1, 1)))
    if cfg.bias:
        shapes.append((HEAD_BIAS, (1, 1, 1, 1)))
    return shapes


def init_params(cfg, seed, dtype=np.float32):
    """Uniform weights in +-1/sqrt(fan_in), biases zero, drawn in name order."""
    validate_model_config(cfg)
    rng = np.random.RandomState(seed)
    arrays = OrderedDict()
    for name, shape in parameter_shapes(cfg):
        if name.split('.', 1)[-1].startswith('b'):
            arrays[name] = np.zeros(shape, dtype=dtype)
            continue
        fan_in = shape[1] * shape[2] * shape[3]
        bound = 1.0 / np.sqrt(fan_in)
        arrays[name] = rng.uniform(-bound, bound, size=shape).astype(dtype)
    params = ParameterSet(arrays)
    _log.debug("Initialised %s for %s", params, cfg.variant)
    return params


def zero_second_order(params, hidden_channels):
    """Copy of an ST-GasNet parameter set with every second-order path cut.

    The hidden state two steps back, the second-order memory and its
    column block of the 1x1 fusion kernel no longer reach the output.
    Input kernels of the second-order gates are left untouched since
    they only feed the cut memory.
    """
    arrays = params.to_arrays()
    for name, array in arrays.items():
        local = name.split('.', 1)[-1]
        if local.startswith(SECOND_ORDER_PREFIXES):
            array[...] = 0
        elif local == 'w_11' and array.shape[1] == 3 * hidden_channels:
            array[:, 2 * hidden_channels:] = 0
    return ParameterSet(arrays)


def first_order_params(params, hidden_channels):
    """The ST-LSTM parameter set embedded in an ST-GasNet parameter set."""
    arrays = OrderedDict()
    for name, array in params.to_arrays().items():
        if is_second_order(name):
            continue
        if name.split('.', 1)[-1] == 'w_11':
            array = array[:, :2 * hidden_channels].copy()
        arrays[name] = array
    return ParameterSet(arrays)
