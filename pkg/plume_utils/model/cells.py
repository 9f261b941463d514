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
"""Spatiotemporal LSTM cells.

Both cells are pure functions of their inputs and a ParameterSet. Kernels
are stored one per gate (``w_xg``, ``w_hi``, ...) under a layer prefix;
the cells stack the kernels reading the same input and run a single
convolution per input.

Kernel names:

* ``w_x{g,i,f,o}``, ``w_h{g,i,f,o}``: input and hidden kernels of the
  temporal gates and the output gate
* ``w_x{g,i,f}_m``, ``w_m{g,i,f}``: first-order spatiotemporal gates
* ``w_co``, ``w_mo``: output gate reading the new memories
* ``w_11``: 1x1 fusion of the concatenated memories
* ST-LSTM++ only: ``w_h2{g,i,f,o}`` for the hidden state two steps back,
  ``w_m2{g,i,f,o}`` for the second-order memory, and ``w_x{g,i,f}_m2``
  when the input kernels are not shared between the two memory gate sets
* ``b_*``: optional per-channel biases, shape [1, Ch, 1, 1]
"""
from collections import namedtuple

from plume_utils.tensor import ops
from plume_utils.util.error import ContractError
from plume_utils.util.error import ShapeError


CellInputs = namedtuple(
    'CellInputs',
    ['x', 'h1', 'h2', 'c_prev', 'm_in', 'm2_in'],
)
CellInputs.__new__.__defaults__ = (None, None)

CellOutputs = namedtuple(
    'CellOutputs',
    ['h', 'c', 'm', 'm2', 'delta_c', 'delta_m', 'delta_m2'],
)


def _check_shapes(inputs, second_order):
    x = inputs.x
    states = [('h1', inputs.h1), ('c_prev', inputs.c_prev), ('m_in', inputs.m_in)]
    if second_order:
        states += [('h2', inputs.h2), ('m2_in', inputs.m2_in)]
    reference = inputs.h1.shape
    if x.ndim != 4 or len(reference) != 4:
        raise ShapeError("Cell inputs must be [B, C, H, W]")
    if (x.shape[0],) + x.shape[2:] != (reference[0],) + reference[2:]:
        raise ShapeError(
            "Input {0} and hidden state {1} disagree on batch or extent"
            .format(x.shape, reference),
        )
    for name, state in states:
        if state.shape != reference:
            raise ShapeError(
                "State {0} has shape {1}, expected {2}".format(
                    name,
                    state.shape,
                    reference,
                ),
            )


def _stacked_conv(params, prefix, names, inp):
    """Convolve inp with the named kernels at once, one output per kernel."""
    kernels = [params[prefix + name] for name in names]
    stacked = kernels[0] if len(kernels) == 1 else ops.concat(kernels, axis=0)
    out = ops.conv2d(inp, stacked)
    if len(kernels) == 1:
        return [out]
    return ops.split(out, [k.shape[0] for k in kernels], axis=1)


def _memory_conv(params, prefix, names, memories):
    """Sum of per-memory convolutions, as one conv over the stacked memories."""
    kernels = [params[prefix + name] for name in names]
    return ops.conv2d(ops.concat(memories, axis=1), ops.concat(kernels, axis=1))


def _pre_activation(terms, params, prefix, bias_name):
    out = ops.add(*terms)
    bias = params.get(prefix + bias_name)
    if bias is not None:
        out = out + bias
    return out


def _memory_update(forget, memory, input_gate, modulation):
    delta = ops.hadamard(input_gate, modulation)
    return ops.add(ops.hadamard(forget, memory), delta), delta


def st_lstm_forward(inputs, params, prefix=''):
    """One ST-LSTM step; h2 and m2_in are ignored."""
    _check_shapes(inputs, second_order=False)
    p = prefix
    xg, xi, xf, xo, xg_m, xi_m, xf_m = _stacked_conv(
        params, p,
        ['w_xg', 'w_xi', 'w_xf', 'w_xo', 'w_xg_m', 'w_xi_m', 'w_xf_m'],
        inputs.x,
    )
    hg, hi, hf, ho = _stacked_conv(
        params, p, ['w_hg', 'w_hi', 'w_hf', 'w_ho'], inputs.h1,
    )
    mg, mi, mf = _stacked_conv(params, p, ['w_mg', 'w_mi', 'w_mf'], inputs.m_in)

    g = ops.tanh(_pre_activation([xg, hg], params, p, 'b_g'))
    i = ops.sigmoid(_pre_activation([xi, hi], params, p, 'b_i'))
    f = ops.sigmoid(_pre_activation([xf, hf], params, p, 'b_f'))
    c, delta_c = _memory_update(f, inputs.c_prev, i, g)

    g_m = ops.tanh(_pre_activation([xg_m, mg], params, p, 'b_g_m'))
    i_m = ops.sigmoid(_pre_activation([xi_m, mi], params, p, 'b_i_m'))
    f_m = ops.sigmoid(_pre_activation([xf_m, mf], params, p, 'b_f_m'))
    m, delta_m = _memory_update(f_m, inputs.m_in, i_m, g_m)

    o = ops.sigmoid(_pre_activation(
        [xo, ho, _memory_conv(params, p, ['w_co', 'w_mo'], [c, m])],
        params, p, 'b_o',
    ))
    fused = ops.conv2d(ops.concat_channels(c, m), params[p + 'w_11'])
    h = ops.hadamard(o, ops.tanh(fused))
    return CellOutputs(
        h=h, c=c, m=m, m2=None,
        delta_c=delta_c, delta_m=delta_m, delta_m2=None,
    )


def st_lstm_pp_forward(inputs, params, prefix=''):
    """One ST-LSTM++ step with first- and second-order memories."""
    if inputs.h2 is None or inputs.m2_in is None:
        raise ContractError("ST-LSTM++ needs h2 and m2_in")
    _check_shapes(inputs, second_order=True)
    p = prefix
    shared = p + 'w_xg_m2' not in params
    x_names = ['w_xg', 'w_xi', 'w_xf', 'w_xo', 'w_xg_m', 'w_xi_m', 'w_xf_m']
    if not shared:
        x_names += ['w_xg_m2', 'w_xi_m2', 'w_xf_m2']
    x_terms = _stacked_conv(params, p, x_names, inputs.x)
    xg, xi, xf, xo, xg_m, xi_m, xf_m = x_terms[:7]
    xg_m2, xi_m2, xf_m2 = (xg_m, xi_m, xf_m) if shared else x_terms[7:]

    hg, hi, hf, ho = _stacked_conv(
        params, p, ['w_hg', 'w_hi', 'w_hf', 'w_ho'], inputs.h1,
    )
    h2g, h2i, h2f, h2o = _stacked_conv(
        params, p, ['w_h2g', 'w_h2i', 'w_h2f', 'w_h2o'], inputs.h2,
    )
    mg, mi, mf = _stacked_conv(params, p, ['w_mg', 'w_mi', 'w_mf'], inputs.m_in)
    m2g, m2i, m2f = _stacked_conv(
        params, p, ['w_m2g', 'w_m2i', 'w_m2f'], inputs.m2_in,
    )

    g = ops.tanh(_pre_activation([xg, hg, h2g], params, p, 'b_g'))
    i = ops.sigmoid(_pre_activation([xi, hi, h2i], params, p, 'b_i'))
    f = ops.sigmoid(_pre_activation([xf, hf, h2f], params, p, 'b_f'))
    c, delta_c = _memory_update(f, inputs.c_prev, i, g)

    g_m = ops.tanh(_pre_activation([xg_m, mg], params, p, 'b_g_m'))
    i_m = ops.sigmoid(_pre_activation([xi_m, mi], params, p, 'b_i_m'))
    f_m = ops.sigmoid(_pre_activation([xf_m, mf], params, p, 'b_f_m'))
    m, delta_m = _memory_update(f_m, inputs.m_in, i_m, g_m)

    g_m2 = ops.tanh(_pre_activation([xg_m2, m2g], params, p, 'b_g_m2'))
    i_m2 = ops.sigmoid(_pre_activation([xi_m2, m2i], params, p, 'b_i_m2'))
    f_m2 = ops.sigmoid(_pre_activation([xf_m2, m2f], params, p, 'b_f_m2'))
    m2, delta_m2 = _memory_update(f_m2, inputs.m2_in, i_m2, g_m2)

    o = ops.sigmoid(_pre_activation(
        [
            xo, ho, h2o,
            _memory_conv(params, p, ['w_co', 'w_mo', 'w_m2o'], [c, m, m2]),
        ],
        params, p, 'b_o',
    ))
    fused = ops.conv2d(ops.concat_channels(c, m, m2), params[p + 'w_11'])
    h = ops.hadamard(o, ops.tanh(fused))
    return CellOutputs(
        h=h, c=c, m=m, m2=m2,
        delta_c=delta_c, delta_m=delta_m, delta_m2=delta_m2,
    )
