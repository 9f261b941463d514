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
"""Stacked recurrent network, single-step update and multi-step rollout.

Within a step the spatiotemporal memories zigzag upward: layer 0 reads
the top-layer memory of the previous step (and, for ST-GasNet, the top
second-order memory of two steps back), layer l > 0 reads the memories
layer l - 1 just produced.
"""
import logging
from collections import namedtuple

import numpy as np

from plume_utils.model.cells import CellInputs
from plume_utils.model.cells import st_lstm_forward
from plume_utils.model.cells import st_lstm_pp_forward
from plume_utils.model.weights import HEAD_BIAS
from plume_utils.model.weights import HEAD_WEIGHT
from plume_utils.model.weights import layer_prefix
from plume_utils.tensor import ops
from plume_utils.tensor.tensor import Tensor
from plume_utils.tensor.tensor import zeros
from plume_utils.util.error import ContractError


_log = logging.getLogger(__name__)


NetworkState = namedtuple(
    'NetworkState',
    ['h', 'c', 'h_lag', 'm_top', 'm2_lag1', 'm2_lag2', 't', 'cfg', 'batch'],
)
NetworkState.__doc__ = """Recurrent state between two steps.

* **h**, **c**: per-layer hidden state and temporal memory of step t - 1
* **h_lag**: per-layer hidden state of step t - 2
* **m_top**: top-layer spatiotemporal memory of step t - 1
* **m2_lag1**, **m2_lag2**: top-layer second-order memory of steps t - 1
  and t - 2
* **t**: the step the state feeds, starting at 1
* **cfg**, **batch**: the ModelConfig and batch size the state was built for
"""

LayerDeltas = namedtuple('LayerDeltas', ['delta_c', 'delta_m', 'delta_m2'])


def initial_state(cfg, batch, dtype=np.float32):
    """All-zero state for the first step."""
    rows, cols = cfg.frame_shape
    shape = (batch, cfg.hidden_channels, rows, cols)

    def layer_zeros():
        return tuple(zeros(shape, dtype) for _ in range(cfg.layers))

    return NetworkState(
        h=layer_zeros(),
        c=layer_zeros(),
        h_lag=layer_zeros(),
        m_top=zeros(shape, dtype),
        m2_lag1=zeros(shape, dtype),
        m2_lag2=zeros(shape, dtype),
        t=1,
        cfg=cfg,
        batch=batch,
    )


def output_head(h_top, params):
    """1x1 convolution to one channel, then sigmoid."""
    logits = ops.conv2d(h_top, params[HEAD_WEIGHT])
    bias = params.get(HEAD_BIAS)
    if bias is not None:
        logits = logits + bias
    return ops.sigmoid(logits)


def step(frame, state, params, cfg):
    """Advance the network by one frame.

    :param frame: Tensor [B, input_channels, N, M]
    :returns: (prediction [B, 1, N, M], next NetworkState, list of LayerDeltas)
    """
    if state.cfg != cfg:
        raise ContractError("State was built for a different model configuration")
    if frame.shape != (state.batch, cfg.input_channels) + tuple(cfg.frame_shape):
        raise ContractError(
            "Frame shape {0} does not match batch {1}, {2} channels, extent {3}"
            .format(frame.shape, state.batch, cfg.input_channels, cfg.frame_shape),
        )
    second_order = cfg.variant == 'st_gasnet'
    cell = st_lstm_pp_forward if second_order else st_lstm_forward

    x = frame
    m = state.m_top
    m2 = state.m2_lag2 if second_order else None
    hs, cs, deltas = [], [], []
    for layer in range(cfg.layers):
        out = cell(
            CellInputs(
                x=x,
                h1=state.h[layer],
                h2=state.h_lag[layer] if second_order else None,
                c_prev=state.c[layer],
                m_in=m,
                m2_in=m2,
            ),
            params,
            prefix=layer_prefix(layer),
        )
        hs.append(out.h)
        cs.append(out.c)
        deltas.append(LayerDeltas(out.delta_c, out.delta_m, out.delta_m2))
        x, m, m2 = out.h, out.m, out.m2

    next_state = state._replace(
        h=tuple(hs),
        c=tuple(cs),
        h_lag=state.h,
        m_top=m,
        m2_lag1=m2 if second_order else state.m2_lag1,
        m2_lag2=state.m2_lag1,
        t=state.t + 1,
    )
    return output_head(x, params), next_state, deltas


def _channel_first(array, batch, dtype):
    array = np.asarray(array, dtype=dtype)
    if array.ndim == 3:
        array = array.transpose(2, 0, 1)
        array = np.broadcast_to(array, (batch,) + array.shape)
    return Tensor(np.ascontiguousarray(array), dtype=dtype)


def _wind_tensor(wind, inputs, batch, dtype):
    if wind is not None:
        direction, speed = wind
        return ops.concat_channels(
            _channel_first(direction, batch, dtype),
            _channel_first(speed, batch, dtype),
        )
    if inputs.shape[2] == 4:
        return Tensor(inputs.data[0, :, 1:4].copy(), dtype=dtype)
    raise ContractError("Wind channels are required for a 4-channel model")


def rollout(inputs, horizon, wind, params, cfg):
    """Predict frames 2..T+k from T observed frames.

    True frames feed the network for the first T steps; afterwards the
    previous probability map is fed back, re-augmented with the constant
    wind channels for a 4-channel model.

    :param inputs: array or Tensor [T, B, C, N, M]; C is 1, or 4 with the
        wind channels already attached
    :param horizon: number of frames k to forecast past the inputs
    :param wind: (D, S) with D [B, 2, N, M] or [N, M, 2] and S
        [B, 1, N, M] or [N, M, 1]; None for a 1-channel model or when the
        inputs carry wind
    :returns: (list of T + k - 1 predictions [B, 1, N, M], list of
        per-step LayerDeltas lists)
    """
    if not isinstance(inputs, Tensor):
        inputs = Tensor(inputs)
    if horizon < 0:
        raise ContractError("Horizon must be non-negative, got {0}".format(horizon))
    if inputs.ndim != 5 or inputs.shape[0] == 0:
        raise ContractError("Inputs must be a non-empty [T, B, C, N, M] sequence")
    n_inputs, batch, channels = inputs.shape[:3]
    dtype = params[HEAD_WEIGHT].dtype
    data = inputs.data.astype(dtype, copy=False)

    wind_tensor = None
    if cfg.input_channels == 4:
        wind_tensor = _wind_tensor(wind, inputs, batch, dtype)
    if channels not in (1, cfg.input_channels):
        raise ContractError(
            "Inputs have {0} channels, the model expects {1}".format(
                channels,
                cfg.input_channels,
            ),
        )

    def augment(plume):
        if wind_tensor is None:
            return plume
        return ops.concat_channels(plume, wind_tensor)

    state = initial_state(cfg, batch, dtype)
    predictions, deltas = [], []
    prediction = None
    for t in range(n_inputs + horizon - 1):
        if t < n_inputs:
            if channels == cfg.input_channels:
                frame = Tensor(data[t], dtype=dtype)
            else:
                frame = augment(Tensor(data[t], dtype=dtype))
        else:
            frame = augment(prediction)
        prediction, state, step_deltas = step(frame, state, params, cfg)
        predictions.append(prediction)
        deltas.append(step_deltas)
    _log.debug("Rolled out %d steps for batch of %d", len(predictions), batch)
    return predictions, deltas
