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
"""Training objective: prediction error plus memory decoupling."""
from collections import namedtuple

import numpy as np

from plume_utils.tensor import ops
from plume_utils.tensor.tensor import Tensor
from plume_utils.util.config import LossConfig
from plume_utils.util.error import ContractError


LossTerms = namedtuple(
    'LossTerms',
    ['total', 'prediction', 'decouple_m', 'decouple_m2'],
)
LossTerms.__doc__ = """Scalar loss Tensors; decouple_m2 is None for pred_rnn."""


def loss_values(terms):
    """Plain floats of a LossTerms, for logs and history."""
    return {
        name: 0.0 if value is None else float(value.item())
        for name, value in terms._asdict().items()
    }


class DeltaBundle(object):
    """Memory increments of every (step, layer), as produced by a rollout.

    :param steps: list over steps of lists over layers of LayerDeltas
    """

    def __init__(self, steps):
        self.steps = [list(layers) for layers in steps]

    def __iter__(self):
        for layers in self.steps:
            for deltas in layers:
                yield deltas

    def __len__(self):
        return sum(len(layers) for layers in self.steps)

    @property
    def has_second_order(self):
        return all(d.delta_m2 is not None for d in self)


def _as_tensor(target, dtype):
    if isinstance(target, Tensor):
        return Tensor(target.data, dtype=dtype)
    return Tensor(np.asarray(target), dtype=dtype)


def prediction_term(preds, targets, pixel_normalized=True):
    """Mean over steps of the squared error of each predicted frame.

    The squared error is averaged over the batch and, when
    pixel_normalized, over the pixels of a frame.
    """
    if len(preds) == 0 or len(preds) != len(targets):
        raise ContractError(
            "{0} predictions for {1} targets".format(len(preds), len(targets)),
        )
    total = None
    for pred, target in zip(preds, targets):
        target = _as_tensor(target, pred.dtype)
        if target.shape != pred.shape:
            raise ContractError(
                "Prediction {0} and target {1} differ in shape".format(
                    pred.shape,
                    target.shape,
                ),
            )
        error = ops.square(pred - target).sum()
        total = error if total is None else total + error
    batch = preds[0].shape[0]
    scale = len(preds) * batch
    if pixel_normalized:
        scale *= preds[0].shape[2] * preds[0].shape[3]
    return total / float(scale)


def channel_cosines(a, b, epsilon=1e-8):
    """Sum over channels of the cosine between channel slices of a and b.

    Each slice is flattened over batch and space.
    """
    axes = (0, 2, 3)
    dot = ops.hadamard(a, b).sum(axis=axes)
    norm_a = ops.sqrt(ops.square(a).sum(axis=axes))
    norm_b = ops.sqrt(ops.square(b).sum(axis=axes))
    return (dot / (norm_a * norm_b + epsilon)).sum()


def _sum(terms):
    total = None
    for term in terms:
        total = term if total is None else total + term
    return total


def decoupling_breakdown(deltas, epsilon=1e-8):
    """(C-M term, C-M' term) of a DeltaBundle; the second is None without M'."""
    term_m = _sum(channel_cosines(d.delta_c, d.delta_m, epsilon) for d in deltas)
    term_m2 = None
    if deltas.has_second_order:
        term_m2 = _sum(
            channel_cosines(d.delta_c, d.delta_m2, epsilon) for d in deltas
        )
    return term_m, term_m2


def decoupling_terms(deltas, epsilon=1e-8):
    """Summed cosine similarity of the memory increments."""
    term_m, term_m2 = decoupling_breakdown(deltas, epsilon)
    return term_m if term_m2 is None else term_m + term_m2


def total_loss(preds, targets, deltas, cfg=None, variant='st_gasnet'):
    """Weighted sum of the prediction and decoupling terms.

    :param deltas: DeltaBundle or the per-step list returned by rollout
    :param cfg: LossConfig, defaults when None
    :param variant: pred_rnn drops the second-order decoupling term
    :returns: LossTerms
    """
    cfg = cfg or LossConfig()
    if not isinstance(deltas, DeltaBundle):
        deltas = DeltaBundle(deltas)
    prediction = prediction_term(preds, targets, cfg.pixel_normalized)
    term_m, term_m2 = decoupling_breakdown(deltas, cfg.epsilon)
    if variant == 'pred_rnn':
        term_m2 = None
    total = prediction * cfg.prediction_weight
    if term_m is not None:
        total = total + term_m * cfg.decouple_m_weight
    if term_m2 is not None:
        total = total + term_m2 * cfg.decouple_m2_weight
    return LossTerms(
        total=total,
        prediction=prediction,
        decouple_m=term_m,
        decouple_m2=term_m2,
    )
