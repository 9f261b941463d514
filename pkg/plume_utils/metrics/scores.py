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
"""Plume occupancy scores: precision and modified accuracy.

Modified accuracy down-weights true negatives by a divisor (4 by
default) since a plume covers at most a small part of the domain:

    (TP + TN / d) / (TP + FP + FN + TN / d)
"""
from collections import namedtuple

import numpy as np

from plume_utils.util.error import ContractError


DEFAULT_THRESHOLD = 0.5
DEFAULT_TN_DIVISOR = 4.0


class ConfusionCounts(namedtuple('ConfusionCounts', ['tp', 'fp', 'tn', 'fn'])):
    """Cell counts of a binary prediction against the truth."""
    __slots__ = ()

    def __add__(self, other):
        return ConfusionCounts(*(a + b for a, b in zip(self, other)))

    @property
    def total(self):
        return self.tp + self.fp + self.tn + self.fn


def binarize_prediction(prob_frame, threshold=DEFAULT_THRESHOLD):
    """1 where the probability reaches threshold, else 0."""
    if not 0.0 < threshold < 1.0:
        raise ContractError("Threshold must lie in (0, 1), got {0}".format(threshold))
    return (np.asarray(prob_frame) >= threshold).astype(np.uint8)


def _as_binary(frame, name):
    frame = np.asarray(frame)
    if not np.isin(frame, (0, 1)).all():
        raise ContractError("{0} frame is not binary".format(name))
    return frame.astype(bool)


def confusion(pred_bin, truth_bin):
    pred = _as_binary(pred_bin, 'Predicted')
    truth = _as_binary(truth_bin, 'True')
    if pred.shape != truth.shape:
        raise ContractError(
            "Prediction {0} and truth {1} differ in shape".format(pred.shape, truth.shape),
        )
    return ConfusionCounts(
        tp=int(np.count_nonzero(pred & truth)),
        fp=int(np.count_nonzero(pred & ~truth)),
        tn=int(np.count_nonzero(~pred & ~truth)),
        fn=int(np.count_nonzero(~pred & truth)),
    )


def precision(counts):
    """TP / (TP + FP); with nothing predicted, 1 if nothing was missed else 0."""
    predicted = counts.tp + counts.fp
    if predicted == 0:
        return 1.0 if counts.fn == 0 else 0.0
    return counts.tp / float(predicted)


def modified_accuracy(counts, tn_divisor=DEFAULT_TN_DIVISOR):
    """Accuracy with true negatives divided by tn_divisor; 1 on empty counts."""
    tn = counts.tn / float(tn_divisor)
    denominator = counts.tp + counts.fp + counts.fn + tn
    if denominator == 0:
        return 1.0
    return (counts.tp + tn) / denominator
