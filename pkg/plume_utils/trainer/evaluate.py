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
"""First-clip evaluation of predictors on held-out sequences."""
import logging

import numpy as np

from plume_utils.dataset.clips import make_clips
from plume_utils.dataset.clips import stack_clips
from plume_utils.metrics.report import average_reports
from plume_utils.metrics.report import sequence_report
from plume_utils.metrics.scores import binarize_prediction
from plume_utils.metrics.scores import DEFAULT_THRESHOLD
from plume_utils.metrics.scores import DEFAULT_TN_DIVISOR
from plume_utils.model.network import rollout
from plume_utils.model.weights import HEAD_WEIGHT
from plume_utils.tensor.tensor import no_grad
from plume_utils.util.error import ContractError
from plume_utils.util.error import MissingInputError


_log = logging.getLogger(__name__)


def first_clip(sequence, input_frames, horizon):
    return make_clips(sequence, input_frames, horizon, 1)[0]


class Predictor(object):
    """Produces k probability frames [k, N, M] for the first clip of a
    sequence."""

    label = 'predictor'

    def predict(self, sequence, input_frames, horizon):
        raise NotImplementedError("Implemented in subclass")


class ModelPredictor(Predictor):
    """Rolls a trained network out from the first T frames.

    :param params: ParameterSet of the network
    :param model_cfg: ModelConfig the parameters were built for
    """

    def __init__(self, params, model_cfg, label=None):
        self.params = params
        self.model_cfg = model_cfg
        self.label = label or model_cfg.variant

    def predict(self, sequence, input_frames, horizon):
        dtype = self.params[HEAD_WEIGHT].dtype
        batch = stack_clips([first_clip(sequence, input_frames, horizon)], dtype=dtype)
        wind = batch.wind if self.model_cfg.input_channels == 4 else None
        with no_grad():
            preds, _ = rollout(batch.inputs, horizon, wind, self.params, self.model_cfg)
        forecast = preds[input_frames - 1:]
        rows, cols = sequence.frames.shape[1:]
        if not forecast:
            return np.zeros((0, rows, cols), dtype=np.float32)
        return np.stack([p.data[0, 0] for p in forecast]).astype(np.float32)


class StoredPredictor(Predictor):
    """Serves predictions previously written by the predict command.

    :param predictions: mapping of sequence id to Prediction
    """

    def __init__(self, predictions, label='stored'):
        self.predictions = predictions
        self.label = label

    def predict(self, sequence, input_frames, horizon):
        prediction = self.predictions.get(sequence.sequence_id)
        if prediction is None:
            raise MissingInputError(
                "No stored prediction for sequence {0}".format(sequence.sequence_id),
            )
        frames = np.asarray(prediction.frames, dtype=np.float32)
        if frames.shape[0] < horizon:
            raise MissingInputError(
                "Stored prediction for {0} has {1} frames, {2} needed".format(
                    sequence.sequence_id,
                    frames.shape[0],
                    horizon,
                ),
            )
        return frames[:horizon]


class PersistencePredictor(Predictor):
    """Repeats the last observed frame."""

    label = 'persistence'

    def predict(self, sequence, input_frames, horizon):
        last = first_clip(sequence, input_frames, horizon).inputs[-1]
        return np.repeat(last[np.newaxis], horizon, axis=0).astype(np.float32)


def evaluate(
    predictor,
    sequences,
    input_frames,
    horizon,
    threshold=DEFAULT_THRESHOLD,
    tn_divisor=DEFAULT_TN_DIVISOR,
    label=None,
):
    """Score the first clip (t0 = 0) of every sequence.

    Each report column is one forecast frame, t = T + 1 .. T + k, and
    the per-sequence scores are averaged with equal weight. Sequences
    shorter than T + k are skipped and listed in the metadata.

    :returns: MetricReport
    """
    label = label or predictor.label
    reports, skipped = [], []
    timesteps = list(range(input_frames + 1, input_frames + horizon + 1))
    for sequence in sequences:
        if sequence.num_frames < input_frames + horizon:
            _log.warning(
                "Skipping sequence %s: %d frames, %d needed",
                sequence.sequence_id,
                sequence.num_frames,
                input_frames + horizon,
            )
            skipped.append(sequence.sequence_id)
            continue
        probabilities = predictor.predict(sequence, input_frames, horizon)
        truth = sequence.frames[input_frames:input_frames + horizon]
        reports.append(sequence_report(
            sequence.sequence_id,
            timesteps,
            [binarize_prediction(p, threshold) for p in probabilities],
            truth,
            tn_divisor,
            label=label,
        ))
    metadata = {
        'threshold': threshold,
        'tn_divisor': tn_divisor,
        'input_frames': input_frames,
        'horizon': horizon,
        'skipped': skipped,
    }
    if not reports:
        raise ContractError(
            "No sequence has the {0} frames evaluation needs".format(input_frames + horizon),
        )
    report = average_reports(reports, label, metadata)
    _log.info(
        "Evaluated %s on %d sequences: mean precision %.4f, mean modified accuracy %.4f",
        label,
        len(reports),
        report.mean_precision,
        report.mean_accuracy,
    )
    return report
