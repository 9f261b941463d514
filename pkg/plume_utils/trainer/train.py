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
"""Training loop."""
import json
import logging
import math
import os
import time
from collections import namedtuple

import humanfriendly
import numpy as np

from plume_utils.dataset.clips import stack_clips
from plume_utils.dataset.store import save_checkpoint
from plume_utils.model.loss import loss_values
from plume_utils.model.loss import total_loss
from plume_utils.model.network import rollout
from plume_utils.trainer.optimizer import Adam
from plume_utils.trainer.optimizer import clip_grad_norm
from plume_utils.util.config import LossConfig
from plume_utils.util.error import ContractError
from plume_utils.util.error import NonFiniteLossError


TRAIN_LOG_FILE = 'train_log.jsonl'
LOSS_NAMES = ('total', 'prediction', 'decouple_m', 'decouple_m2')


class TrainHistory(namedtuple(
    'TrainHistory',
    ['losses', 'grad_norms', 'wall_clock', 'final_checksum'],
)):
    """Record of a training run.

    * **losses** (``list``): per-iteration dict of total and term values
    * **grad_norms** (``list``): per-iteration gradient norm before clipping
    * **wall_clock** (``list``): seconds spent per iteration
    * **final_checksum** (``int``): checksum of the trained parameters

    Equality ignores wall-clock timings.
    """
    __slots__ = ()

    def __eq__(self, other):
        return (
            self.losses == other.losses and
            self.grad_norms == other.grad_norms and
            self.final_checksum == other.final_checksum
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def totals(self):
        return [entry['total'] for entry in self.losses]


def format_terms(iteration, values):
    return "iteration={0} {1}".format(
        iteration,
        " ".join("{0}={1:.6f}".format(name, values[name]) for name in LOSS_NAMES),
    )


class Trainer(object):
    """Gradient descent of the rollout loss over batches of clips.

    :param model_cfg: ModelConfig
    :param train_cfg: TrainConfig
    :param loss_cfg: LossConfig
    :param out_dir: directory for the training log and periodic
        checkpoints, or None to write nothing
    """

    def __init__(self, model_cfg, train_cfg, loss_cfg=None, out_dir=None):
        self.log = logging.getLogger(self.__class__.__name__)
        self.model_cfg = model_cfg
        self.train_cfg = train_cfg
        self.loss_cfg = loss_cfg or LossConfig()
        self.out_dir = out_dir
        if train_cfg.with_wind != (model_cfg.input_channels == 4):
            raise ContractError("with_wind disagrees with the model input channels")

    def batches(self, clips):
        """Endless seeded shuffled batches; every epoch visits each clip once."""
        rng = np.random.RandomState(self.train_cfg.seed)
        size = min(self.train_cfg.batch_size, len(clips))
        while True:
            order = rng.permutation(len(clips))
            for start in range(0, len(order) - size + 1, size):
                yield [clips[i] for i in order[start:start + size]]

    def loss(self, params, batch):
        horizon = batch.targets.shape[0] - batch.inputs.shape[0] + 1
        wind = batch.wind if self.model_cfg.input_channels == 4 else None
        preds, deltas = rollout(batch.inputs, horizon, wind, params, self.model_cfg)
        return total_loss(
            preds,
            batch.targets,
            deltas,
            self.loss_cfg,
            self.model_cfg.variant,
        )

    def _checkpoint(self, params, iteration):
        path = os.path.join(self.out_dir, 'checkpoint_{0:06d}.ckpt'.format(iteration))
        save_checkpoint(path, params, self.model_cfg, {
            'iteration': iteration,
            'seed': self.train_cfg.seed,
        })
        return path

    def train(self, params, clips):
        """Train a copy of params on clips.

        :returns: (trained ParameterSet, TrainHistory)
        :raises NonFiniteLossError: the loss became NaN or infinite
        """
        if not clips:
            raise ContractError("Training needs at least one clip")
        cfg = self.train_cfg
        params = params.copy()
        optimizer = Adam.from_config(cfg)
        dtype = params.items()[0][1].dtype
        losses, grad_norms, wall_clock = [], [], []

        log_file = None
        if self.out_dir is not None:
            if not os.path.isdir(self.out_dir):
                os.makedirs(self.out_dir)
            log_file = open(os.path.join(self.out_dir, TRAIN_LOG_FILE), 'w')
        try:
            batches = self.batches(clips)
            for iteration in range(1, cfg.iterations + 1):
                started = time.time()
                batch = stack_clips(next(batches), dtype=dtype)
                params.zero_grad()
                terms = self.loss(params, batch)
                values = loss_values(terms)
                if not all(math.isfinite(v) for v in values.values()):
                    raise NonFiniteLossError(iteration, values)
                terms.total.backward()
                grad_norms.append(clip_grad_norm(params, cfg.clip_norm))
                optimizer.step(params)
                losses.append(values)
                wall_clock.append(time.time() - started)

                if iteration % cfg.log_every == 0 or iteration == 1:
                    self.log.info(format_terms(iteration, values))
                if log_file is not None:
                    record = dict(values, iteration=iteration, grad_norm=grad_norms[-1])
                    log_file.write(json.dumps(record, sort_keys=True) + '\n')
                if self.out_dir is not None and iteration % cfg.checkpoint_every == 0:
                    self._checkpoint(params, iteration)
        finally:
            if log_file is not None:
                log_file.close()

        history = TrainHistory(losses, grad_norms, wall_clock, params.checksum())
        self.log.info(
            "Trained %d iterations in %s, final total loss %.6f",
            cfg.iterations,
            humanfriendly.format_timespan(sum(wall_clock)),
            losses[-1]['total'],
        )
        return params, history


def train(params, clips, cfg, model_cfg, loss_cfg=None, out_dir=None):
    """Train a copy of params, see Trainer.train."""
    return Trainer(model_cfg, cfg, loss_cfg, out_dir).train(params, clips)
