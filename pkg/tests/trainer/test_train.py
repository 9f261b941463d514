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
import math
import os

import mock
import numpy as np
import pytest

from plume_utils.dataset.store import load_checkpoint
from plume_utils.model.loss import LossTerms
from plume_utils.model.weights import init_params
from plume_utils.tensor.tensor import Tensor
from plume_utils.trainer.train import format_terms
from plume_utils.trainer.train import train
from plume_utils.trainer.train import TRAIN_LOG_FILE
from plume_utils.trainer.train import Trainer
from plume_utils.util.error import ContractError
from plume_utils.util.error import NonFiniteLossError


class TestTrain(object):

    def test_history(self, tiny_cfg, train_cfg, clips):
        trained, history = train(init_params(tiny_cfg, 0), clips, train_cfg, tiny_cfg)
        assert len(history.losses) == 3
        assert len(history.grad_norms) == 3
        assert len(history.wall_clock) == 3
        assert set(history.losses[0]) == {'total', 'prediction', 'decouple_m', 'decouple_m2'}
        assert history.final_checksum == trained.checksum()
        assert all(math.isfinite(v) for v in history.totals())

    def test_zero_learning_rate(self, tiny_cfg, train_cfg, clips):
        params = init_params(tiny_cfg, 0)
        trained, history = train(params, clips, train_cfg._replace(learning_rate=0.0), tiny_cfg)
        assert trained == params
        assert len(history.losses) == 3

    def test_input_untouched(self, tiny_cfg, train_cfg, clips):
        params = init_params(tiny_cfg, 0)
        frames = [c.inputs.copy() for c in clips]
        trained, _ = train(params, clips, train_cfg, tiny_cfg)
        assert params == init_params(tiny_cfg, 0)
        assert trained != params
        assert all(np.array_equal(f, c.inputs) for f, c in zip(frames, clips))

    def test_deterministic(self, tiny_cfg, train_cfg, clips):
        first = train(init_params(tiny_cfg, 0), clips, train_cfg, tiny_cfg)
        second = train(init_params(tiny_cfg, 0), clips, train_cfg, tiny_cfg)
        assert first[0] == second[0]
        assert first[1] == second[1]

    def test_loss_decreases_on_fixed_batch(self, tiny_cfg, train_cfg, clips):
        cfg = train_cfg._replace(batch_size=1, iterations=50)
        _, history = train(init_params(tiny_cfg, 0), clips[:1], cfg, tiny_cfg)
        assert history.losses[49]['total'] < history.losses[0]['total']

    def test_pred_rnn_has_no_second_order_term(self, tiny_cfg, train_cfg, clips):
        cfg = tiny_cfg._replace(variant='pred_rnn')
        _, history = train(init_params(cfg, 0), clips, train_cfg, cfg)
        assert all(entry['decouple_m2'] == 0.0 for entry in history.losses)

    def test_with_wind(self, tiny_cfg, train_cfg, clips):
        cfg = tiny_cfg._replace(input_channels=4)
        _, history = train(
            init_params(cfg, 0),
            clips,
            train_cfg._replace(with_wind=True, iterations=2),
            cfg,
        )
        assert all(math.isfinite(v) for v in history.totals())

    def test_wind_mismatch(self, tiny_cfg, train_cfg):
        with pytest.raises(ContractError):
            Trainer(tiny_cfg._replace(input_channels=4), train_cfg)

    def test_no_clips(self, tiny_cfg, train_cfg):
        with pytest.raises(ContractError):
            train(init_params(tiny_cfg, 0), [], train_cfg, tiny_cfg)

    def test_non_finite_loss(self, tiny_cfg, train_cfg, clips):
        nan = LossTerms(Tensor(np.nan), Tensor(np.nan), Tensor(0.0), None)
        with mock.patch.object(Trainer, 'loss', return_value=nan):
            with pytest.raises(NonFiniteLossError) as excinfo:
                train(init_params(tiny_cfg, 0), clips, train_cfg, tiny_cfg)
        assert excinfo.value.iteration == 1
        assert math.isnan(excinfo.value.terms['total'])

    def test_log_and_checkpoints(self, tiny_cfg, train_cfg, clips, tmpdir):
        out_dir = str(tmpdir.join('train'))
        trained, history = train(init_params(tiny_cfg, 0), clips, train_cfg, tiny_cfg, out_dir=out_dir)
        with open(os.path.join(out_dir, TRAIN_LOG_FILE)) as infile:
            records = [json.loads(line) for line in infile]
        assert [r['iteration'] for r in records] == [1, 2, 3]
        assert records[2]['total'] == history.losses[2]['total']
        assert sorted(os.listdir(out_dir)) == ['checkpoint_000002.ckpt', TRAIN_LOG_FILE]
        params, cfg, metadata = load_checkpoint(os.path.join(out_dir, 'checkpoint_000002.ckpt'))
        assert cfg == tiny_cfg
        assert metadata['iteration'] == 2


class TestTrainer(object):

    def test_epoch_visits_every_clip(self, tiny_cfg, train_cfg, clips):
        batches = Trainer(tiny_cfg, train_cfg).batches(clips)
        seen = [(c.sequence_id, c.t0) for _ in range(3) for c in next(batches)]
        assert sorted(seen) == sorted((c.sequence_id, c.t0) for c in clips)

    def test_batch_size_capped(self, tiny_cfg, train_cfg, clips):
        batches = Trainer(tiny_cfg, train_cfg._replace(batch_size=50)).batches(clips[:2])
        assert len(next(batches)) == 2

    def test_format_terms(self):
        line = format_terms(4, {'total': 1.5, 'prediction': 1.0, 'decouple_m': 0.5, 'decouple_m2': 0.0})
        assert line == (
            'iteration=4 total=1.500000 prediction=1.000000 '
            'decouple_m=0.500000 decouple_m2=0.000000'
        )
