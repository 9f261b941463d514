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
import os

from plume_utils.dataset.images import export_frames
from plume_utils.dataset.store import load_checkpoint
from plume_utils.dataset.store import load_prediction
from plume_utils.dataset.store import Prediction
from plume_utils.dataset.store import prediction_path
from plume_utils.dataset.store import save_prediction
from plume_utils.plume_pipeline import status_code
from plume_utils.plume_pipeline.commands.command import PipelineCmd
from plume_utils.plume_pipeline.commands.command import PREDICTIONS_DIR
from plume_utils.plume_pipeline.status_code import prepare_terminate_message
from plume_utils.trainer.evaluate import ModelPredictor
from plume_utils.util.error import ContractError


def check_frame_shape(model_cfg, sequence):
    if tuple(model_cfg.frame_shape) != sequence.frames.shape[1:]:
        raise ContractError(
            "Checkpoint expects {0} frames, sequence {1} has {2}".format(
                tuple(model_cfg.frame_shape),
                sequence.sequence_id,
                sequence.frames.shape[1:],
            ),
        )


class PredictCmd(PipelineCmd):

    def build_subparser(self, subparsers):
        subparser = subparsers.add_parser(
            'predict',
            description='Forecast plume frames with a trained checkpoint.',
            help='Feed the first T frames of every held-out sequence to the '
            'network and write the k predicted probability frames as one '
            'prediction file per sequence.',
        )
        subparser.add_argument(
            '--checkpoint',
            help='Model checkpoint. Default: <out>/train/model.ckpt',
        )
        subparser.add_argument(
            '--images',
            action='store_true',
            help='Also write a PGM image per predicted frame. Default: %(default)s',
        )
        return subparser

    def run_command(self):
        clip_cfg = self.run_config.clip_config()
        checkpoint = self.args.checkpoint or self.default_checkpoint
        params, model_cfg, metadata = load_checkpoint(checkpoint)
        if model_cfg.variant != self.run_config.model_config().variant:
            self.log.warning(
                "Checkpoint holds a %s model, configured variant ignored",
                model_cfg.variant,
            )
        predictor = ModelPredictor(params, model_cfg)
        out_dir = self.out_path(PREDICTIONS_DIR)
        needed = clip_cfg.input_frames + clip_cfg.horizon

        written, skipped = [], []
        for sequence in self.held_out(self.load_corpus(), metadata):
            if sequence.num_frames < needed:
                self.log.warning(
                    "Skipping sequence %s: %d frames, %d needed",
                    sequence.sequence_id,
                    sequence.num_frames,
                    needed,
                )
                skipped.append(sequence.sequence_id)
                continue
            check_frame_shape(model_cfg, sequence)
            frames = predictor.predict(sequence, clip_cfg.input_frames, clip_cfg.horizon)
            path = prediction_path(out_dir, sequence.sequence_id)
            save_prediction(path, Prediction(sequence.sequence_id, frames, {
                'checkpoint_checksum': metadata['checksum'],
                'variant': model_cfg.variant,
                'input_frames': clip_cfg.input_frames,
                'horizon': clip_cfg.horizon,
            }))
            load_prediction(path)
            if self.args.images:
                export_frames(
                    os.path.join(out_dir, 'images', sequence.sequence_id),
                    frames,
                    sequence.mask,
                    prefix='pred',
                )
            written.append(path)
        if not written:
            raise ContractError("No sequence has the {0} frames prediction needs".format(needed))

        msg = prepare_terminate_message(
            "Wrote {0} predictions of {1} frames to {2}".format(
                len(written),
                clip_cfg.horizon,
                out_dir,
            ),
            raw={'predictions': written, 'skipped': skipped},
        )
        if self.args.verbose:
            msg['verbose'] = "\n".join(written)
        return status_code.OK, msg
