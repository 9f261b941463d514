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

from plume_utils.dataset.store import load_checkpoint
from plume_utils.dataset.store import load_predictions
from plume_utils.metrics.report import comparison_table
from plume_utils.metrics.report import write_csv
from plume_utils.metrics.report import write_json
from plume_utils.plume_pipeline import status_code
from plume_utils.plume_pipeline.commands.command import EVAL_DIR
from plume_utils.plume_pipeline.commands.command import PipelineCmd
from plume_utils.plume_pipeline.commands.predict import check_frame_shape
from plume_utils.plume_pipeline.status_code import prepare_terminate_message
from plume_utils.trainer.evaluate import evaluate
from plume_utils.trainer.evaluate import ModelPredictor
from plume_utils.trainer.evaluate import PersistencePredictor
from plume_utils.trainer.evaluate import StoredPredictor
from plume_utils.util import probability


METRICS_CSV = 'metrics.csv'
METRICS_JSON = 'metrics.json'


class EvaluateCmd(PipelineCmd):

    def build_subparser(self, subparsers):
        subparser = subparsers.add_parser(
            'evaluate',
            description='Score forecasts of the held-out sequences.',
            help='Score the first clip of every held-out sequence with '
            'per-timestep precision and modified accuracy, averaged over '
            'sequences. Forecasts come from a checkpoint, from stored '
            'predictions or from the persistence reference.',
        )
        source = subparser.add_mutually_exclusive_group()
        source.add_argument(
            '--checkpoint',
            help='Roll out this model checkpoint. Default: <out>/train/model.ckpt',
        )
        source.add_argument(
            '--predictions',
            help='Score the prediction files of this directory.',
        )
        source.add_argument(
            '--persistence',
            action='store_true',
            help='Score the model repeating the last observed frame.',
        )
        subparser.add_argument(
            '--threshold',
            type=probability,
            help='Probability at which a predicted cell counts as plume.',
        )
        subparser.add_argument(
            '--label',
            help='Name of the evaluated model in the report.',
        )
        return subparser

    def config_overrides(self, args):
        if args.threshold is not None:
            return ['eval.threshold={0}'.format(args.threshold)]
        return []

    def predictor(self, sequences):
        """(predictor, sequences to score)"""
        if self.args.persistence:
            return PersistencePredictor(), self.held_out(sequences)
        if self.args.predictions:
            predictions = load_predictions(self.args.predictions)
            selected = [s for s in sequences if s.sequence_id in predictions]
            return StoredPredictor(predictions), selected or self.held_out(sequences)
        checkpoint = self.args.checkpoint or self.default_checkpoint
        params, model_cfg, metadata = load_checkpoint(checkpoint)
        selected = self.held_out(sequences, metadata)
        for sequence in selected:
            check_frame_shape(model_cfg, sequence)
        return ModelPredictor(params, model_cfg), selected

    def run_command(self):
        clip_cfg = self.run_config.clip_config()
        eval_cfg = self.run_config.eval_config()
        predictor, sequences = self.predictor(self.load_corpus())
        report = evaluate(
            predictor,
            sequences,
            clip_cfg.input_frames,
            clip_cfg.horizon,
            eval_cfg.threshold,
            eval_cfg.tn_divisor,
            self.args.label,
        )

        out_dir = self.out_path(EVAL_DIR)
        if not os.path.isdir(out_dir):
            os.makedirs(out_dir)
        write_csv(os.path.join(out_dir, METRICS_CSV), report)
        write_json(os.path.join(out_dir, METRICS_JSON), report)

        msg = prepare_terminate_message(
            "{label} on {n} sequences: mean precision {p:.4f}, mean modified "
            "accuracy {a:.4f}, report in {out}".format(
                label=report.label,
                n=len(report.sequence_ids),
                p=report.mean_precision,
                a=report.mean_accuracy,
                out=out_dir,
            ),
            raw=report.to_dict(),
        )
        if self.args.verbose:
            msg['verbose'] = "\n".join([
                "modified accuracy",
                comparison_table([report], 'accuracy'),
                "precision",
                comparison_table([report], 'precision'),
            ])
        return status_code.OK, msg
