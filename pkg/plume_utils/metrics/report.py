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
"""Per-timestep metric reports and their export."""
import csv
import json
from collections import namedtuple

import numpy as np
from humanfriendly.tables import format_pretty_table

from plume_utils.metrics.scores import confusion
from plume_utils.metrics.scores import ConfusionCounts
from plume_utils.metrics.scores import modified_accuracy
from plume_utils.metrics.scores import precision
from plume_utils.util.error import ContractError


CSV_COLUMNS = ['t', 'precision', 'modified_accuracy', 'tp', 'fp', 'tn', 'fn']


class MetricReport(namedtuple(
    'MetricReport',
    ['label', 'timesteps', 'precision', 'accuracy', 'counts', 'sequence_ids', 'metadata'],
)):
    """Scores of predicted frames, one entry per forecast timestep.

    * **label** (``str``): model or run name
    * **timesteps** (``list``): frame numbers T + 1 .. T + k
    * **precision**, **accuracy** (``list``): precision and modified
      accuracy per timestep
    * **counts** (``list``): ConfusionCounts per timestep, summed over
      sequences
    * **sequence_ids** (``list``): sequences the report averages
    * **metadata** (``dict``): threshold, tn_divisor, skipped sequences
    """
    __slots__ = ()

    @property
    def mean_precision(self):
        return float(np.mean(self.precision)) if self.precision else 0.0

    @property
    def mean_accuracy(self):
        return float(np.mean(self.accuracy)) if self.accuracy else 0.0

    def rows(self):
        for t, p, a, c in zip(self.timesteps, self.precision, self.accuracy, self.counts):
            yield [t, p, a, c.tp, c.fp, c.tn, c.fn]

    def to_dict(self):
        return {
            'label': self.label,
            'sequence_ids': list(self.sequence_ids),
            'metadata': self.metadata,
            'mean_precision': self.mean_precision,
            'mean_modified_accuracy': self.mean_accuracy,
            'timesteps': [dict(zip(CSV_COLUMNS, row)) for row in self.rows()],
        }


def sequence_report(sequence_id, timesteps, pred_bins, truth_bins, tn_divisor, label=''):
    """Report of one sequence from binary predicted and true frames."""
    if len(pred_bins) != len(truth_bins) or len(pred_bins) != len(timesteps):
        raise ContractError("Predicted, true frames and timesteps differ in length")
    counts = [confusion(p, t) for p, t in zip(pred_bins, truth_bins)]
    return MetricReport(
        label=label,
        timesteps=list(timesteps),
        precision=[precision(c) for c in counts],
        accuracy=[modified_accuracy(c, tn_divisor) for c in counts],
        counts=counts,
        sequence_ids=[sequence_id],
        metadata={'tn_divisor': tn_divisor},
    )


def average_reports(reports, label='', metadata=None):
    """Equal-weight mean over sequences, per timestep."""
    if not reports:
        raise ContractError("Nothing to average")
    timesteps = reports[0].timesteps
    if any(r.timesteps != timesteps for r in reports):
        raise ContractError("Reports cover different timesteps")
    counts = []
    for i in range(len(timesteps)):
        total = ConfusionCounts(0, 0, 0, 0)
        for report in reports:
            total = total + report.counts[i]
        counts.append(total)
    return MetricReport(
        label=label,
        timesteps=list(timesteps),
        precision=[float(np.mean([r.precision[i] for r in reports])) for i in range(len(timesteps))],
        accuracy=[float(np.mean([r.accuracy[i] for r in reports])) for i in range(len(timesteps))],
        counts=counts,
        sequence_ids=[s for r in reports for s in r.sequence_ids],
        metadata=dict(metadata or {}),
    )


def write_csv(path, report):
    with open(path, 'w') as out:
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(CSV_COLUMNS)
        for t, p, a, tp, fp, tn, fn in report.rows():
            writer.writerow([t, '{0:.6f}'.format(p), '{0:.6f}'.format(a), tp, fp, tn, fn])


def write_json(path, report):
    with open(path, 'w') as out:
        json.dump(report.to_dict(), out, sort_keys=True, indent=2)
        out.write('\n')


def read_json(path):
    with open(path) as infile:
        data = json.load(infile)
    rows = data['timesteps']
    return MetricReport(
        label=data['label'],
        timesteps=[row['t'] for row in rows],
        precision=[row['precision'] for row in rows],
        accuracy=[row['modified_accuracy'] for row in rows],
        counts=[ConfusionCounts(row['tp'], row['fp'], row['tn'], row['fn']) for row in rows],
        sequence_ids=data['sequence_ids'],
        metadata=data['metadata'],
    )


def comparison_table(reports, metric='accuracy'):
    """One row per report, one column per timestep, plus the mean."""
    if metric not in ('accuracy', 'precision'):
        raise ContractError("Unknown metric {0}".format(metric))
    if not reports:
        raise ContractError("Nothing to compare")
    timesteps = reports[0].timesteps
    header = ['model'] + ['t={0}'.format(t) for t in timesteps] + ['mean']
    rows = []
    for report in reports:
        values = getattr(report, metric)
        mean = report.mean_accuracy if metric == 'accuracy' else report.mean_precision
        rows.append(
            [report.label] + ['{0:.3f}'.format(v) for v in values] + ['{0:.3f}'.format(mean)]
        )
    return format_pretty_table(rows, header)
