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
import mock
import numpy as np
import pytest

from plume_utils.datagen.solver import AdvectionDiffusionSolver
from plume_utils.datagen.solver import binarize
from plume_utils.datagen.solver import simulate
from plume_utils.datagen.wind import WindField
from plume_utils.util.error import CFLViolationError
from plume_utils.util.error import GenerationError
from plume_utils.util.error import InvalidConfigurationError


CALM = WindField(0.0, 0.0)


def centre_of_mass(frame):
    rows, cols = np.indices(frame.shape)
    total = frame.sum()
    return (rows * frame).sum() / total, (cols * frame).sum() / total


class TestMassConservation(object):

    def test_closed_diffusion_step(self, closed_cfg):
        solver = AdvectionDiffusionSolver(closed_cfg, CALM)
        c = np.random.RandomState(0).rand(*closed_cfg.grid)
        for _ in range(20):
            updated = solver.step(c)
            assert abs(updated.sum() - c.sum()) / c.sum() < 1e-8
            c = updated

    def test_closed_run(self, closed_cfg):
        frames = simulate(closed_cfg, WindField.from_degrees(250, 2.0))
        np.testing.assert_allclose(frames.sum(axis=(1, 2)), 5.0, rtol=1e-8)

    def test_absorbing_loses_mass(self, closed_cfg):
        cfg = closed_cfg._replace(boundary='absorbing', grid=(8, 8), source=(4, 4), frames=10)
        totals = simulate(cfg, WindField.from_degrees(270, 8.0)).sum(axis=(1, 2))
        assert np.all(np.diff(totals) <= 1e-12)
        assert totals[-1] < totals[0]


class TestTransport(object):

    def test_calm_without_diffusion_stays_at_source(self, closed_cfg):
        cfg = closed_cfg._replace(kappa=0.0)
        frames = simulate(cfg, CALM)
        expected = np.zeros_like(frames)
        expected[:, 6, 4] = 5.0
        assert np.array_equal(frames, expected)

    def test_centre_of_mass_moves_downwind(self, closed_cfg):
        frames = simulate(closed_cfg, WindField.from_degrees(270, 4.0))
        coms = np.array([centre_of_mass(f) for f in frames])
        # 1 m/s over 5 s frames on a 10 m grid
        np.testing.assert_allclose(np.diff(coms[:, 1]), 0.5, atol=1e-3)
        np.testing.assert_allclose(coms[:, 0], 6.0, atol=1e-2)

    def test_buildings_stay_empty(self, closed_cfg):
        mask = np.zeros(closed_cfg.grid, dtype=np.uint8)
        mask[5:8, 8:11] = 1
        frames = simulate(closed_cfg, WindField.from_degrees(270, 4.0), mask)
        assert np.all(frames[:, mask.astype(bool)] == 0.0)
        assert frames[-1].sum() == pytest.approx(5.0, rel=1e-8)

    def test_non_negative(self, closed_cfg):
        frames = simulate(closed_cfg, WindField.from_degrees(215, 4.0))
        assert frames.min() >= 0.0

    def test_source_in_building(self, closed_cfg):
        mask = np.zeros(closed_cfg.grid, dtype=np.uint8)
        mask[6, 4] = 1
        with pytest.raises(GenerationError):
            simulate(closed_cfg, CALM, mask)


class TestChecks(object):

    @pytest.mark.parametrize('changes', [{'kappa': 30.0}, {'dt': 5.0, 'output_interval': 5.0}])
    def test_cfl_rejected_before_stepping(self, closed_cfg, changes):
        cfg = closed_cfg._replace(**changes)
        wind = WindField.from_degrees(270, 40.0 if 'dt' in changes else 1.0)
        with mock.patch.object(
            AdvectionDiffusionSolver,
            'step',
            autospec=True,
        ) as mock_step:
            with pytest.raises(CFLViolationError):
                simulate(cfg, wind)
        assert not mock_step.called

    def test_interval_not_multiple_of_dt(self, closed_cfg):
        with pytest.raises(InvalidConfigurationError):
            AdvectionDiffusionSolver(closed_cfg._replace(output_interval=2.5), CALM)

    def test_mask_shape(self, closed_cfg):
        with pytest.raises(InvalidConfigurationError):
            AdvectionDiffusionSolver(closed_cfg, CALM, np.zeros((3, 3), dtype=np.uint8))


class TestBinarize(object):

    def test_relative_to_first_peak(self):
        frames = np.array([
            [[2.0, 1.0], [0.5, 0.0]],
            [[0.0, 1.5], [1.01, 0.9]],
        ])
        out = binarize(frames, 0.5)
        assert out.dtype == np.uint8
        assert np.array_equal(out, [[[1, 0], [0, 0]], [[0, 1], [1, 0]]])

    def test_empty_first_frame(self):
        with pytest.raises(GenerationError):
            binarize(np.zeros((3, 4, 4)), 1e-3)

    def test_threshold_positive(self):
        with pytest.raises(InvalidConfigurationError):
            binarize(np.ones((2, 2, 2)), 0.0)
